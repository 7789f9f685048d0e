#include "proco/prompts.hpp"

#include <fstream>
#include <sstream>

#include "proco/errors.hpp"

namespace proco {

namespace {

struct BuiltinTemplate {
  TemplateId id;
  const char* body;
};

constexpr BuiltinTemplate kBuiltins[] = {
    {TemplateId::InitialReasoning,
     "Q: {question}\n"
     "A: Let's think step by step."},
    {TemplateId::NumericExtract,
     "Q: {question}\n"
     "A: {reasoning} The answer (arabic numerals) is:"},
    {TemplateId::VerificationQ,
     "{masked_question} Suppose the answer is {previous_answer}. What is the "
     "value of unknown variable X?"},
    {TemplateId::Correction,
     "Q: {question} (the answer is likely not in {incorrect_set})\n"
     "A: Let's think step by step."},
    {TemplateId::EntityExtract,
     "Answer the following question with just one entity.\n"
     "Q: {question}\n"
     "A: {reasoning} The answer is:"},
    {TemplateId::KeyCondZeroShot,
     "Given the question below, the task is to identify a set of entities "
     "within the question and then select the one that is most relevant to "
     "the problem-solving process.\n"
     "{question}"},
    {TemplateId::EquivalenceCheck,
     "Determine the correctness of the proposition: If the answer to question "
     "{verification_question} is {key_condition}, then X could also be "
     "{verified_answer}"},
    {TemplateId::SelfCorrectCritique,
     "Q: {question}\n"
     "A: {answer}\n"
     "Review previous answer and find mistakes."},
    {TemplateId::SelfCorrectRefine,
     "Q: {question}\n"
     "Previous answer: {answer}\n"
     "Critique: {critique}\n"
     "Based on the critique, answer the question again.\n"
     "A: Let's think step by step."},
    {TemplateId::GenReadDocs,
     "Generate {num_documents} background documents that provide helpful "
     "context for answering the question. Separate the documents with a line "
     "containing only ---.\n"
     "Q: {question}"},
    {TemplateId::DocAnswer,
     "Refer to the passages below and answer the following question.\n"
     "Passages: {documents}\n"
     "Q: {question}\n"
     "A: Let's think step by step."},
};

constexpr const char* kHeaderPrefix = "[template:";

}  // namespace

const char* to_string(TemplateId id) {
  switch (id) {
    case TemplateId::InitialReasoning: return "InitialReasoning";
    case TemplateId::NumericExtract: return "NumericExtract";
    case TemplateId::VerificationQ: return "VerificationQ";
    case TemplateId::Correction: return "Correction";
    case TemplateId::EntityExtract: return "EntityExtract";
    case TemplateId::KeyCondZeroShot: return "KeyCondZeroShot";
    case TemplateId::EquivalenceCheck: return "EquivalenceCheck";
    case TemplateId::SelfCorrectCritique: return "SelfCorrectCritique";
    case TemplateId::SelfCorrectRefine: return "SelfCorrectRefine";
    case TemplateId::GenReadDocs: return "GenReadDocs";
    case TemplateId::DocAnswer: return "DocAnswer";
  }
  return "?";
}

TemplateId template_id_from_string(const std::string& s) {
  for (const auto& builtin : kBuiltins) {
    if (s == to_string(builtin.id)) return builtin.id;
  }
  throw Error(ErrorCode::ParseFailure, "unknown template id: " + s);
}

PromptCatalog PromptCatalog::builtin() {
  PromptCatalog catalog;
  for (const auto& builtin : kBuiltins) {
    catalog.templates_[builtin.id] = builtin.body;
  }
  return catalog;
}

PromptCatalog PromptCatalog::load(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "prompt catalog not readable: " + path);

  PromptCatalog catalog;
  std::string line;
  bool have_record = false;
  TemplateId current{};
  std::vector<std::string> body_lines;

  auto flush = [&]() {
    if (!have_record) return;
    // The blank separator line before the next header is not part of the body.
    while (!body_lines.empty() && body_lines.back().empty()) body_lines.pop_back();
    std::string body;
    for (std::size_t i = 0; i < body_lines.size(); ++i) {
      if (i) body.push_back('\n');
      body += body_lines[i];
    }
    catalog.templates_[current] = std::move(body);
    body_lines.clear();
  };

  while (std::getline(file, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(kHeaderPrefix, 0) == 0 && line.back() == ']') {
      flush();
      std::string name = line.substr(std::string(kHeaderPrefix).size());
      name.pop_back();
      current = template_id_from_string(name);
      have_record = true;
    } else if (have_record) {
      body_lines.push_back(line);
    }
  }
  flush();
  if (catalog.templates_.empty())
    throw Error(ErrorCode::ParseFailure, "no template records in " + path);
  return catalog;
}

void PromptCatalog::save(const std::string& path) const {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::NotFound, "prompt catalog not writable: " + path);
  bool first = true;
  for (const auto& [id, body] : templates_) {
    if (!first) file << '\n';
    first = false;
    file << kHeaderPrefix << to_string(id) << "]\n" << body << '\n';
  }
}

const std::string& PromptCatalog::text(TemplateId id) const {
  auto it = templates_.find(id);
  if (it == templates_.end())
    throw Error(ErrorCode::NotFound, std::string("no template ") + to_string(id));
  return it->second;
}

std::string PromptCatalog::render(
    TemplateId id, const std::map<std::string, std::string>& bindings) const {
  const std::string& tmpl = text(id);
  std::string out;
  out.reserve(tmpl.size());
  std::vector<std::string> missing;

  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      out.push_back('{');
      ++i;
    } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out.push_back('}');
      ++i;
    } else if (c == '{') {
      std::size_t close = tmpl.find('}', i);
      if (close == std::string::npos)
        throw Error(ErrorCode::ParseFailure,
                    std::string("unterminated placeholder in template ") + to_string(id));
      std::string name = tmpl.substr(i + 1, close - i - 1);
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        missing.push_back(name);
      } else {
        out += it->second;
      }
      i = close;
    } else {
      out.push_back(c);
    }
  }

  if (!missing.empty()) {
    std::string names;
    for (const auto& name : missing) {
      if (!names.empty()) names += ", ";
      names += name;
    }
    throw Error(ErrorCode::MissingBinding, names);
  }
  return out;
}

std::vector<std::string> PromptCatalog::placeholders(TemplateId id) const {
  const std::string& tmpl = text(id);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    char c = tmpl[i];
    if ((c == '{' || c == '}') && i + 1 < tmpl.size() && tmpl[i + 1] == c) {
      ++i;
      continue;
    }
    if (c == '{') {
      std::size_t close = tmpl.find('}', i);
      if (close == std::string::npos) break;
      std::string name = tmpl.substr(i + 1, close - i - 1);
      if (std::find(names.begin(), names.end(), name) == names.end())
        names.push_back(name);
      i = close;
    }
  }
  return names;
}

}  // namespace proco
