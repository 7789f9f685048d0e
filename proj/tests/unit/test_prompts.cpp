#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "proco/errors.hpp"
#include "proco/prompts.hpp"

using namespace proco;

TEST_CASE("builtin templates render byte-exactly") {
  PromptCatalog catalog = PromptCatalog::builtin();

  CHECK(catalog.render(TemplateId::InitialReasoning, {{"question", ""}}) ==
        "Q: \nA: Let's think step by step.");
  CHECK(catalog.render(TemplateId::InitialReasoning,
                       {{"question", "If Jan is 30 how old is Jean?"}}) ==
        "Q: If Jan is 30 how old is Jean?\nA: Let's think step by step.");

  CHECK(catalog.render(TemplateId::NumericExtract,
                       {{"question", "q"}, {"reasoning", "r"}}) ==
        "Q: q\nA: r The answer (arabic numerals) is:");

  CHECK(catalog.render(TemplateId::Correction,
                       {{"question", "q"}, {"incorrect_set", "{19}"}}) ==
        "Q: q (the answer is likely not in {19})\nA: Let's think step by step.");

  CHECK(catalog.render(TemplateId::EntityExtract,
                       {{"question", "q"}, {"reasoning", "r"}}) ==
        "Answer the following question with just one entity.\nQ: q\nA: r The "
        "answer is:");

  CHECK(catalog.render(TemplateId::KeyCondZeroShot, {{"question", "Q text"}}) ==
        "Given the question below, the task is to identify a set of entities "
        "within the question and then select the one that is most relevant to "
        "the problem-solving process.\nQ text");

  CHECK(catalog.render(
            TemplateId::EquivalenceCheck,
            {{"verification_question",
              "Who plays X on Lab Rats: Elite Force? Suppose the answer is Paris "
              "Berelc. What is the value of unknown variable X?"},
             {"key_condition", "Skylar"},
             {"verified_answer", "Skylar Storm"}}) ==
        "Determine the correctness of the proposition: If the answer to question "
        "Who plays X on Lab Rats: Elite Force? Suppose the answer is Paris "
        "Berelc. What is the value of unknown variable X? is Skylar, then X "
        "could also be Skylar Storm");

  CHECK(catalog.render(TemplateId::SelfCorrectCritique,
                       {{"question", "q"}, {"answer", "19"}}) ==
        "Q: q\nA: 19\nReview previous answer and find mistakes.");
}

TEST_CASE("render keeps every binding value verbatim") {
  PromptCatalog catalog = PromptCatalog::builtin();
  std::map<std::string, std::string> bindings = {
      {"question", "What could go on top of wood?"},
      {"incorrect_set", "{(C) floor, 42}"}};
  std::string rendered = catalog.render(TemplateId::Correction, bindings);
  for (const auto& [_, value] : bindings) {
    CHECK(rendered.find(value) != std::string::npos);
  }
}

TEST_CASE("render reports missing bindings by name") {
  PromptCatalog catalog = PromptCatalog::builtin();
  CHECK_THROWS_WITH_AS(catalog.render(TemplateId::Correction, {{"question", "q"}}),
                       doctest::Contains("incorrect_set"), Error);
}

TEST_CASE("rendered output carries no residual placeholder markers") {
  PromptCatalog catalog = PromptCatalog::builtin();
  for (TemplateId id :
       {TemplateId::InitialReasoning, TemplateId::NumericExtract,
        TemplateId::VerificationQ, TemplateId::Correction, TemplateId::EntityExtract,
        TemplateId::KeyCondZeroShot, TemplateId::EquivalenceCheck,
        TemplateId::SelfCorrectCritique, TemplateId::SelfCorrectRefine,
        TemplateId::GenReadDocs, TemplateId::DocAnswer}) {
    std::map<std::string, std::string> bindings;
    for (const auto& name : catalog.placeholders(id)) bindings[name] = "v";
    std::string rendered = catalog.render(id, bindings);
    CHECK(rendered.find('{') == std::string::npos);
    CHECK(rendered.find('}') == std::string::npos);
  }
}

TEST_CASE("catalog round-trips through its file format") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "proco_prompts_roundtrip.txt";
  PromptCatalog builtin = PromptCatalog::builtin();
  builtin.save(path.string());
  PromptCatalog loaded = PromptCatalog::load(path.string());
  CHECK(loaded == builtin);
  fs::remove(path);
}

TEST_CASE("brace escapes render as literal braces") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "proco_prompts_escape.txt";
  {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    REQUIRE(f);
    std::fputs("[template:InitialReasoning]\nQ: {question} {{literal}}\n", f);
    std::fclose(f);
  }
  PromptCatalog catalog = PromptCatalog::load(path.string());
  CHECK(catalog.render(TemplateId::InitialReasoning, {{"question", "x"}}) ==
        "Q: x {literal}");
  fs::remove(path);
}
