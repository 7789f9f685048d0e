#pragma once

#include <map>
#include <string>
#include <vector>

namespace proco {

enum class TemplateId {
  InitialReasoning,
  NumericExtract,
  VerificationQ,
  Correction,
  EntityExtract,
  KeyCondZeroShot,
  EquivalenceCheck,
  SelfCorrectCritique,
  SelfCorrectRefine,
  GenReadDocs,
  DocAnswer,
};

const char* to_string(TemplateId id);
TemplateId template_id_from_string(const std::string& s);

/// Editable catalog of prompt templates. Placeholders are written {name};
/// literal braces are escaped as {{ and }}. The built-in catalog is the
/// shipped default; load() reads the same record format from a file:
///
///   [template:InitialReasoning]
///   Q: {question}
///   A: Let's think step by step.
///
/// Records are separated by one blank line; a record's body is everything
/// between its header and the next header, minus the separator line.
class PromptCatalog {
 public:
  static PromptCatalog builtin();
  static PromptCatalog load(const std::string& path);

  void save(const std::string& path) const;

  const std::string& text(TemplateId id) const;

  /// Substitutes every placeholder; throws MissingBinding naming any
  /// placeholder absent from `bindings`.
  std::string render(TemplateId id,
                     const std::map<std::string, std::string>& bindings) const;

  /// Placeholder names appearing in the template, in order of first use.
  std::vector<std::string> placeholders(TemplateId id) const;

  bool operator==(const PromptCatalog&) const = default;

 private:
  std::map<TemplateId, std::string> templates_;
};

}  // namespace proco
