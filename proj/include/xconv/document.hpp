#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "xconv/conversation.hpp"
#include "xconv/error.hpp"
#include "xconv/formula.hpp"
#include "xconv/model.hpp"

namespace xconv {

using json = nlohmann::json;

inline constexpr int kDocumentVersion = 1;

struct LoadOptions {
  /// Reject relations that are not already reflexive and transitive instead
  /// of closing them.
  bool strict = false;
};

/// Loading failure with one located diagnostic per problem, e.g.
/// "evidence[3].term: at column 5: expected a term near ')'".
class ModelLoadError : public Error {
 public:
  explicit ModelLoadError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

json read_json_file(const std::filesystem::path& path);

/// Canonical document: sorted keys, closed relations, evidence in term order.
json model_to_json(const Model& m);
/// Parses the document without checking model invariants (besides closure in
/// strict mode). Throws ModelLoadError.
Model model_from_json(const json& doc, const LoadOptions& opts = {});
/// model_from_json followed by validate_model; violations become diagnostics.
Model load_model(const json& doc, const LoadOptions& opts = {});
Model load_model_file(const std::filesystem::path& path, const LoadOptions& opts = {});

/// Hex SHA-256 of the compact canonical model document.
std::string model_digest(const Model& m);

json explanation_to_json(const Explanation& e);
/// Accepts the nested {claim, premises} object or the text form.
Explanation explanation_from_json(const json& j);
json bits_to_json(const BitTree& b);
/// Accepts the nested {bit, premises} object or the text form "1/0/0".
BitTree bits_from_json(const json& j);
json feedback_to_json(const FeedbackRecord& fb);
FeedbackRecord feedback_from_json(const json& j);

/// A formula string, or {"after_explanation": {"agent": 2, "explanation": E},
/// "formula": F} / {"after_feedback": {"agent": 1, "feedback": FB}, "formula": F}.
Formula formula_from_json(const json& j);

json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const json& j);

}  // namespace xconv
