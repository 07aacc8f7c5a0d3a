#pragma once

#include <stdexcept>
#include <utility>
#include <string>
#include <string_view>

namespace ifbl {

/// Broad failure category. The CLI maps it onto exit codes and the HTTP
/// service onto status codes.
enum class ErrorKind {
  InputShape,
  Validation,
  Conditioning,
  Infeasible,
  SolverFailure,
  Parse,
  Io,
  NotFound,
  Incomplete,
};

/// Machine-readable error codes. This is the closed set surfaced by the API.
namespace codes {
inline constexpr std::string_view kShape = "validation.shape";
inline constexpr std::string_view kSigmaNotSymmetric = "validation.sigma.not_symmetric";
inline constexpr std::string_view kSigmaNotSpd = "validation.sigma.not_spd";
inline constexpr std::string_view kWeights = "validation.weights";
inline constexpr std::string_view kParameter = "validation.parameter";
inline constexpr std::string_view kViews = "validation.views";
inline constexpr std::string_view kViewDominance = "validation.views.dominance";
inline constexpr std::string_view kIfs = "validation.ifs";
inline constexpr std::string_view kConfig = "validation.config";
inline constexpr std::string_view kParse = "parse.syntax";
inline constexpr std::string_view kConditioning = "numeric.conditioning";
inline constexpr std::string_view kSolverFailure = "numeric.solver_failure";
inline constexpr std::string_view kInfeasible = "views.infeasible";
inline constexpr std::string_view kIncomplete = "workspace.incomplete";
inline constexpr std::string_view kNotFound = "not_found";
inline constexpr std::string_view kIo = "io.failure";
inline constexpr std::string_view kNoSamples = "validation.samples.empty";
}  // namespace codes

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string_view code, const std::string& message,
        std::string field_path = {})
      : std::runtime_error(field_path.empty() ? message : field_path + ": " + message),
        kind_(kind),
        code_(code),
        message_(message),
        field_path_(std::move(field_path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }
  const std::string& field_path() const noexcept { return field_path_; }
  /// Message without the field-path prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string code_;
  std::string message_;
  std::string field_path_;
};

}  // namespace ifbl
