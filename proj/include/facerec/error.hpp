#ifndef FACEREC_ERROR_HPP
#define FACEREC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace facerec {

enum class Errc {
  FileNotFound,
  UnsupportedFormat,
  CorruptImage,
  EmptyImage,
  ManifestParseError,
  InvalidSpec,
  CoefficientCountOutOfRange,
  EmptyInput,
  DimensionMismatch,
  NotSymmetric,
  ConvergenceFailure,
  DegenerateData,
  IndexOutOfRange,
  KOutOfRange,
  EmptyModel,
  EmptyClass,
  LengthMismatch,
  UnknownLabel,
  EmptyMatrix,
  ModelFormatError,
  IoError,
};

std::string_view errc_name(Errc code);

// All library failures are reported through this one exception type; what()
// always begins with the error code name, e.g. "DimensionMismatch: ...".
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string &message);

  Errc code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string &detail() const noexcept { return detail_; }

private:
  Errc code_;
  std::string detail_;
};

// Re-throws `e` with `context` prepended to its detail, keeping the code.
[[noreturn]] void rethrow_with_context(const Error &e,
                                       const std::string &context);

} // namespace facerec

#endif // FACEREC_ERROR_HPP
