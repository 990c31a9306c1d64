#include "facerec/error.hpp"

namespace facerec {

std::string_view errc_name(Errc code) {
  switch (code) {
  case Errc::FileNotFound: return "FileNotFound";
  case Errc::UnsupportedFormat: return "UnsupportedFormat";
  case Errc::CorruptImage: return "CorruptImage";
  case Errc::EmptyImage: return "EmptyImage";
  case Errc::ManifestParseError: return "ManifestParseError";
  case Errc::InvalidSpec: return "InvalidSpec";
  case Errc::CoefficientCountOutOfRange: return "CoefficientCountOutOfRange";
  case Errc::EmptyInput: return "EmptyInput";
  case Errc::DimensionMismatch: return "DimensionMismatch";
  case Errc::NotSymmetric: return "NotSymmetric";
  case Errc::ConvergenceFailure: return "ConvergenceFailure";
  case Errc::DegenerateData: return "DegenerateData";
  case Errc::IndexOutOfRange: return "IndexOutOfRange";
  case Errc::KOutOfRange: return "KOutOfRange";
  case Errc::EmptyModel: return "EmptyModel";
  case Errc::EmptyClass: return "EmptyClass";
  case Errc::LengthMismatch: return "LengthMismatch";
  case Errc::UnknownLabel: return "UnknownLabel";
  case Errc::EmptyMatrix: return "EmptyMatrix";
  case Errc::ModelFormatError: return "ModelFormatError";
  case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string &message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code), detail_(message) {}

void rethrow_with_context(const Error &e, const std::string &context) {
  throw Error(e.code(), context + ": " + e.detail());
}

} // namespace facerec
