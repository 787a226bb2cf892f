#include "rsa/error.hpp"

namespace rsa {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::DuplicateClassName: return "DuplicateClassName";
    case ErrorKind::LabelOutOfRange: return "LabelOutOfRange";
    case ErrorKind::ClassOutOfRange: return "ClassOutOfRange";
    case ErrorKind::DegenerateClassMean: return "DegenerateClassMean";
    case ErrorKind::TooFewUnits: return "TooFewUnits";
    case ErrorKind::InvalidRdm: return "InvalidRdm";
    case ErrorKind::TooFewClasses: return "TooFewClasses";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewElements: return "TooFewElements";
    case ErrorKind::ConstantInput: return "ConstantInput";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::TooFewImages: return "TooFewImages";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BatchTooSmall: return "BatchTooSmall";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::InvalidLevels: return "InvalidLevels";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::BadHeader: return "BadHeader";
    case ErrorKind::DuplicateHeader: return "DuplicateHeader";
    case ErrorKind::RaggedRow: return "RaggedRow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

}  // namespace rsa
