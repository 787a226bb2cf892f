#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rsa {

enum class ErrorKind {
  ShapeMismatch,
  EmptyClass,
  NonFiniteValue,
  DuplicateClassName,
  LabelOutOfRange,
  ClassOutOfRange,
  DegenerateClassMean,
  TooFewUnits,
  InvalidRdm,
  TooFewClasses,
  LengthMismatch,
  TooFewElements,
  ConstantInput,
  ClassMismatch,
  LabelMismatch,
  TooFewImages,
  InvalidArgument,
  BatchTooSmall,
  NonSquare,
  ConfigInvalid,
  InvalidLevels,
  EmptyFile,
  BadHeader,
  DuplicateHeader,
  RaggedRow,
  ParseError,
  UnknownLabel,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the toolkit is reported as an Error carrying a kind
/// whose name is also the first token of what().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rsa
