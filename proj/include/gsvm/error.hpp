#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsvm {

/// Machine-readable failure category. The CLI prints `category_name()` as the
/// first token of its one-line error message.
enum class ErrorCode {
  InvalidArgument,
  UniformImage,
  EmptyPage,
  AngleOutOfRange,
  EmptyCrop,
  WrongDimensions,
  DimensionMismatch,
  SingleClass,
  NoConvergence,
  DegenerateSplit,
  BadK,
  FoldDegenerate,
  UnreadableFile,
  EmptyClass,
  MixedDimensions,
  BadMagic,
  VersionMismatch,
  CorruptBlock,
  IoFailure,
  InvalidConfig,
};

std::string_view category_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view category() const noexcept { return category_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace gsvm
