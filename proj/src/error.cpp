#include <gsvm/error.hpp>

namespace gsvm {

std::string_view category_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UniformImage: return "UniformImage";
    case ErrorCode::EmptyPage: return "EmptyPage";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::EmptyCrop: return "EmptyCrop";
    case ErrorCode::WrongDimensions: return "WrongDimensions";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::FoldDegenerate: return "FoldDegenerate";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::MixedDimensions: return "MixedDimensions";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptBlock: return "CorruptBlock";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace gsvm
