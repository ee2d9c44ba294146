#pragma once

#include <filesystem>
#include <iosfwd>

#include <gsvm/multiclass.hpp>

namespace gsvm {

inline constexpr const char* kModelMagic = "GSVM1";
inline constexpr int kModelFormatVersion = 1;

/// Line-oriented text format, every real written with 17 significant digits:
///
///   GSVM1
///   version 1
///   strategy ova|ovo
///   classes <N> <id...>
///   kernel <name> degree <d> gamma <g> slope <a> offset <r>
///   dimension <D>
///   scale_min <D values>
///   scale_max <D values>
///   classifiers <M>
///   classifier <k>          (M blocks)
///   C <c>
///   bias <b>
///   meta <iterations> <kkt violation>
///   sv <count>
///   <coef> <D values>       (count lines)
///   end
void write_model(std::ostream& out, const MulticlassModel& model);
void save_model(const MulticlassModel& model, const std::filesystem::path& path);

/// Throws BadMagic, VersionMismatch, CorruptBlock (truncation, count or length
/// mismatch, unparsable numbers), UnreadableFile.
MulticlassModel read_model(std::istream& in);
MulticlassModel load_model(const std::filesystem::path& path);

}  // namespace gsvm
