#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <gsvm/image.hpp>

namespace gsvm {

/// Decodes an 8-bit PGM (P2 ASCII or P5 binary). Samples are rescaled to
/// 0..255 when maxval is below 255. Any malformed input raises UnreadableFile.
GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);

/// Encodes P5 binary.
void write_pgm(std::ostream& out, const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// Debug dump of a bitmap: ink as 0 (black), background as 255.
GrayImage to_gray(const BinaryImage& img);

/// Writes `contents` to `path` through a temporary sibling and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace gsvm
