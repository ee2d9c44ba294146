#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <gsvm/image.hpp>

namespace gsvm {

/// Jittered renderings of abstract stroke glyphs (lines, arcs, loops,
/// junctions). Classes are numbered 1..K; class k uses library glyph k-1.
struct SynthConfig {
  int classes = 10;
  int samples_per_class = 50;
  double max_rotation_deg = 10.0;
  double min_scale = 0.8;
  double max_scale = 1.2;
  double max_translation_px = 3.0;
  /// Fraction of pixels replaced by salt or pepper.
  double noise_rate = 0.0;
  std::uint64_t seed = 7;

  /// Throws InvalidConfig.
  void validate() const;
};

struct GlyphPose {
  double rotation_deg = 0.0;
  double scale = 1.0;
  double dx = 0.0;
  double dy = 0.0;
};

inline constexpr int kGlyphCanvas = 72;

int glyph_library_size();
std::string glyph_name(int glyph_index);

/// Renders library glyph `glyph_index` onto a kGlyphCanvas-square canvas (ink dark).
GrayImage render_glyph(int glyph_index, const GlyphPose& pose);

/// Sample `index` of class `class_id` (1-based) under the config's seeded jitter
/// and noise. Depends only on (seed, class_id, index).
GrayImage synth_sample(const SynthConfig& config, int class_id, int index);

/// Writes `<out_dir>/<class_id>/<class_id>_<index>.pgm` for every sample and
/// returns the number of files. Throws InvalidConfig, IoFailure.
std::size_t generate_synthetic_dataset(const SynthConfig& config, const std::filesystem::path& out_dir);

struct PageConfig {
  int lines = 3;
  int chars_per_line = 6;
  int classes = 10;
  double skew_degrees = 0.0;
  double noise_rate = 0.0;
  std::uint64_t seed = 1;
};

struct SynthPage {
  GrayImage image;
  /// Class id of each character, line by line, left to right.
  std::vector<int> labels;
};

/// A page of glyph rows rotated by `skew_degrees` (counterclockwise as displayed).
SynthPage render_page(const PageConfig& config);

}  // namespace gsvm
