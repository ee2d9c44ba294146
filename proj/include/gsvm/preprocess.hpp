#pragma once

#include <optional>
#include <vector>

#include <gsvm/image.hpp>

namespace gsvm {

inline constexpr int kNormalizedSize = 32;
inline constexpr double kMaxSkewDegrees = 15.0;
inline constexpr int kMinComponentArea = 5;

/// One segmented character. `normalized` and `skeleton` are always 32x32;
/// they stay blank until `complete_record` fills them.
struct CharacterRecord {
  BoundingBox bbox;
  BinaryImage crop;
  BinaryImage normalized{kNormalizedSize, kNormalizedSize};
  BinaryImage skeleton{kNormalizedSize, kNormalizedSize};
  std::optional<int> label;
};

/// Inclusive row range of one text line.
struct LineInterval {
  int top = 0;
  int bottom = 0;
  bool operator==(const LineInterval&) const = default;
};

struct OtsuResult {
  int threshold = 0;
  BinaryImage binary;
};

/// 3x3 median with replicate padding.
GrayImage median_filter(const GrayImage& img);

/// Global Otsu threshold over the 256-bin histogram. Pixels with intensity
/// <= threshold become ink. The smallest maximizing threshold wins ties.
/// Throws UniformImage when every pixel has the same intensity.
OtsuResult otsu_binarize(const GrayImage& img);

/// Between-class variance w0 * w1 * (mu0 - mu1)^2 for a threshold. Exposed for diagnostics.
double otsu_between_class_variance(const GrayImage& img, int threshold);

/// Rotates the bitmap's content counterclockwise (as displayed) by `degrees`
/// about its center with bicubic interpolation, re-binarized at 0.5. The canvas
/// grows to hold the whole rotated content; exposed area is background.
BinaryImage rotate(const BinaryImage& img, double degrees);

/// Skew angle in [-15, 15] degrees maximizing the variance of the horizontal
/// projection profile after undoing it. Coarse sweep in 0.5 degree steps, then
/// 0.1 degree steps within +-0.5 of the coarse optimum. Ties resolve toward 0,
/// then toward the negative angle. Throws EmptyPage.
double detect_skew(const BinaryImage& page);

/// Rotates by -angle. Throws AngleOutOfRange for |angle| > 15.
BinaryImage deskew(const BinaryImage& page, double angle_degrees);

/// Text lines from the horizontal projection profile, top to bottom.
/// Touching lines (no blank row between them) are cut at the minimum row
/// between profile peaks, a peak row being one whose count exceeds half of
/// its run's maximum.
std::vector<LineInterval> segment_lines(const BinaryImage& page);

/// 8-connected components of area >= 5, ordered by left edge then top edge.
/// Each record carries its tight box and a crop holding only that component.
std::vector<CharacterRecord> segment_characters(const BinaryImage& line);

/// Bicubic resample to 32x32, each axis scaled independently, re-binarized at 0.5.
/// Throws EmptyCrop if the crop has no ink.
BinaryImage normalize_size(const BinaryImage& crop);

/// Zhang-Suen thinning to a fixpoint on a 32x32 bitmap. Throws WrongDimensions.
BinaryImage thin(const BinaryImage& normalized);

/// The same thinning for arbitrary sizes.
BinaryImage zhang_suen_thin(const BinaryImage& img);

/// Fills `normalized` and `skeleton` from `crop`.
void complete_record(CharacterRecord& record);

struct PageResult {
  int threshold = 0;
  double skew_degrees = 0.0;
  BinaryImage deskewed;
  std::vector<LineInterval> lines;
  std::vector<CharacterRecord> characters;
};

/// Full page pipeline: median filter, Otsu, skew correction, line and
/// character segmentation, normalization and thinning. Character boxes are in
/// deskewed-page coordinates.
PageResult process_page(const GrayImage& page);

/// Pipeline for a file that already holds one character: median filter, Otsu,
/// speck removal, crop to the ink's bounding box, normalization and thinning.
CharacterRecord process_character(const GrayImage& img);

}  // namespace gsvm
