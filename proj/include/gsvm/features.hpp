#pragma once

#include <string>
#include <vector>

#include <gsvm/preprocess.hpp>

namespace gsvm {

inline constexpr int kGlobalFeatureCount = 4;

/// Zoning grid. `cell_px` is the side of one square cell on the 32x32 image,
/// so cell_px = 4 gives an 8x8 grid of 64 local features.
struct FeatureConfig {
  int cell_px = 4;
  int image_px = kNormalizedSize;

  /// Throws InvalidArgument unless cell_px is one of 16, 8, 4, 2.
  void validate() const;
  int cells_per_side() const { return image_px / cell_px; }
  int local_count() const { return cells_per_side() * cells_per_side(); }
  int total_count() const { return local_count() + kGlobalFeatureCount; }
};

/// Layout: local cell counts in row-major cell order, then w/h ratio,
/// endpoint count, cross-point count, branch-point count.
struct FeatureVector {
  std::vector<double> values;
  FeatureConfig config;
};

struct SkeletonTopology {
  int endpoints = 0;
  int branch_points = 0;
  int cross_points = 0;
  bool operator==(const SkeletonTopology&) const = default;
};

/// Ink count per cell of the thinned image. Throws WrongDimensions.
std::vector<double> local_zone_features(const BinaryImage& skeleton, const FeatureConfig& config);

double aspect_ratio(const BoundingBox& bbox);

/// Classification by crossing number T (0->1 transitions around the 8-neighbourhood):
/// T = 1 endpoint, T = 3 branch point, T >= 4 cross point.
SkeletonTopology skeleton_topology(const BinaryImage& skeleton);

FeatureVector extract_features(const CharacterRecord& record, const FeatureConfig& config);

/// `label,v1..vn,whr,ep,cp,bp`
std::string feature_csv_header(const FeatureConfig& config);

}  // namespace gsvm
