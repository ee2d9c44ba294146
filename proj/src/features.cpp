#include <gsvm/features.hpp>

#include <array>

namespace gsvm {

void FeatureConfig::validate() const {
  if (image_px != kNormalizedSize) throw Error(ErrorCode::InvalidArgument, "feature config: image_px must be 32");
  if (cell_px != 16 && cell_px != 8 && cell_px != 4 && cell_px != 2) {
    throw Error(ErrorCode::InvalidArgument, "feature config: cell size must be 16, 8, 4 or 2");
  }
}

std::vector<double> local_zone_features(const BinaryImage& skeleton, const FeatureConfig& config) {
  config.validate();
  if (skeleton.width() != config.image_px || skeleton.height() != config.image_px) {
    throw Error(ErrorCode::WrongDimensions, "zoning: expected a 32x32 skeleton");
  }
  const int side = config.cells_per_side();
  std::vector<double> v(static_cast<std::size_t>(side * side), 0.0);
  for (int y = 0; y < skeleton.height(); ++y) {
    for (int x = 0; x < skeleton.width(); ++x) {
      if (skeleton.at(x, y)) v[static_cast<std::size_t>((y / config.cell_px) * side + x / config.cell_px)] += 1.0;
    }
  }
  return v;
}

double aspect_ratio(const BoundingBox& bbox) { return static_cast<double>(bbox.width) / bbox.height; }

SkeletonTopology skeleton_topology(const BinaryImage& skeleton) {
  if (skeleton.width() != kNormalizedSize || skeleton.height() != kNormalizedSize) {
    throw Error(ErrorCode::WrongDimensions, "topology: expected a 32x32 skeleton");
  }
  // clockwise from north
  constexpr std::array<int, 8> dx = {0, 1, 1, 1, 0, -1, -1, -1};
  constexpr std::array<int, 8> dy = {-1, -1, 0, 1, 1, 1, 0, -1};
  SkeletonTopology topo;
  for (int y = 0; y < skeleton.height(); ++y) {
    for (int x = 0; x < skeleton.width(); ++x) {
      if (!skeleton.at(x, y)) continue;
      int t = 0;
      for (int i = 0; i < 8; ++i) {
        const int j = (i + 1) % 8;
        if (!skeleton.get_or(x + dx[i], y + dy[i], 0) && skeleton.get_or(x + dx[j], y + dy[j], 0)) ++t;
      }
      if (t == 1) {
        ++topo.endpoints;
      } else if (t == 3) {
        ++topo.branch_points;
      } else if (t >= 4) {
        ++topo.cross_points;
      }
    }
  }
  return topo;
}

FeatureVector extract_features(const CharacterRecord& record, const FeatureConfig& config) {
  FeatureVector fv{local_zone_features(record.skeleton, config), config};
  const auto topo = skeleton_topology(record.skeleton);
  fv.values.push_back(aspect_ratio(record.bbox));
  fv.values.push_back(topo.endpoints);
  fv.values.push_back(topo.cross_points);
  fv.values.push_back(topo.branch_points);
  return fv;
}

std::string feature_csv_header(const FeatureConfig& config) {
  config.validate();
  std::string h = "label";
  for (int i = 1; i <= config.local_count(); ++i) h += ",v" + std::to_string(i);
  h += ",whr,ep,cp,bp";
  return h;
}

}  // namespace gsvm
