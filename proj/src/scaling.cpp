#include <gsvm/scaling.hpp>

#include <algorithm>

namespace gsvm {

MinMaxScaler MinMaxScaler::fit(const FeatureMatrix& x) {
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, "cannot fit scaling on zero rows");
  MinMaxScaler s;
  const auto first = x.row(0);
  s.min.assign(first.begin(), first.end());
  s.max.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t d = 0; d < row.size(); ++d) {
      s.min[d] = std::min(s.min[d], row[d]);
      s.max[d] = std::max(s.max[d], row[d]);
    }
  }
  return s;
}

std::vector<double> MinMaxScaler::transform(std::span<const double> x) const {
  if (x.size() != min.size()) throw Error(ErrorCode::DimensionMismatch, "feature dimension differs from the scaling record");
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double range = max[d] - min[d];
    out[d] = range > 0.0 ? (x[d] - min[d]) / range : 0.0;
  }
  return out;
}

FeatureMatrix MinMaxScaler::transform(const FeatureMatrix& x) const {
  FeatureMatrix out(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(transform(x.row(r)));
  return out;
}

}  // namespace gsvm
