#pragma once

#include <span>
#include <vector>

#include <gsvm/matrix.hpp>

namespace gsvm {

/// Per-dimension min-max scaling to [0, 1], fit on training rows only.
/// Constant dimensions map to 0.
struct MinMaxScaler {
  std::vector<double> min;
  std::vector<double> max;

  static MinMaxScaler fit(const FeatureMatrix& x);

  std::size_t dimension() const noexcept { return min.size(); }
  std::vector<double> transform(std::span<const double> x) const;
  FeatureMatrix transform(const FeatureMatrix& x) const;

  bool operator==(const MinMaxScaler&) const = default;
};

}  // namespace gsvm
