#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <gsvm/error.hpp>

namespace gsvm {

/// Dense row-major sample matrix: one feature vector per row.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  void push_back(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "row length differs from matrix width");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  FeatureMatrix select(std::span<const std::size_t> indices) const {
    FeatureMatrix out(cols_);
    out.data_.reserve(indices.size() * cols_);
    for (auto i : indices) out.push_back(row(i));
    return out;
  }

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace gsvm
