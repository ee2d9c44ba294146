#pragma once

#include <cstddef>
#include <list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gsvm/matrix.hpp>

namespace gsvm {

enum class KernelKind { Linear, Polynomial, Rbf, Sigmoid };

std::string_view kernel_name(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// linear: x.y; polynomial: (x.y + 1)^degree; rbf: exp(-gamma |x-y|^2);
/// sigmoid: tanh(slope x.y + offset). The sigmoid kernel is not PSD for every
/// parameter choice, so training with it may legitimately fail to converge.
struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  int degree = 3;
  double gamma = 1.0;
  double slope = 0.0;
  double offset = 0.0;

  static KernelSpec linear() { return {KernelKind::Linear}; }
  static KernelSpec polynomial(int d) { return {KernelKind::Polynomial, d}; }
  static KernelSpec rbf(double g) { return {KernelKind::Rbf, 3, g}; }
  static KernelSpec sigmoid(double a, double r) { return {KernelKind::Sigmoid, 3, 1.0, a, r}; }

  /// Throws InvalidArgument for gamma <= 0 (rbf) or degree < 1 (polynomial).
  void validate() const;
  std::string describe() const;
  bool operator==(const KernelSpec&) const = default;
};

/// Throws DimensionMismatch when the lengths differ.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Memoized Gram-matrix rows with least-recently-used eviction. Rows are
/// label independent, so one cache can serve every binary problem built on the
/// same samples. Not thread safe.
class KernelCache {
 public:
  static constexpr std::size_t kDefaultBytes = std::size_t{256} << 20;

  KernelCache(const FeatureMatrix& samples, KernelSpec spec, std::size_t capacity_bytes = kDefaultBytes);

  std::size_t size() const noexcept { return samples_.rows(); }
  const KernelSpec& spec() const noexcept { return spec_; }
  const FeatureMatrix& samples() const noexcept { return samples_; }

  /// Full row i of the Gram matrix. The span stays valid until the next call
  /// that has to evict; at least two rows are always retained.
  std::span<const double> row(std::size_t i);
  double diagonal(std::size_t i) const { return diag_[i]; }

  std::size_t capacity_rows() const noexcept { return capacity_rows_; }
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  const FeatureMatrix& samples_;
  KernelSpec spec_;
  std::size_t capacity_rows_;
  std::vector<double> diag_;
  std::vector<std::vector<double>> rows_;
  std::list<std::size_t> lru_;  // front = most recent
  std::vector<std::list<std::size_t>::iterator> where_;
  std::vector<bool> cached_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace gsvm
