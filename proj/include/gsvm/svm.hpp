#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <gsvm/kernel.hpp>

namespace gsvm {

struct SvmOptions {
  double tol = 1e-3;
  std::size_t max_iterations = 1'000'000;
  std::size_t cache_bytes = KernelCache::kDefaultBytes;
};

struct TrainingMeta {
  std::size_t iterations = 0;
  /// Maximal KKT violation m(alpha) - M(alpha) at exit.
  double kkt_violation = 0.0;
};

/// Soft-margin kernel classifier f(x) = sum_i coef_i K(sv_i, x) + bias with
/// coef_i = alpha_i y_i, 0 < alpha_i <= C.
struct BinaryModel {
  KernelSpec kernel;
  FeatureMatrix support_vectors;
  std::vector<double> dual_coeffs;
  double bias = 0.0;
  double C = 1.0;
  TrainingMeta meta;
  /// Training-set row of each support vector; empty for models loaded from disk.
  std::vector<std::size_t> sv_indices;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, TrainingMeta meta)
      : Error(ErrorCode::NoConvergence, what), meta_(meta) {}
  const TrainingMeta& meta() const noexcept { return meta_; }

 private:
  TrainingMeta meta_;
};

/// Full dual state over the training subset.
struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  TrainingMeta meta;
};

/// SMO on the dual: max sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
/// subject to 0 <= alpha <= C and sum(alpha_i y_i) = 0.
///
/// Each step updates the maximal violating pair (i maximizes -y G over
/// I_up, j minimizes it over I_low; the lowest index wins ties) with the exact
/// clipped two-variable optimum. Stops once m - M <= tol. The bias averages
/// -y_i G_i over free variables (0 < alpha < C), falling back to the midpoint
/// of the feasible interval.
///
/// `subset` selects rows of the cache; `labels[k]` is the +-1 label of
/// `subset[k]`. Throws NoConvergenceError when max_iterations is reached.
DualSolution solve_dual(KernelCache& cache, std::span<const std::size_t> subset, std::span<const int> labels,
                        double C, const SvmOptions& options = {});

/// Keeps the alpha > 0 rows of the subset as support vectors.
BinaryModel make_binary_model(const KernelCache& cache, std::span<const std::size_t> subset,
                              std::span<const int> labels, const DualSolution& solution, double C);

/// Throws SingleClass, DimensionMismatch, InvalidArgument, NoConvergence.
BinaryModel train_binary(const FeatureMatrix& samples, std::span<const int> labels, const KernelSpec& kernel, double C,
                         const SvmOptions& options = {});

/// Trains on rows `subset` of an existing cache (shared across related problems).
BinaryModel train_binary(KernelCache& cache, std::span<const std::size_t> subset, std::span<const int> labels,
                         double C, const SvmOptions& options = {});

double decision_value(const BinaryModel& model, std::span<const double> x);

/// +1 when f(x) >= 0, else -1.
int predict_binary(const BinaryModel& model, std::span<const double> x);
inline int sign_label(double f) { return f >= 0.0 ? 1 : -1; }

/// Dual objective evaluated from the support vectors.
double dual_objective(const BinaryModel& model);

/// |w| in the kernel's feature space; the geometric margin is 2 / |w|.
double weight_norm(const BinaryModel& model);

/// Explicit weight vector; only meaningful for the linear kernel.
std::vector<double> linear_weights(const BinaryModel& model);

}  // namespace gsvm
