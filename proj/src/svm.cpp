#include <gsvm/svm.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace gsvm {

namespace {

constexpr double kTau = 1e-12;

void check_labels(std::span<const int> labels) {
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw Error(ErrorCode::InvalidArgument, "binary labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw Error(ErrorCode::SingleClass, "training labels contain a single class");
}

}  // namespace

DualSolution solve_dual(KernelCache& cache, std::span<const std::size_t> subset, std::span<const int> labels, double C,
                        const SvmOptions& options) {
  if (subset.size() != labels.size()) throw Error(ErrorCode::InvalidArgument, "subset and labels differ in length");
  if (!(C > 0.0)) throw Error(ErrorCode::InvalidArgument, "C must be positive");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  check_labels(labels);

  const std::size_t n = subset.size();
  DualSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);  // G = Q alpha - e
  auto& alpha = sol.alpha;

  constexpr double inf = std::numeric_limits<double>::infinity();
  for (;;) {
    double m = -inf, big_m = inf;
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -labels[t] * grad[t];
      const bool up = labels[t] == 1 ? alpha[t] < C : alpha[t] > 0.0;
      const bool low = labels[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C;
      if (up && v > m) {
        m = v;
        i = t;
      }
      if (low && v < big_m) {
        big_m = v;
        j = t;
      }
    }
    sol.meta.kkt_violation = (i < n && j < n) ? m - big_m : 0.0;
    if (i == n || j == n || sol.meta.kkt_violation <= options.tol) break;
    if (sol.meta.iterations >= options.max_iterations) {
      std::ostringstream os;
      os << "SMO stopped after " << sol.meta.iterations << " pair updates with KKT violation "
         << sol.meta.kkt_violation << " > tol " << options.tol;
      throw NoConvergenceError(os.str(), sol.meta);
    }

    const auto row_i = cache.row(subset[i]);
    const auto row_j = cache.row(subset[j]);
    double eta = cache.diagonal(subset[i]) + cache.diagonal(subset[j]) - 2.0 * row_i[subset[j]];
    if (eta <= 0.0) eta = kTau;

    // move along alpha_i += y_i t, alpha_j -= y_j t, which keeps sum(alpha y) fixed
    const double room_i = labels[i] == 1 ? C - alpha[i] : alpha[i];
    const double room_j = labels[j] == 1 ? alpha[j] : C - alpha[j];
    const double t = std::min({sol.meta.kkt_violation / eta, room_i, room_j});

    alpha[i] += labels[i] * t;
    alpha[j] -= labels[j] * t;
    if (t == room_i) alpha[i] = labels[i] == 1 ? C : 0.0;
    if (t == room_j) alpha[j] = labels[j] == 1 ? 0.0 : C;
    alpha[i] = std::clamp(alpha[i], 0.0, C);
    alpha[j] = std::clamp(alpha[j], 0.0, C);

    for (std::size_t k = 0; k < n; ++k) {
      grad[k] += labels[k] * t * (row_i[subset[k]] - row_j[subset[k]]);
    }
    ++sol.meta.iterations;
  }

  double ub = inf, lb = -inf, free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = labels[t] * grad[t];
    if (alpha[t] >= C) {
      if (labels[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (alpha[t] <= 0.0) {
      if (labels[t] == 1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  double rho = 0.0;
  if (free_count > 0) {
    rho = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    rho = (ub + lb) / 2.0;
  } else {
    rho = std::isfinite(ub) ? ub : lb;
  }
  sol.bias = -rho;
  return sol;
}

BinaryModel make_binary_model(const KernelCache& cache, std::span<const std::size_t> subset,
                              std::span<const int> labels, const DualSolution& solution, double C) {
  BinaryModel model;
  model.kernel = cache.spec();
  model.support_vectors = FeatureMatrix(cache.samples().cols());
  model.bias = solution.bias;
  model.C = C;
  model.meta = solution.meta;
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (solution.alpha[k] <= 0.0) continue;
    model.support_vectors.push_back(cache.samples().row(subset[k]));
    model.dual_coeffs.push_back(solution.alpha[k] * labels[k]);
    model.sv_indices.push_back(subset[k]);
  }
  return model;
}

BinaryModel train_binary(KernelCache& cache, std::span<const std::size_t> subset, std::span<const int> labels,
                         double C, const SvmOptions& options) {
  const auto sol = solve_dual(cache, subset, labels, C, options);
  return make_binary_model(cache, subset, labels, sol, C);
}

BinaryModel train_binary(const FeatureMatrix& samples, std::span<const int> labels, const KernelSpec& kernel, double C,
                         const SvmOptions& options) {
  if (samples.rows() != labels.size()) throw Error(ErrorCode::InvalidArgument, "samples and labels differ in count");
  check_labels(labels);
  KernelCache cache(samples, kernel, options.cache_bytes);
  std::vector<std::size_t> all(samples.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return train_binary(cache, all, labels, C, options);
}

double decision_value(const BinaryModel& model, std::span<const double> x) {
  if (x.size() != model.support_vectors.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "input dimension differs from the support vectors");
  }
  double f = model.bias;
  for (std::size_t k = 0; k < model.dual_coeffs.size(); ++k) {
    f += model.dual_coeffs[k] * kernel_eval(model.kernel, model.support_vectors.row(k), x);
  }
  return f;
}

int predict_binary(const BinaryModel& model, std::span<const double> x) { return sign_label(decision_value(model, x)); }

double dual_objective(const BinaryModel& model) {
  double linear = 0.0;
  for (double c : model.dual_coeffs) linear += std::abs(c);
  return linear - 0.5 * weight_norm(model) * weight_norm(model);
}

double weight_norm(const BinaryModel& model) {
  double q = 0.0;
  const std::size_t n = model.dual_coeffs.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      q += model.dual_coeffs[a] * model.dual_coeffs[b] *
           kernel_eval(model.kernel, model.support_vectors.row(a), model.support_vectors.row(b));
    }
  }
  return std::sqrt(std::max(0.0, q));
}

std::vector<double> linear_weights(const BinaryModel& model) {
  std::vector<double> w(model.support_vectors.cols(), 0.0);
  for (std::size_t k = 0; k < model.dual_coeffs.size(); ++k) {
    const auto sv = model.support_vectors.row(k);
    for (std::size_t d = 0; d < w.size(); ++d) w[d] += model.dual_coeffs[k] * sv[d];
  }
  return w;
}

}  // namespace gsvm
