#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gsvm/multiclass.hpp>
#include <gsvm/seed.hpp>

namespace gsvm {

struct TrainConfig {
  Strategy strategy = Strategy::OneVsAll;
  KernelSpec kernel;
  double C = 1.0;
  SvmOptions svm;

  std::string describe() const;
};

MulticlassModel train(const Dataset& data, const TrainConfig& config);

/// Seeded shuffle; the first floor(fraction * n) rows train. With `stratified`
/// the rule applies per class. Throws DegenerateSplit when a side is empty.
std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double train_fraction, std::uint64_t seed,
                                             bool stratified = false);

/// Seeded shuffle of 0..n-1 dealt into k folds whose sizes differ by at most one.
/// Each fold is sorted ascending. Throws BadK unless 2 <= k <= n.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// Per-class shuffles dealt round-robin, so every fold sees every class when
/// the class has at least k members. Same size guarantee as kfold_split.
std::vector<std::vector<std::size_t>> stratified_kfold_split(std::span<const int> labels, std::size_t k,
                                                             std::uint64_t seed);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<double> fold_accuracies;
  /// Scaling fit inside each fold, on that fold's training rows only.
  std::vector<MinMaxScaler> fold_scaling;
};

/// Throws FoldDegenerate when a fold's training side holds a single class.
CvResult cross_validate_detailed(const Dataset& data, const TrainConfig& config, std::size_t k, std::uint64_t seed,
                                 bool stratified = false);
double cross_validate(const Dataset& data, const TrainConfig& config, std::size_t k, std::uint64_t seed,
                      bool stratified = false);

/// gamma for rbf, degree for polynomial, slope for sigmoid, unused for linear.
struct GridSpec {
  KernelKind kind = KernelKind::Rbf;
  std::vector<double> c_grid;
  std::vector<double> param_grid;
  /// Supplies the sigmoid offset and any parameter the grid does not vary.
  KernelSpec base;

  /// C in {2^-2 .. 2^12}.
  static std::vector<double> default_c_grid();
  /// gamma in {2^-10 .. 2^4}.
  static std::vector<double> default_gamma_grid();
  /// d in {2, 3, 4, 5, 6}.
  static std::vector<double> default_degree_grid();

  KernelSpec kernel_for(double param) const;
};

struct GridEntry {
  double C = 0.0;
  double param = 0.0;
  double accuracy = 0.0;
  /// Error category and message when the cell failed; accuracy is then 0.
  std::string error;
};

struct GridSearchReport {
  KernelKind kind = KernelKind::Rbf;
  Strategy strategy = Strategy::OneVsAll;
  std::vector<GridEntry> entries;
  GridEntry best;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
};

struct GridOptions {
  std::size_t threads = 1;
  bool stratified = false;
  SvmOptions svm;
};

/// Cross-validates every (C, param) cell with the same folds. Scan order is C
/// ascending, then gamma descending (rbf) or param ascending (others); `best`
/// is the first maximum in that order. Failing cells are recorded, not thrown.
/// Results do not depend on the thread count.
GridSearchReport grid_search(const Dataset& data, Strategy strategy, const GridSpec& grid, std::size_t k,
                             std::uint64_t seed, const GridOptions& options = {});

struct ClassStats {
  int class_id = 0;
  std::size_t test_count = 0;
  std::size_t errors = 0;
  /// errors / test_count, 0 for a class absent from the test set.
  double error_rate = 0.0;
};

struct EvalReport {
  double overall_accuracy = 0.0;
  std::vector<int> class_ids;
  std::vector<ClassStats> per_class;
  /// confusion[true][predicted], indexed like class_ids.
  std::vector<std::vector<std::size_t>> confusion;
  /// Per-run accuracies for repeated protocols; overall_accuracy is their mean.
  std::vector<double> iterations;
  /// Configuration used by each run.
  std::vector<std::string> iteration_configs;

  std::size_t total_tests() const;
  std::size_t total_errors() const;
};

/// Throws DimensionMismatch, InvalidArgument for an empty test set.
EvalReport evaluate(const MulticlassModel& model, const Dataset& test);

/// Builds per-class statistics from a confusion matrix.
EvalReport report_from_confusion(std::vector<int> class_ids, std::vector<std::vector<std::size_t>> confusion);

struct ExperimentConfig {
  TrainConfig train;
  double train_fraction = 0.8;
  bool stratified = false;
  /// When set, each run picks C and the kernel parameter by grid search on its
  /// own training split before the final fit.
  std::optional<GridSpec> search;
  std::size_t folds = 10;
  std::size_t threads = 1;
};

/// Independent split -> (search) -> train -> evaluate runs, one per seed.
/// Confusion and per-class counts are pooled over runs; overall_accuracy is
/// the arithmetic mean of the run accuracies.
EvalReport repeat_evaluate(const Dataset& data, const ExperimentConfig& config, std::span<const std::uint64_t> seeds);

}  // namespace gsvm
