#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <gsvm/dataset.hpp>
#include <gsvm/scaling.hpp>
#include <gsvm/svm.hpp>

namespace gsvm {

enum class Strategy { OneVsAll, OneVsOne };

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);

/// Binary classifiers over min-max scaled features.
///
/// one-vs-all: classifiers[k] separates class_ids[k] (+1) from the rest.
/// one-vs-one: one classifier per class-index pair (i, j), i < j, in the order
/// given by `ovo_pairs`; +1 means class_ids[i].
struct MulticlassModel {
  Strategy strategy = Strategy::OneVsAll;
  std::vector<int> class_ids;
  std::vector<BinaryModel> classifiers;
  MinMaxScaler scaling;

  std::size_t dimension() const noexcept { return scaling.dimension(); }

  /// Throws CorruptBlock when the classifier count or dimensions disagree.
  void validate() const;
};

/// (0,1), (0,2), ..., (0,N-1), (1,2), ...
std::vector<std::pair<std::size_t, std::size_t>> ovo_pairs(std::size_t class_count);

std::size_t expected_classifier_count(Strategy strategy, std::size_t class_count);

/// Throws SingleClass when fewer than two classes are present; a solver
/// failure surfaces as NoConvergenceError naming the class or pair.
MulticlassModel train_one_vs_all(const Dataset& data, const KernelSpec& kernel, double C, const SvmOptions& options = {});
MulticlassModel train_one_vs_one(const Dataset& data, const KernelSpec& kernel, double C, const SvmOptions& options = {});
MulticlassModel train_multiclass(Strategy strategy, const Dataset& data, const KernelSpec& kernel, double C,
                                 const SvmOptions& options = {});

/// Winner-takes-all: the highest value wins; the earliest (lowest id) wins ties.
int ova_winner(std::span<const int> class_ids, std::span<const double> decision_values);

/// Max-wins voting over `ovo_pairs` order. A pair votes for its first class
/// when f >= 0. Ties go to the larger sum of signed decision values
/// (f for the first class, -f for the second), then to the lowest id.
int ovo_vote(std::span<const int> class_ids, std::span<const double> pair_values);

/// Per-classifier decision values for a raw (unscaled) input.
std::vector<double> decision_values(const MulticlassModel& model, std::span<const double> x);

int predict_ova(const MulticlassModel& model, std::span<const double> x);
int predict_ovo(const MulticlassModel& model, std::span<const double> x);
int predict(const MulticlassModel& model, std::span<const double> x);

}  // namespace gsvm
