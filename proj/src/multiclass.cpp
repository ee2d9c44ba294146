#include <gsvm/multiclass.hpp>

#include <numeric>

namespace gsvm {

namespace {

struct ScaledTraining {
  MinMaxScaler scaling;
  FeatureMatrix features;
  std::vector<int> class_ids;
};

ScaledTraining prepare(const Dataset& data) {
  data.validate();
  ScaledTraining t;
  t.class_ids = data.class_ids();
  if (t.class_ids.size() < 2) throw Error(ErrorCode::SingleClass, "multiclass training needs at least two classes");
  t.scaling = MinMaxScaler::fit(data.features);
  t.features = t.scaling.transform(data.features);
  return t;
}

}  // namespace

std::string_view strategy_name(Strategy s) { return s == Strategy::OneVsAll ? "ova" : "ovo"; }

Strategy parse_strategy(std::string_view name) {
  if (name == "ova") return Strategy::OneVsAll;
  if (name == "ovo") return Strategy::OneVsOne;
  throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

std::vector<std::pair<std::size_t, std::size_t>> ovo_pairs(std::size_t class_count) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < class_count; ++i) {
    for (std::size_t j = i + 1; j < class_count; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

std::size_t expected_classifier_count(Strategy strategy, std::size_t class_count) {
  return strategy == Strategy::OneVsAll ? class_count : class_count * (class_count - 1) / 2;
}

void MulticlassModel::validate() const {
  if (class_ids.size() < 2) throw Error(ErrorCode::CorruptBlock, "model needs at least two classes");
  if (classifiers.size() != expected_classifier_count(strategy, class_ids.size())) {
    throw Error(ErrorCode::CorruptBlock, "classifier count does not match the strategy");
  }
  if (scaling.min.size() != scaling.max.size()) throw Error(ErrorCode::CorruptBlock, "scaling vectors differ in length");
  for (const auto& c : classifiers) {
    if (c.dual_coeffs.size() != c.support_vectors.rows() || c.dual_coeffs.empty()) {
      throw Error(ErrorCode::CorruptBlock, "support vector block is inconsistent");
    }
    if (c.support_vectors.cols() != scaling.dimension()) {
      throw Error(ErrorCode::CorruptBlock, "support vector dimension differs from the scaling record");
    }
  }
}

MulticlassModel train_one_vs_all(const Dataset& data, const KernelSpec& kernel, double C, const SvmOptions& options) {
  auto prep = prepare(data);
  KernelCache cache(prep.features, kernel, options.cache_bytes);
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});

  MulticlassModel model;
  model.strategy = Strategy::OneVsAll;
  model.class_ids = prep.class_ids;
  std::vector<int> y(data.size());
  for (int cls : prep.class_ids) {
    for (std::size_t r = 0; r < data.size(); ++r) y[r] = data.labels[r] == cls ? 1 : -1;
    try {
      model.classifiers.push_back(train_binary(cache, all, y, C, options));
    } catch (const NoConvergenceError& e) {
      throw NoConvergenceError("class " + std::to_string(cls) + " vs rest: " + e.what(), e.meta());
    }
  }
  // the cache referenced prep.features; support vectors were copied out
  model.scaling = std::move(prep.scaling);
  return model;
}

MulticlassModel train_one_vs_one(const Dataset& data, const KernelSpec& kernel, double C, const SvmOptions& options) {
  auto prep = prepare(data);
  KernelCache cache(prep.features, kernel, options.cache_bytes);

  MulticlassModel model;
  model.strategy = Strategy::OneVsOne;
  model.class_ids = prep.class_ids;
  std::vector<std::size_t> subset;
  std::vector<int> y;
  for (const auto& [i, j] : ovo_pairs(prep.class_ids.size())) {
    const int ci = prep.class_ids[i], cj = prep.class_ids[j];
    subset.clear();
    y.clear();
    for (std::size_t r = 0; r < data.size(); ++r) {
      if (data.labels[r] == ci || data.labels[r] == cj) {
        subset.push_back(r);
        y.push_back(data.labels[r] == ci ? 1 : -1);
      }
    }
    try {
      model.classifiers.push_back(train_binary(cache, subset, y, C, options));
    } catch (const NoConvergenceError& e) {
      throw NoConvergenceError("pair " + std::to_string(ci) + " vs " + std::to_string(cj) + ": " + e.what(), e.meta());
    }
  }
  model.scaling = std::move(prep.scaling);
  return model;
}

MulticlassModel train_multiclass(Strategy strategy, const Dataset& data, const KernelSpec& kernel, double C,
                                 const SvmOptions& options) {
  return strategy == Strategy::OneVsAll ? train_one_vs_all(data, kernel, C, options)
                                        : train_one_vs_one(data, kernel, C, options);
}

int ova_winner(std::span<const int> class_ids, std::span<const double> decision_values) {
  if (class_ids.empty() || class_ids.size() != decision_values.size()) {
    throw Error(ErrorCode::InvalidArgument, "ova: one decision value per class is required");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < decision_values.size(); ++k) {
    if (decision_values[k] > decision_values[best] ||
        (decision_values[k] == decision_values[best] && class_ids[k] < class_ids[best])) {
      best = k;
    }
  }
  return class_ids[best];
}

int ovo_vote(std::span<const int> class_ids, std::span<const double> pair_values) {
  const auto pairs = ovo_pairs(class_ids.size());
  if (class_ids.size() < 2 || pairs.size() != pair_values.size()) {
    throw Error(ErrorCode::InvalidArgument, "ovo: one decision value per class pair is required");
  }
  std::vector<int> votes(class_ids.size(), 0);
  std::vector<double> sums(class_ids.size(), 0.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    const double f = pair_values[p];
    ++votes[sign_label(f) == 1 ? i : j];
    sums[i] += f;
    sums[j] -= f;
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < class_ids.size(); ++k) {
    if (votes[k] != votes[best]) {
      if (votes[k] > votes[best]) best = k;
    } else if (sums[k] != sums[best]) {
      if (sums[k] > sums[best]) best = k;
    } else if (class_ids[k] < class_ids[best]) {
      best = k;
    }
  }
  return class_ids[best];
}

std::vector<double> decision_values(const MulticlassModel& model, std::span<const double> x) {
  const auto scaled = model.scaling.transform(x);
  std::vector<double> out;
  out.reserve(model.classifiers.size());
  for (const auto& c : model.classifiers) out.push_back(decision_value(c, scaled));
  return out;
}

int predict_ova(const MulticlassModel& model, std::span<const double> x) {
  if (model.strategy != Strategy::OneVsAll) throw Error(ErrorCode::InvalidArgument, "predict_ova on a one-vs-one model");
  return ova_winner(model.class_ids, decision_values(model, x));
}

int predict_ovo(const MulticlassModel& model, std::span<const double> x) {
  if (model.strategy != Strategy::OneVsOne) throw Error(ErrorCode::InvalidArgument, "predict_ovo on a one-vs-all model");
  return ovo_vote(model.class_ids, decision_values(model, x));
}

int predict(const MulticlassModel& model, std::span<const double> x) {
  return model.strategy == Strategy::OneVsAll ? predict_ova(model, x) : predict_ovo(model, x);
}

}  // namespace gsvm
