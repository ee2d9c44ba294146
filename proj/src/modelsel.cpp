#include <gsvm/modelsel.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace gsvm {

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

std::map<int, std::vector<std::size_t>> rows_by_class(std::span<const int> labels) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t r = 0; r < labels.size(); ++r) out[labels[r]].push_back(r);
  return out;
}

double accuracy_on(const MulticlassModel& model, const Dataset& data, std::span<const std::size_t> rows) {
  std::size_t correct = 0;
  for (auto r : rows) correct += predict(model, data.features.row(r)) == data.labels[r] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace

std::string TrainConfig::describe() const {
  std::ostringstream os;
  os << strategy_name(strategy) << ' ' << kernel.describe() << " C=" << C;
  return os.str();
}

MulticlassModel train(const Dataset& data, const TrainConfig& config) {
  return train_multiclass(config.strategy, data, config.kernel, config.C, config.svm);
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double train_fraction, std::uint64_t seed,
                                             bool stratified) {
  data.validate();
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::DegenerateSplit, "train fraction must lie strictly between 0 and 1");
  }
  std::vector<std::size_t> train_rows, test_rows;
  auto take = [&](const std::vector<std::size_t>& order) {
    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(order.size())));
    train_rows.insert(train_rows.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    test_rows.insert(test_rows.end(), order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  };
  if (stratified) {
    std::uint64_t salt = 0;
    for (const auto& [cls, rows] : rows_by_class(data.labels)) {
      auto order = shuffled_indices(rows.size(), derive_seed(seed, salt++));
      std::vector<std::size_t> mapped;
      for (auto o : order) mapped.push_back(rows[o]);
      take(mapped);
    }
  } else {
    take(shuffled_indices(data.size(), seed));
  }
  if (train_rows.empty() || test_rows.empty()) {
    throw Error(ErrorCode::DegenerateSplit, "split leaves the training or the test side empty");
  }
  return {data.subset(train_rows), data.subset(test_rows)};
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > n) throw Error(ErrorCode::BadK, "k-fold needs 2 <= k <= n");
  const auto order = shuffled_indices(n, seed);
  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k, extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + len));
    std::sort(folds[f].begin(), folds[f].end());
    pos += len;
  }
  return folds;
}

std::vector<std::vector<std::size_t>> stratified_kfold_split(std::span<const int> labels, std::size_t k,
                                                             std::uint64_t seed) {
  if (k < 2 || k > labels.size()) throw Error(ErrorCode::BadK, "k-fold needs 2 <= k <= n");
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  std::uint64_t salt = 0;
  for (const auto& [cls, rows] : rows_by_class(labels)) {
    for (auto o : shuffled_indices(rows.size(), derive_seed(seed, salt++))) {
      folds[next].push_back(rows[o]);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult cross_validate_detailed(const Dataset& data, const TrainConfig& config, std::size_t k, std::uint64_t seed,
                                 bool stratified) {
  data.validate();
  const auto folds = stratified ? stratified_kfold_split(data.labels, k, seed) : kfold_split(data.size(), k, seed);
  CvResult result;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    const Dataset fold_train = data.subset(train_rows);
    if (fold_train.class_ids().size() < 2) {
      throw Error(ErrorCode::FoldDegenerate, "fold " + std::to_string(f) + " leaves a single class in training");
    }
    const auto model = train(fold_train, config);
    result.fold_scaling.push_back(model.scaling);
    result.fold_accuracies.push_back(accuracy_on(model, data, folds[f]));
  }
  result.mean_accuracy = std::accumulate(result.fold_accuracies.begin(), result.fold_accuracies.end(), 0.0) /
                         static_cast<double>(result.fold_accuracies.size());
  return result;
}

double cross_validate(const Dataset& data, const TrainConfig& config, std::size_t k, std::uint64_t seed,
                      bool stratified) {
  return cross_validate_detailed(data, config, k, seed, stratified).mean_accuracy;
}

std::vector<double> GridSpec::default_c_grid() {
  std::vector<double> g;
  for (int e = -2; e <= 12; ++e) g.push_back(std::ldexp(1.0, e));
  return g;
}

std::vector<double> GridSpec::default_gamma_grid() {
  std::vector<double> g;
  for (int e = 4; e >= -10; --e) g.push_back(std::ldexp(1.0, e));
  return g;
}

std::vector<double> GridSpec::default_degree_grid() { return {2, 3, 4, 5, 6}; }

KernelSpec GridSpec::kernel_for(double param) const {
  KernelSpec k = base;
  k.kind = kind;
  switch (kind) {
    case KernelKind::Rbf: k.gamma = param; break;
    case KernelKind::Polynomial: k.degree = static_cast<int>(std::lround(param)); break;
    case KernelKind::Sigmoid: k.slope = param; break;
    case KernelKind::Linear: break;
  }
  return k;
}

GridSearchReport grid_search(const Dataset& data, Strategy strategy, const GridSpec& grid, std::size_t k,
                             std::uint64_t seed, const GridOptions& options) {
  if (grid.c_grid.empty()) throw Error(ErrorCode::InvalidArgument, "grid search needs a nonempty C grid");
  std::vector<double> cs = grid.c_grid;
  std::vector<double> params = grid.kind == KernelKind::Linear ? std::vector<double>{0.0} : grid.param_grid;
  if (params.empty()) throw Error(ErrorCode::InvalidArgument, "grid search needs a nonempty parameter grid");
  std::sort(cs.begin(), cs.end());
  if (grid.kind == KernelKind::Rbf) {
    std::sort(params.begin(), params.end(), std::greater<>());
  } else {
    std::sort(params.begin(), params.end());
  }

  GridSearchReport report;
  report.kind = grid.kind;
  report.strategy = strategy;
  report.seed = seed;
  report.folds = k;
  for (double c : cs) {
    for (double p : params) report.entries.push_back({c, p, 0.0, {}});
  }

  auto run_cell = [&](GridEntry& e) {
    TrainConfig cfg{strategy, grid.kernel_for(e.param), e.C, options.svm};
    try {
      e.accuracy = cross_validate(data, cfg, k, seed, options.stratified);
    } catch (const Error& err) {
      e.accuracy = 0.0;
      e.error = std::string(err.category()) + ": " + err.what();
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, report.entries.size());
  if (threads == 1) {
    for (auto& e : report.entries) run_cell(e);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < report.entries.size(); i = next++) run_cell(report.entries[i]);
      });
    }
    for (auto& th : pool) th.join();
  }

  report.best = report.entries.front();
  for (const auto& e : report.entries) {
    if (e.accuracy > report.best.accuracy) report.best = e;
  }
  return report;
}

std::size_t EvalReport::total_tests() const {
  std::size_t n = 0;
  for (const auto& c : per_class) n += c.test_count;
  return n;
}

std::size_t EvalReport::total_errors() const {
  std::size_t n = 0;
  for (const auto& c : per_class) n += c.errors;
  return n;
}

EvalReport report_from_confusion(std::vector<int> class_ids, std::vector<std::vector<std::size_t>> confusion) {
  EvalReport r;
  std::size_t total = 0, errors = 0;
  for (std::size_t t = 0; t < class_ids.size(); ++t) {
    ClassStats s;
    s.class_id = class_ids[t];
    for (std::size_t p = 0; p < class_ids.size(); ++p) {
      s.test_count += confusion[t][p];
      if (p != t) s.errors += confusion[t][p];
    }
    s.error_rate = s.test_count ? static_cast<double>(s.errors) / static_cast<double>(s.test_count) : 0.0;
    total += s.test_count;
    errors += s.errors;
    r.per_class.push_back(s);
  }
  r.overall_accuracy = total ? 1.0 - static_cast<double>(errors) / static_cast<double>(total) : 0.0;
  r.class_ids = std::move(class_ids);
  r.confusion = std::move(confusion);
  return r;
}

EvalReport evaluate(const MulticlassModel& model, const Dataset& test) {
  test.validate();
  if (test.size() == 0) throw Error(ErrorCode::InvalidArgument, "evaluation needs a nonempty test set");
  if (test.dimension() != model.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "test features have dimension " + std::to_string(test.dimension()) +
                                                  ", model expects " + std::to_string(model.dimension()));
  }
  std::vector<int> ids = model.class_ids;
  for (int l : test.labels) ids.push_back(l);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index_of = [&](int id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::vector<std::size_t>> confusion(ids.size(), std::vector<std::size_t>(ids.size(), 0));
  for (std::size_t r = 0; r < test.size(); ++r) {
    ++confusion[index_of(test.labels[r])][index_of(predict(model, test.features.row(r)))];
  }
  return report_from_confusion(std::move(ids), std::move(confusion));
}

EvalReport repeat_evaluate(const Dataset& data, const ExperimentConfig& config, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "at least one repetition is required");
  std::vector<EvalReport> runs;
  std::vector<std::string> configs;
  for (const auto seed : seeds) {
    auto [train_set, test_set] = split_train_test(data, config.train_fraction, seed, config.stratified);
    TrainConfig chosen = config.train;
    if (config.search) {
      GridOptions opts{config.threads, config.stratified, config.train.svm};
      const auto report = grid_search(train_set, config.train.strategy, *config.search, config.folds,
                                      derive_seed(seed, 1), opts);
      chosen.kernel = config.search->kernel_for(report.best.param);
      chosen.C = report.best.C;
    }
    runs.push_back(evaluate(train(train_set, chosen), test_set));
    configs.push_back(chosen.describe());
  }

  std::vector<int> ids;
  for (const auto& r : runs) ids.insert(ids.end(), r.class_ids.begin(), r.class_ids.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::vector<std::size_t>> pooled(ids.size(), std::vector<std::size_t>(ids.size(), 0));
  for (const auto& r : runs) {
    for (std::size_t t = 0; t < r.class_ids.size(); ++t) {
      const auto ti = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), r.class_ids[t]) - ids.begin());
      for (std::size_t p = 0; p < r.class_ids.size(); ++p) {
        const auto pi =
            static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), r.class_ids[p]) - ids.begin());
        pooled[ti][pi] += r.confusion[t][p];
      }
    }
  }
  EvalReport summary = report_from_confusion(std::move(ids), std::move(pooled));
  double sum = 0.0;
  for (const auto& r : runs) {
    summary.iterations.push_back(r.overall_accuracy);
    sum += r.overall_accuracy;
  }
  summary.overall_accuracy = sum / static_cast<double>(runs.size());
  summary.iteration_configs = std::move(configs);
  return summary;
}

}  // namespace gsvm
