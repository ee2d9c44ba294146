#include <gsvm/report.hpp>

#include <cstdio>
#include <sstream>

namespace gsvm {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string param_label(KernelKind kind) {
  switch (kind) {
    case KernelKind::Rbf: return "gamma";
    case KernelKind::Polynomial: return "degree";
    case KernelKind::Sigmoid: return "slope";
    case KernelKind::Linear: return "-";
  }
  return "param";
}

}  // namespace

std::string format_accuracy_table(const EvalReport& report, const std::string& row_label) {
  std::ostringstream os;
  os << "Kernel";
  const std::size_t runs = report.iterations.empty() ? 1 : report.iterations.size();
  for (std::size_t i = 0; i < runs; ++i) os << "\tIteration " << i + 1;
  os << "\tAverage (%)\n" << row_label;
  if (report.iterations.empty()) {
    os << '\t' << fixed(100.0 * report.overall_accuracy, 4);
  } else {
    for (double a : report.iterations) os << '\t' << fixed(100.0 * a, 4);
  }
  os << '\t' << fixed(100.0 * report.overall_accuracy, 2) << '\n';
  return os.str();
}

std::string format_class_error_table(const EvalReport& report) {
  std::ostringstream os;
  os << "Class\tTests\tErrors\tError rate\n";
  for (const auto& c : report.per_class) {
    os << c.class_id << '\t' << c.test_count << '\t' << c.errors << '\t' << fixed(c.error_rate, 4) << '\n';
  }
  return os.str();
}

std::string format_confusion_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "true\\pred";
  for (int id : report.class_ids) os << ',' << id;
  os << '\n';
  for (std::size_t t = 0; t < report.class_ids.size(); ++t) {
    os << report.class_ids[t];
    for (auto v : report.confusion[t]) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

std::string format_grid_csv(const GridSearchReport& report) {
  std::ostringstream os;
  os << "C,param,accuracy\n";
  for (const auto& e : report.entries) {
    os << format_double(e.C) << ',' << format_double(e.param) << ',' << format_double(e.accuracy) << '\n';
  }
  return os.str();
}

std::string format_grid_summary(const GridSearchReport& report) {
  std::ostringstream os;
  os << "kernel " << kernel_name(report.kind) << ", strategy " << strategy_name(report.strategy) << ", "
     << report.folds << "-fold CV, seed " << report.seed << '\n';
  os << "C\t" << param_label(report.kind) << "\taccuracy\n";
  std::size_t failed = 0;
  for (const auto& e : report.entries) {
    os << format_double(e.C) << '\t' << format_double(e.param) << '\t' << fixed(e.accuracy, 4);
    if (!e.error.empty()) {
      os << "\tfailed: " << e.error;
      ++failed;
    }
    os << '\n';
  }
  os << "best: C=" << format_double(report.best.C) << ' ' << param_label(report.kind) << '='
     << format_double(report.best.param) << " accuracy=" << fixed(report.best.accuracy, 4) << '\n';
  if (failed) os << failed << " cell(s) failed\n";
  return os.str();
}

}  // namespace gsvm
