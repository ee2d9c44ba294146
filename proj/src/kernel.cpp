#include <gsvm/kernel.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsvm {

std::string_view kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Polynomial: return "poly";
    case KernelKind::Rbf: return "rbf";
    case KernelKind::Sigmoid: return "sigmoid";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "linear") return KernelKind::Linear;
  if (name == "poly" || name == "polynomial") return KernelKind::Polynomial;
  if (name == "rbf") return KernelKind::Rbf;
  if (name == "sigmoid") return KernelKind::Sigmoid;
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
  if (kind == KernelKind::Rbf && !(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "rbf kernel needs gamma > 0");
  if (kind == KernelKind::Polynomial && degree < 1) {
    throw Error(ErrorCode::InvalidArgument, "polynomial kernel needs degree >= 1");
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  os << kernel_name(kind);
  switch (kind) {
    case KernelKind::Linear: break;
    case KernelKind::Polynomial: os << " d=" << degree; break;
    case KernelKind::Rbf: os << " gamma=" << gamma; break;
    case KernelKind::Sigmoid: os << " a=" << slope << " r=" << offset; break;
  }
  return os.str();
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "kernel arguments differ in dimension");
  if (spec.kind == KernelKind::Rbf) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - y[i];
      d2 += d * d;
    }
    return std::exp(-spec.gamma * d2);
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  switch (spec.kind) {
    case KernelKind::Linear: return dot;
    case KernelKind::Polynomial: return std::pow(dot + 1.0, spec.degree);
    case KernelKind::Sigmoid: return std::tanh(spec.slope * dot + spec.offset);
    case KernelKind::Rbf: break;
  }
  return 0.0;
}

KernelCache::KernelCache(const FeatureMatrix& samples, KernelSpec spec, std::size_t capacity_bytes)
    : samples_(samples), spec_(spec) {
  spec_.validate();
  const std::size_t n = samples.rows();
  const std::size_t row_bytes = std::max<std::size_t>(1, n) * sizeof(double);
  capacity_rows_ = std::clamp<std::size_t>(capacity_bytes / row_bytes, 2, std::max<std::size_t>(2, n));
  diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) diag_[i] = kernel_eval(spec_, samples.row(i), samples.row(i));
  rows_.resize(n);
  where_.resize(n);
  cached_.assign(n, false);
}

std::span<const double> KernelCache::row(std::size_t i) {
  if (cached_[i]) {
    ++hits_;
    lru_.splice(lru_.begin(), lru_, where_[i]);
    return rows_[i];
  }
  ++misses_;
  std::vector<double> buf;
  if (lru_.size() >= capacity_rows_) {
    const std::size_t victim = lru_.back();
    lru_.pop_back();
    cached_[victim] = false;
    buf = std::move(rows_[victim]);
    rows_[victim] = {};
  }
  const std::size_t n = samples_.rows();
  buf.resize(n);
  const auto xi = samples_.row(i);
  for (std::size_t j = 0; j < n; ++j) buf[j] = kernel_eval(spec_, xi, samples_.row(j));
  rows_[i] = std::move(buf);
  lru_.push_front(i);
  where_[i] = lru_.begin();
  cached_[i] = true;
  return rows_[i];
}

}  // namespace gsvm
