#include <gsvm/model_io.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gsvm/pgm.hpp>

namespace gsvm {

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void corrupt(const std::string& msg) { throw Error(ErrorCode::CorruptBlock, "model file: " + msg); }

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string> next(const char* what) {
    std::string line;
    if (!std::getline(in_, line)) corrupt(std::string("truncated before ") + what);
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    for (std::string t; ss >> t;) tokens.push_back(t);
    return tokens;
  }

  /// `<key> <values...>`; throws when the key differs.
  std::vector<std::string> expect(const std::string& key) {
    auto tokens = next(key.c_str());
    if (tokens.empty() || tokens[0] != key) corrupt("line " + std::to_string(line_no_) + ": expected '" + key + "'");
    tokens.erase(tokens.begin());
    return tokens;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

double to_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) corrupt("bad number '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) corrupt("bad integer '" + s + "'");
  return v;
}

std::size_t to_count(const std::string& s, long long limit = 100'000'000) {
  const long long v = to_int(s);
  if (v < 0 || v > limit) corrupt("count out of range: " + s);
  return static_cast<std::size_t>(v);
}

std::vector<double> to_doubles(const std::vector<std::string>& tokens, std::size_t expected, const char* what) {
  if (tokens.size() != expected) corrupt(std::string(what) + ": expected " + std::to_string(expected) + " values");
  std::vector<double> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(to_double(t));
  return out;
}

}  // namespace

void write_model(std::ostream& out, const MulticlassModel& model) {
  model.validate();
  const std::size_t dim = model.dimension();
  const auto& k = model.classifiers.front().kernel;
  out << kModelMagic << '\n' << "version " << kModelFormatVersion << '\n';
  out << "strategy " << strategy_name(model.strategy) << '\n';
  out << "classes " << model.class_ids.size();
  for (int id : model.class_ids) out << ' ' << id;
  out << '\n';
  out << "kernel " << kernel_name(k.kind) << " degree " << k.degree << " gamma " << exact(k.gamma) << " slope "
      << exact(k.slope) << " offset " << exact(k.offset) << '\n';
  out << "dimension " << dim << '\n';
  out << "scale_min";
  for (double v : model.scaling.min) out << ' ' << exact(v);
  out << "\nscale_max";
  for (double v : model.scaling.max) out << ' ' << exact(v);
  out << "\nclassifiers " << model.classifiers.size() << '\n';
  for (std::size_t c = 0; c < model.classifiers.size(); ++c) {
    const auto& m = model.classifiers[c];
    out << "classifier " << c << '\n';
    out << "C " << exact(m.C) << '\n';
    out << "bias " << exact(m.bias) << '\n';
    out << "meta " << m.meta.iterations << ' ' << exact(m.meta.kkt_violation) << '\n';
    out << "sv " << m.dual_coeffs.size() << '\n';
    for (std::size_t s = 0; s < m.dual_coeffs.size(); ++s) {
      out << exact(m.dual_coeffs[s]);
      for (double v : m.support_vectors.row(s)) out << ' ' << exact(v);
      out << '\n';
    }
  }
  out << "end\n";
  if (!out) throw Error(ErrorCode::IoFailure, "model write failed");
}

void save_model(const MulticlassModel& model, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_model(buf, model);
  write_file_atomic(path, buf.str());
}

MulticlassModel read_model(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic)) throw Error(ErrorCode::BadMagic, "model file: empty");
  if (!magic.empty() && magic.back() == '\r') magic.pop_back();
  if (magic != kModelMagic) throw Error(ErrorCode::BadMagic, "model file: unknown magic '" + magic.substr(0, 16) + "'");

  LineReader r(in);
  const auto version = r.expect("version");
  if (version.size() != 1) corrupt("bad version line");
  if (to_int(version[0]) != kModelFormatVersion) {
    throw Error(ErrorCode::VersionMismatch, "model file: unsupported version " + version[0]);
  }

  MulticlassModel model;
  const auto strategy = r.expect("strategy");
  if (strategy.size() != 1 || (strategy[0] != "ova" && strategy[0] != "ovo")) corrupt("bad strategy");
  model.strategy = parse_strategy(strategy[0]);

  const auto classes = r.expect("classes");
  if (classes.empty() || to_count(classes[0], 1'000'000) + 1 != classes.size()) corrupt("class count mismatch");
  for (std::size_t i = 1; i < classes.size(); ++i) model.class_ids.push_back(static_cast<int>(to_int(classes[i])));

  const auto kt = r.expect("kernel");
  if (kt.size() != 9 || kt[1] != "degree" || kt[3] != "gamma" || kt[5] != "slope" || kt[7] != "offset") {
    corrupt("bad kernel line");
  }
  KernelSpec kernel;
  try {
    kernel.kind = parse_kernel_kind(kt[0]);
  } catch (const Error&) {
    corrupt("unknown kernel " + kt[0]);
  }
  kernel.degree = static_cast<int>(to_int(kt[2]));
  kernel.gamma = to_double(kt[4]);
  kernel.slope = to_double(kt[6]);
  kernel.offset = to_double(kt[8]);
  try {
    kernel.validate();
  } catch (const Error& e) {
    corrupt(e.what());
  }

  const auto dim_line = r.expect("dimension");
  if (dim_line.size() != 1) corrupt("bad dimension line");
  const std::size_t dim = to_count(dim_line[0], 1'000'000);
  model.scaling.min = to_doubles(r.expect("scale_min"), dim, "scale_min");
  model.scaling.max = to_doubles(r.expect("scale_max"), dim, "scale_max");

  const auto count_line = r.expect("classifiers");
  if (count_line.size() != 1) corrupt("bad classifiers line");
  const std::size_t count = to_count(count_line[0], 10'000'000);
  for (std::size_t c = 0; c < count; ++c) {
    const auto idx = r.expect("classifier");
    if (idx.size() != 1 || to_count(idx[0]) != c) corrupt("classifier blocks out of order");
    BinaryModel m;
    m.kernel = kernel;
    const auto cl = r.expect("C");
    if (cl.size() != 1) corrupt("bad C line");
    m.C = to_double(cl[0]);
    const auto bl = r.expect("bias");
    if (bl.size() != 1) corrupt("bad bias line");
    m.bias = to_double(bl[0]);
    const auto ml = r.expect("meta");
    if (ml.size() != 2) corrupt("bad meta line");
    m.meta.iterations = to_count(ml[0], 1LL << 62);
    m.meta.kkt_violation = to_double(ml[1]);
    const auto sl = r.expect("sv");
    if (sl.size() != 1) corrupt("bad sv line");
    const std::size_t svs = to_count(sl[0]);
    m.support_vectors = FeatureMatrix(dim);
    for (std::size_t s = 0; s < svs; ++s) {
      const auto row = to_doubles(r.next("support vector"), dim + 1, "support vector");
      m.dual_coeffs.push_back(row[0]);
      m.support_vectors.push_back(std::span<const double>(row).subspan(1));
    }
    model.classifiers.push_back(std::move(m));
  }
  const auto end = r.next("end");
  if (end.size() != 1 || end[0] != "end") corrupt("missing end marker");
  model.validate();
  return model;
}

MulticlassModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  return read_model(in);
}

}  // namespace gsvm
