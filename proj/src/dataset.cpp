#include <gsvm/dataset.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <gsvm/pgm.hpp>

namespace gsvm {

namespace fs = std::filesystem;

namespace {

bool parse_int(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<int> Dataset::class_ids() const {
  std::set<int> ids(labels.begin(), labels.end());
  return {ids.begin(), ids.end()};
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features = features.select(indices);
  out.labels.reserve(indices.size());
  for (auto i : indices) out.labels.push_back(labels[i]);
  out.class_names = class_names;
  return out;
}

void Dataset::validate() const {
  if (features.rows() != labels.size()) throw Error(ErrorCode::InvalidArgument, "dataset: features and labels differ in count");
}

std::vector<std::pair<int, std::string>> class_directories(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::UnreadableFile, "not a directory: " + root.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory()) names.push_back(entry.path().filename().string());
  }
  if (ec) throw Error(ErrorCode::UnreadableFile, "cannot list " + root.string() + ": " + ec.message());
  if (names.empty()) throw Error(ErrorCode::EmptyClass, "no class directories under " + root.string());

  std::vector<std::pair<int, std::string>> out;
  bool numeric = true;
  for (const auto& n : names) {
    int v = 0;
    numeric &= parse_int(n, v);
  }
  if (numeric) {
    for (const auto& n : names) {
      int v = 0;
      parse_int(n, v);
      out.emplace_back(v, n);
    }
    std::sort(out.begin(), out.end());
  } else {
    std::sort(names.begin(), names.end());
    for (std::size_t i = 0; i < names.size(); ++i) out.emplace_back(static_cast<int>(i), names[i]);
  }
  return out;
}

Dataset load_image_dir(const fs::path& root, const FeatureConfig& config) {
  config.validate();
  Dataset data;
  data.features = FeatureMatrix(static_cast<std::size_t>(config.total_count()));
  for (const auto& [id, name] : class_directories(root)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root / name)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    if (files.empty()) throw Error(ErrorCode::EmptyClass, "class directory has no .pgm files: " + (root / name).string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      CharacterRecord rec;
      try {
        rec = process_character(read_pgm(f));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::UnreadableFile) throw;
        throw Error(e.code(), f.string() + ": " + e.what());
      }
      rec.label = id;
      data.features.push_back(extract_features(rec, config).values);
      data.labels.push_back(id);
    }
    data.class_names[id] = name;
  }
  return data;
}

Dataset read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::UnreadableFile, "feature csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 2 || header[0] != "label") throw Error(ErrorCode::UnreadableFile, "feature csv: bad header");
  const std::size_t dim = header.size() - 1;

  Dataset data;
  data.features = FeatureMatrix(dim);
  std::vector<double> row(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::MixedDimensions, "feature csv line " + std::to_string(line_no) + ": expected " +
                                                  std::to_string(header.size()) + " fields, got " +
                                                  std::to_string(fields.size()));
    }
    int label = 0;
    if (!parse_int(fields[0], label)) {
      throw Error(ErrorCode::UnreadableFile, "feature csv line " + std::to_string(line_no) + ": bad label");
    }
    for (std::size_t d = 0; d < dim; ++d) {
      if (!parse_double(fields[d + 1], row[d])) {
        throw Error(ErrorCode::UnreadableFile, "feature csv line " + std::to_string(line_no) + ": bad value");
      }
    }
    data.features.push_back(row);
    data.labels.push_back(label);
  }
  return data;
}

Dataset load_feature_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  return read_feature_csv(in);
}

DatasetMode detect_mode(const fs::path& path) {
  std::error_code ec;
  return fs::is_directory(path, ec) ? DatasetMode::ImageDir : DatasetMode::FeatureCsv;
}

Dataset load_dataset(const fs::path& path, DatasetMode mode, const FeatureConfig& config) {
  return mode == DatasetMode::ImageDir ? load_image_dir(path, config) : load_feature_csv(path);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

void write_feature_csv(std::ostream& out, const Dataset& data, const FeatureConfig& config) {
  if (data.dimension() != static_cast<std::size_t>(config.total_count())) {
    throw Error(ErrorCode::DimensionMismatch, "feature csv: dataset dimension does not match the grid");
  }
  out << feature_csv_header(config) << '\n';
  for (std::size_t r = 0; r < data.size(); ++r) {
    out << data.labels[r];
    for (double v : data.features.row(r)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace gsvm
