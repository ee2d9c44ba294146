#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <gsvm/features.hpp>
#include <gsvm/matrix.hpp>

namespace gsvm {

struct Dataset {
  FeatureMatrix features;
  std::vector<int> labels;
  /// Directory name behind each class id, when loaded from an image tree.
  std::map<int, std::string> class_names;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dimension() const noexcept { return features.cols(); }

  /// Distinct labels, ascending.
  std::vector<int> class_ids() const;

  /// Rows `indices` in that order. Class names are carried over.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Throws InvalidArgument unless features and labels agree in count.
  void validate() const;
};

enum class DatasetMode { ImageDir, FeatureCsv };

/// Class directories named by integers become those ids, ordered numerically;
/// otherwise ids are 0..K-1 in lexicographic name order.
std::vector<std::pair<int, std::string>> class_directories(const std::filesystem::path& root);

/// `<root>/<class>/*.pgm`, one pre-segmented character per file.
/// Throws UnreadableFile, EmptyClass.
Dataset load_image_dir(const std::filesystem::path& root, const FeatureConfig& config);

/// Header row then `label,f1,...`. Throws UnreadableFile, MixedDimensions.
Dataset read_feature_csv(std::istream& in);
Dataset load_feature_csv(const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& path, DatasetMode mode, const FeatureConfig& config);

/// Directories load as image trees, regular files as feature CSV.
DatasetMode detect_mode(const std::filesystem::path& path);

void write_feature_csv(std::ostream& out, const Dataset& data, const FeatureConfig& config);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace gsvm
