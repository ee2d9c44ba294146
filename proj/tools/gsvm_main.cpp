#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gsvm/dataset.hpp>
#include <gsvm/error.hpp>
#include <gsvm/features.hpp>
#include <gsvm/model_io.hpp>
#include <gsvm/modelsel.hpp>
#include <gsvm/pgm.hpp>
#include <gsvm/preprocess.hpp>
#include <gsvm/report.hpp>
#include <gsvm/synth.hpp>

namespace {

using namespace gsvm;

struct KernelFlags {
  std::string kind = "rbf";
  std::optional<double> gamma;
  int degree = 3;
  std::optional<double> slope;
  std::optional<double> offset;
};

struct DataFlags {
  std::string path;
  std::string mode = "auto";
  int grid_cell = 4;
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& k) {
  cmd->add_option("--kernel", k.kind, "Kernel family")
      ->check(CLI::IsMember({"linear", "poly", "rbf", "sigmoid"}))
      ->capture_default_str();
  cmd->add_option("--gamma", k.gamma, "RBF width (default 1)");
  cmd->add_option("--degree", k.degree, "Polynomial degree")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--slope", k.slope, "Sigmoid slope a");
  cmd->add_option("--offset", k.offset, "Sigmoid offset r");
}

void add_data_flags(CLI::App* cmd, DataFlags& d, const char* help) {
  cmd->add_option("--data", d.path, help)->required();
  cmd->add_option("--mode", d.mode, "Dataset layout")
      ->check(CLI::IsMember({"auto", "image-dir", "feature-csv"}))
      ->capture_default_str();
  cmd->add_option("--grid-cell", d.grid_cell, "Zoning cell size in pixels")
      ->check(CLI::IsMember({16, 8, 4, 2}))
      ->capture_default_str();
}

void add_strategy_flag(CLI::App* cmd, std::string& strategy) {
  cmd->add_option("--strategy", strategy, "Multiclass strategy")
      ->check(CLI::IsMember({"ova", "ovo"}))
      ->capture_default_str();
}

KernelSpec make_kernel(const KernelFlags& f) {
  KernelSpec k;
  k.kind = parse_kernel_kind(f.kind);
  k.degree = f.degree;
  k.gamma = f.gamma.value_or(1.0);
  if (k.kind == KernelKind::Sigmoid) {
    if (!f.slope || !f.offset) throw Error(ErrorCode::InvalidConfig, "sigmoid kernel needs --slope and --offset");
    k.slope = *f.slope;
    k.offset = *f.offset;
  }
  k.validate();
  return k;
}

FeatureConfig feature_config(const DataFlags& d) {
  FeatureConfig c;
  c.cell_px = d.grid_cell;
  c.validate();
  return c;
}

Dataset load(const DataFlags& d) {
  DatasetMode mode = d.mode == "image-dir"     ? DatasetMode::ImageDir
                     : d.mode == "feature-csv" ? DatasetMode::FeatureCsv
                                               : detect_mode(d.path);
  return load_dataset(d.path, mode, feature_config(d));
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      double v;
      if (item.rfind("2^", 0) == 0) {
        v = std::ldexp(1.0, std::stoi(item.substr(2), &used));
        used += 2;
      } else {
        v = std::stod(item, &used);
      }
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, std::string(flag) + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, std::string(flag) + ": empty list");
  return out;
}

struct GridFlags {
  std::string c_grid;
  std::string gamma_grid;
  std::string degree_grid;
  std::string slope_grid;
};

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--c-grid", g.c_grid, "Comma list of C values, e.g. 2^-2,2^0,10");
  cmd->add_option("--gamma-grid", g.gamma_grid, "Comma list of gamma values");
  cmd->add_option("--degree-grid", g.degree_grid, "Comma list of polynomial degrees");
  cmd->add_option("--slope-grid", g.slope_grid, "Comma list of sigmoid slopes");
}

GridSpec make_grid(const GridFlags& g, const KernelFlags& kf) {
  GridSpec spec;
  spec.kind = parse_kernel_kind(kf.kind);
  spec.base = make_kernel(kf);
  spec.c_grid = g.c_grid.empty() ? GridSpec::default_c_grid() : parse_list(g.c_grid, "--c-grid");
  switch (spec.kind) {
    case KernelKind::Rbf:
      spec.param_grid = g.gamma_grid.empty() ? GridSpec::default_gamma_grid() : parse_list(g.gamma_grid, "--gamma-grid");
      break;
    case KernelKind::Polynomial:
      spec.param_grid =
          g.degree_grid.empty() ? GridSpec::default_degree_grid() : parse_list(g.degree_grid, "--degree-grid");
      break;
    case KernelKind::Sigmoid:
      spec.param_grid = g.slope_grid.empty() ? std::vector<double>{spec.base.slope} : parse_list(g.slope_grid, "--slope-grid");
      break;
    case KernelKind::Linear: spec.param_grid = {0.0}; break;
  }
  return spec;
}

int run(int argc, char** argv) {
  CLI::App app{"gsvm: handwritten character recognition with kernel SVMs"};
  app.require_subcommand(1);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "Segment a page image into character PGMs");
  std::string page_in, pre_out;
  pre->add_option("--input", page_in, "Page image (PGM)")->required();
  pre->add_option("--out", pre_out, "Output directory")->required();

  // features
  auto* feat = app.add_subcommand("features", "Extract a feature CSV from a character image tree");
  DataFlags feat_data;
  std::string feat_out = "-";
  add_data_flags(feat, feat_data, "Image directory <root>/<class>/*.pgm");
  feat->add_option("--out", feat_out, "Output CSV ('-' for stdout)")->capture_default_str();

  // train
  auto* tr = app.add_subcommand("train", "Train a multiclass model");
  DataFlags tr_data;
  KernelFlags tr_kernel;
  std::string tr_strategy = "ova", tr_model;
  double tr_c = 1.0;
  add_data_flags(tr, tr_data, "Training data");
  add_kernel_flags(tr, tr_kernel);
  add_strategy_flag(tr, tr_strategy);
  tr->add_option("--c", tr_c, "Soft-margin penalty")->check(CLI::PositiveNumber)->capture_default_str();
  tr->add_option("--model", tr_model, "Output model file")->required();

  // gridsearch
  auto* gs = app.add_subcommand("gridsearch", "Cross-validated search over C and a kernel parameter");
  DataFlags gs_data;
  KernelFlags gs_kernel;
  GridFlags gs_grid;
  std::string gs_strategy = "ova", gs_out = "-";
  std::size_t gs_folds = 10, gs_threads = 1;
  std::uint64_t gs_seed = 1;
  bool gs_stratified = false;
  add_data_flags(gs, gs_data, "Training data");
  add_kernel_flags(gs, gs_kernel);
  add_grid_flags(gs, gs_grid);
  add_strategy_flag(gs, gs_strategy);
  gs->add_option("--folds", gs_folds, "Cross-validation folds")->capture_default_str();
  gs->add_option("--seed", gs_seed, "Fold shuffle seed")->capture_default_str();
  gs->add_option("--threads", gs_threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  gs->add_flag("--stratified", gs_stratified, "Class-balanced folds");
  gs->add_option("--out", gs_out, "Surface CSV ('-' for stdout)")->capture_default_str();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Score a model on a labeled test set");
  DataFlags ev_data;
  std::string ev_model, ev_out = "-", ev_confusion;
  add_data_flags(ev, ev_data, "Test data");
  ev->add_option("--model", ev_model, "Model file")->required();
  ev->add_option("--out", ev_out, "Report file ('-' for stdout)")->capture_default_str();
  ev->add_option("--confusion", ev_confusion, "Confusion matrix CSV");

  // repeat-eval
  auto* re = app.add_subcommand("repeat-eval", "Repeated split/train/test runs");
  DataFlags re_data;
  KernelFlags re_kernel;
  GridFlags re_grid;
  std::string re_strategy = "ova", re_out = "-", re_confusion;
  double re_c = 1.0, re_frac = 0.8;
  std::size_t re_repeats = 5, re_folds = 10, re_threads = 1;
  std::uint64_t re_seed = 1;
  bool re_stratified = false, re_search = false;
  add_data_flags(re, re_data, "Labeled data");
  add_kernel_flags(re, re_kernel);
  add_grid_flags(re, re_grid);
  add_strategy_flag(re, re_strategy);
  re->add_option("--c", re_c, "Soft-margin penalty (without --search)")->check(CLI::PositiveNumber)->capture_default_str();
  re->add_option("--train-frac", re_frac, "Training fraction of each split")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  re->add_option("--repeats", re_repeats, "Number of runs")->check(CLI::PositiveNumber)->capture_default_str();
  re->add_flag("--search", re_search, "Grid-search C and the kernel parameter inside each run");
  re->add_option("--folds", re_folds, "Folds for --search")->capture_default_str();
  re->add_option("--threads", re_threads, "Worker threads for --search")->check(CLI::PositiveNumber)->capture_default_str();
  re->add_option("--seed", re_seed, "Master seed")->capture_default_str();
  re->add_flag("--stratified", re_stratified, "Class-balanced splits and folds");
  re->add_option("--out", re_out, "Report file ('-' for stdout)")->capture_default_str();
  re->add_option("--confusion", re_confusion, "Pooled confusion matrix CSV");

  // datagen
  auto* dg = app.add_subcommand("datagen", "Generate a synthetic glyph dataset or page");
  SynthConfig sc;
  std::string dg_out, dg_page;
  PageConfig pc;
  dg->add_option("--out", dg_out, "Output directory for the dataset");
  dg->add_option("--classes", sc.classes, "Number of classes K")->capture_default_str();
  dg->add_option("--per-class", sc.samples_per_class, "Samples per class")->capture_default_str();
  dg->add_option("--noise", sc.noise_rate, "Salt-and-pepper pixel rate")->capture_default_str();
  dg->add_option("--max-rotation", sc.max_rotation_deg, "Rotation jitter in degrees")->capture_default_str();
  dg->add_option("--seed", sc.seed, "Generator seed")->capture_default_str();
  dg->add_option("--page", dg_page, "Write a synthetic page PGM instead of a dataset");
  dg->add_option("--lines", pc.lines, "Text lines on the page")->capture_default_str();
  dg->add_option("--chars-per-line", pc.chars_per_line, "Glyphs per line")->capture_default_str();
  dg->add_option("--skew", pc.skew_degrees, "Page rotation in degrees")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: Usage: " << e.what() << '\n';
    return 2;
  }

  if (*pre) {
    const auto result = process_page(read_pgm(std::filesystem::path(page_in)));
    std::filesystem::create_directories(pre_out);
    for (std::size_t i = 0; i < result.characters.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "char_%04zu.pgm", i);
      write_pgm(std::filesystem::path(pre_out) / name, to_gray(result.characters[i].crop));
    }
    std::printf("threshold %d\nskew %.1f\nlines %zu\ncharacters %zu\n", result.threshold, result.skew_degrees,
                result.lines.size(), result.characters.size());
  } else if (*feat) {
    const auto cfg = feature_config(feat_data);
    const auto data = load_image_dir(feat_data.path, cfg);
    std::ostringstream os;
    write_feature_csv(os, data, cfg);
    write_text(feat_out, os.str());
  } else if (*tr) {
    const auto data = load(tr_data);
    TrainConfig cfg{parse_strategy(tr_strategy), make_kernel(tr_kernel), tr_c, {}};
    const auto model = train(data, cfg);
    save_model(model, tr_model);
    std::size_t svs = 0;
    for (const auto& c : model.classifiers) svs += c.dual_coeffs.size();
    std::printf("trained %s on %zu samples, %zu classifiers, %zu support vectors\n", cfg.describe().c_str(),
                data.size(), model.classifiers.size(), svs);
  } else if (*gs) {
    const auto data = load(gs_data);
    const auto grid = make_grid(gs_grid, gs_kernel);
    GridOptions opts;
    opts.threads = gs_threads;
    opts.stratified = gs_stratified;
    const auto report = grid_search(data, parse_strategy(gs_strategy), grid, gs_folds, gs_seed, opts);
    write_text(gs_out, format_grid_csv(report));
    std::cerr << format_grid_summary(report);
  } else if (*ev) {
    const auto model = load_model(ev_model);
    const auto report = evaluate(model, load(ev_data));
    write_text(ev_out, format_accuracy_table(report, "evaluate") + "\n" + format_class_error_table(report));
    if (!ev_confusion.empty()) write_text(ev_confusion, format_confusion_csv(report));
  } else if (*re) {
    const auto data = load(re_data);
    ExperimentConfig cfg;
    cfg.train = TrainConfig{parse_strategy(re_strategy), make_kernel(re_kernel), re_c, {}};
    cfg.train_fraction = re_frac;
    cfg.stratified = re_stratified;
    cfg.folds = re_folds;
    cfg.threads = re_threads;
    if (re_search) cfg.search = make_grid(re_grid, re_kernel);
    std::vector<std::uint64_t> seeds;
    for (std::size_t r = 0; r < re_repeats; ++r) seeds.push_back(derive_seed(re_seed, r));
    const auto report = repeat_evaluate(data, cfg, seeds);
    write_text(re_out, format_accuracy_table(report, std::string(kernel_name(cfg.train.kernel.kind))) + "\n" +
                           format_class_error_table(report));
    if (!re_confusion.empty()) write_text(re_confusion, format_confusion_csv(report));
  } else if (*dg) {
    if (!dg_page.empty()) {
      pc.classes = sc.classes;
      pc.noise_rate = sc.noise_rate;
      pc.seed = sc.seed;
      const auto page = render_page(pc);
      write_pgm(std::filesystem::path(dg_page), page.image);
      for (std::size_t i = 0; i < page.labels.size(); ++i) std::printf("%s%d", i ? " " : "", page.labels[i]);
      std::printf("\n");
    } else {
      if (dg_out.empty()) throw Error(ErrorCode::InvalidConfig, "datagen needs --out or --page");
      const auto n = generate_synthetic_dataset(sc, dg_out);
      std::printf("wrote %zu images in %d classes\n", n, sc.classes);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gsvm::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: IoFailure: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
  }
  return 1;
}
