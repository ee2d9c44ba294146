#include <gsvm/synth.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gsvm/pgm.hpp>
#include <gsvm/seed.hpp>

namespace gsvm {

namespace {

struct Point {
  double x;
  double y;
};
using Polyline = std::vector<Point>;

struct Glyph {
  const char* name;
  std::vector<Polyline> strokes;
};

constexpr double kUnitPx = 20.0;
constexpr double kPenRadius = 1.3;
constexpr std::uint8_t kPaper = 230;
constexpr std::uint8_t kInk = 25;

// Elliptic arc from a0 to a1 degrees; y grows downward, so 90 degrees is the bottom.
Polyline arc(double cx, double cy, double rx, double ry, double a0, double a1) {
  const int segs = std::max(8, static_cast<int>(std::abs(a1 - a0) / 7.5));
  Polyline p;
  for (int i = 0; i <= segs; ++i) {
    const double a = (a0 + (a1 - a0) * i / segs) * std::numbers::pi / 180.0;
    p.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
  }
  return p;
}

Polyline join(Polyline a, const Polyline& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Neighbouring entries differ in endpoint/branch/cross counts.
const std::vector<Glyph>& library() {
  static const std::vector<Glyph> glyphs = {
      {"ring", {arc(0, 0, 0.8, 0.9, 0, 360)}},
      {"arc", {arc(0, 0, 0.8, 0.9, 45, 315)}},
      {"plus", {{{-0.9, 0}, {0.9, 0}}, {{0, -0.9}, {0, 0.9}}}},
      {"tee", {{{-0.9, -0.8}, {0.9, -0.8}}, {{0, -0.8}, {0, 0.9}}}},
      {"cross", {{{-0.8, -0.9}, {0.8, 0.9}}, {{0.8, -0.9}, {-0.8, 0.9}}}},
      {"ell", {{{-0.6, -0.9}, {-0.6, 0.8}, {0.7, 0.8}}}},
      {"wye", {{{-0.8, -0.9}, {0, 0}}, {{0.8, -0.9}, {0, 0}}, {{0, 0}, {0, 0.9}}}},
      {"eight", {arc(0, -0.45, 0.5, 0.45, 0, 360), arc(0, 0.45, 0.6, 0.45, 0, 360)}},
      {"loop-tail", {arc(0, -0.35, 0.6, 0.55, 0, 360), {{0.6, -0.35}, {0.6, 0.9}}}},
      {"ef", {{{-0.6, 0.9}, {-0.6, -0.9}, {0.7, -0.9}}, {{-0.6, 0}, {0.4, 0}}}},
      {"aitch", {{{-0.7, -0.9}, {-0.7, 0.9}}, {{0.7, -0.9}, {0.7, 0.9}}, {{-0.7, 0}, {0.7, 0}}}},
      {"ess", {join(arc(0, -0.45, 0.6, 0.45, 330, 90), arc(0, 0.45, 0.6, 0.45, -90, 150))}},
      {"zed", {{{-0.7, -0.9}, {0.7, -0.9}, {-0.7, 0.9}, {0.7, 0.9}}}},
      {"vee-bar", {{{-0.8, 0.9}, {0, -0.9}, {0.8, 0.9}}, {{-0.4, 0.2}, {0.4, 0.2}}}},
      {"six", {arc(0, 0.4, 0.6, 0.5, 0, 360), {{-0.6, 0.4}, {-0.5, -0.4}, {0.2, -0.9}}}},
      {"you", {join(join(Polyline{{-0.7, -0.9}, {-0.7, 0.2}}, arc(0, 0.2, 0.7, 0.7, 180, 0)),
                    Polyline{{0.7, 0.2}, {0.7, -0.9}})}},
  };
  return glyphs;
}

double segment_distance(Point p, Point a, Point b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - a.x - t * vx, p.y - a.y - t * vy);
}

// Glyph strokes mapped to pixel space: scale, counterclockwise rotation (as
// displayed), then translation to `center`.
std::vector<Polyline> place(const Glyph& g, const GlyphPose& pose, Point center) {
  const double rad = pose.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  std::vector<Polyline> out;
  for (const auto& stroke : g.strokes) {
    Polyline p;
    for (const auto& q : stroke) {
      const double x = q.x * kUnitPx * pose.scale, y = q.y * kUnitPx * pose.scale;
      p.push_back({center.x + pose.dx + x * c + y * s, center.y + pose.dy - x * s + y * c});
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Anti-aliased pen: darkens pixels by stroke coverage, keeping the darkest value.
void draw(GrayImage& img, const std::vector<Polyline>& strokes) {
  double min_x = 1e9, min_y = 1e9, max_x = -1e9, max_y = -1e9;
  for (const auto& s : strokes) {
    for (const auto& p : s) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  }
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x - kPenRadius - 1)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(max_x + kPenRadius + 1)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y - kPenRadius - 1)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(max_y + kPenRadius + 1)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double d = 1e9;
      for (const auto& s : strokes) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
          d = std::min(d, segment_distance({static_cast<double>(x), static_cast<double>(y)}, s[i], s[i + 1]));
        }
      }
      const double coverage = std::clamp(kPenRadius + 0.5 - d, 0.0, 1.0);
      const auto v = static_cast<std::uint8_t>(std::lround(kPaper - (kPaper - kInk) * coverage));
      img.at(x, y) = std::min(img.at(x, y), v);
    }
  }
}

void add_salt_pepper(GrayImage& img, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0) return;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& p : img.pixels()) {
    if (u(rng) < rate) p = u(rng) < 0.5 ? 0 : 255;
  }
}

}  // namespace

void SynthConfig::validate() const {
  if (classes < 2) throw Error(ErrorCode::InvalidConfig, "synthetic data needs at least two classes");
  if (classes > glyph_library_size()) {
    throw Error(ErrorCode::InvalidConfig, "at most " + std::to_string(glyph_library_size()) + " classes available");
  }
  if (samples_per_class < 1) throw Error(ErrorCode::InvalidConfig, "samples per class must be positive");
  if (!(noise_rate >= 0.0 && noise_rate <= 0.05)) throw Error(ErrorCode::InvalidConfig, "noise rate must lie in [0, 0.05]");
  if (!(max_rotation_deg >= 0.0 && max_rotation_deg <= 10.0)) {
    throw Error(ErrorCode::InvalidConfig, "rotation jitter must lie in [0, 10] degrees");
  }
  if (!(min_scale >= 0.8 && max_scale <= 1.2 && min_scale <= max_scale)) {
    throw Error(ErrorCode::InvalidConfig, "scale jitter must lie within [0.8, 1.2]");
  }
  if (!(max_translation_px >= 0.0 && max_translation_px <= 3.0)) {
    throw Error(ErrorCode::InvalidConfig, "translation jitter must lie in [0, 3] px");
  }
}

int glyph_library_size() { return static_cast<int>(library().size()); }

std::string glyph_name(int glyph_index) { return library().at(static_cast<std::size_t>(glyph_index)).name; }

GrayImage render_glyph(int glyph_index, const GlyphPose& pose) {
  GrayImage img(kGlyphCanvas, kGlyphCanvas, kPaper);
  const double mid = (kGlyphCanvas - 1) / 2.0;
  draw(img, place(library().at(static_cast<std::size_t>(glyph_index)), pose, {mid, mid}));
  return img;
}

GrayImage synth_sample(const SynthConfig& config, int class_id, int index) {
  config.validate();
  if (class_id < 1 || class_id > config.classes) throw Error(ErrorCode::InvalidConfig, "class id out of range");
  std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(class_id), static_cast<std::uint64_t>(index)));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GlyphPose pose;
  pose.rotation_deg = config.max_rotation_deg * u(rng);
  pose.scale = config.min_scale + (config.max_scale - config.min_scale) * (u(rng) + 1.0) / 2.0;
  pose.dx = config.max_translation_px * u(rng);
  pose.dy = config.max_translation_px * u(rng);
  auto img = render_glyph(class_id - 1, pose);
  add_salt_pepper(img, config.noise_rate, rng);
  return img;
}

std::size_t generate_synthetic_dataset(const SynthConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  std::size_t written = 0;
  for (int k = 1; k <= config.classes; ++k) {
    const auto dir = out_dir / std::to_string(k);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
    for (int i = 0; i < config.samples_per_class; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%d_%04d.pgm", k, i);
      write_pgm(dir / name, synth_sample(config, k, i));
      ++written;
    }
  }
  return written;
}

SynthPage render_page(const PageConfig& config) {
  if (config.classes < 1 || config.classes > glyph_library_size() || config.lines < 1 || config.chars_per_line < 1) {
    throw Error(ErrorCode::InvalidConfig, "bad page layout");
  }
  if (!(std::abs(config.skew_degrees) <= 45.0)) throw Error(ErrorCode::InvalidConfig, "page skew out of range");
  constexpr double pitch_x = 56.0, pitch_y = 72.0, margin = 30.0;
  const double flat_w = 2 * margin + pitch_x * config.chars_per_line;
  const double flat_h = 2 * margin + pitch_y * config.lines;
  const double rad = config.skew_degrees * std::numbers::pi / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  const int w = static_cast<int>(std::ceil(flat_w * std::abs(c) + flat_h * std::abs(s)));
  const int h = static_cast<int>(std::ceil(flat_w * std::abs(s) + flat_h * std::abs(c)));

  SynthPage page{GrayImage(w, h, kPaper), {}};
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick(1, config.classes);
  for (int line = 0; line < config.lines; ++line) {
    for (int col = 0; col < config.chars_per_line; ++col) {
      const int cls = pick(rng);
      GlyphPose pose;
      pose.rotation_deg = 2.0 * u(rng) + config.skew_degrees;
      pose.scale = 0.95 + 0.05 * u(rng);
      // slot centre relative to the flat page centre, then rotated with the page
      const double fx = margin + pitch_x * (col + 0.5) - flat_w / 2.0 + u(rng);
      const double fy = margin + pitch_y * (line + 0.5) - flat_h / 2.0 + u(rng);
      const Point centre{(w - 1) / 2.0 + fx * c + fy * s, (h - 1) / 2.0 - fx * s + fy * c};
      draw(page.image, place(library()[static_cast<std::size_t>(cls - 1)], pose, centre));
      page.labels.push_back(cls);
    }
  }
  add_salt_pepper(page.image, config.noise_rate, rng);
  return page;
}

}  // namespace gsvm
