#include <gsvm/preprocess.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace gsvm {

namespace {

// Keys cubic convolution kernel, a = -0.5.
double cubic_weight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

std::array<double, 4> cubic_taps(double frac) {
  return {cubic_weight(frac + 1.0), cubic_weight(frac), cubic_weight(1.0 - frac), cubic_weight(2.0 - frac)};
}

enum class Border { Replicate, Background };

double sample_bicubic(const BinaryImage& img, double x, double y, Border border) {
  const double fx = std::floor(x), fy = std::floor(y);
  const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
  const auto wx = cubic_taps(x - fx);
  const auto wy = cubic_taps(y - fy);
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) {
    double row = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int sx = x0 - 1 + i, sy = y0 - 1 + j;
      const std::uint8_t v = border == Border::Replicate ? img.clamped(sx, sy) : img.get_or(sx, sy, 0);
      row += wx[i] * v;
    }
    acc += wy[j] * row;
  }
  return acc;
}

// Neighbours P2..P9 clockwise from north; outside the image counts as background.
std::array<std::uint8_t, 8> neighbours(const BinaryImage& img, int x, int y) {
  return {img.get_or(x, y - 1, 0),     img.get_or(x + 1, y - 1, 0), img.get_or(x + 1, y, 0),
          img.get_or(x + 1, y + 1, 0), img.get_or(x, y + 1, 0),     img.get_or(x - 1, y + 1, 0),
          img.get_or(x - 1, y, 0),     img.get_or(x - 1, y - 1, 0)};
}

int transitions(const std::array<std::uint8_t, 8>& p) {
  int a = 0;
  for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1) ? 1 : 0;
  return a;
}

struct Component {
  BoundingBox box;
  std::vector<std::pair<int, int>> pixels;
};

std::vector<Component> label_components(const BinaryImage& img) {
  std::vector<std::uint8_t> seen(img.size(), 0);
  std::vector<Component> out;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * img.width() + x;
      if (!img.at(x, y) || seen[idx]) continue;
      Component comp;
      int min_x = x, max_x = x, min_y = y, max_y = y;
      seen[idx] = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        comp.pixels.emplace_back(cx, cy);
        min_x = std::min(min_x, cx);
        max_x = std::max(max_x, cx);
        min_y = std::min(min_y, cy);
        max_y = std::max(max_y, cy);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (!img.contains(nx, ny) || !img.at(nx, ny)) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * img.width() + nx;
            if (!seen[nidx]) {
              seen[nidx] = 1;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
      comp.box = BoundingBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
      out.push_back(std::move(comp));
    }
  }
  return out;
}

// Profile score for a candidate skew given in tenths of a degree: sum of squared
// row counts after rotating the ink by -angle (nearest-row binning). With a fixed
// bin range and fixed ink count this orders candidates exactly as the profile
// variance does.
std::int64_t profile_score(const std::vector<std::pair<double, double>>& ink, int tenths, int half_range) {
  const double rad = tenths / 10.0 * std::numbers::pi / 180.0;
  const double s = std::sin(rad), c = std::cos(rad);
  std::vector<std::int64_t> bins(static_cast<std::size_t>(2 * half_range + 1), 0);
  for (const auto& [x, y] : ink) {
    const int row = static_cast<int>(std::lround(x * s + y * c)) + half_range;
    ++bins[static_cast<std::size_t>(std::clamp(row, 0, 2 * half_range))];
  }
  std::int64_t score = 0;
  for (auto b : bins) score += b * b;
  return score;
}

}  // namespace

GrayImage median_filter(const GrayImage& img) {
  GrayImage out(img.width(), img.height());
  std::array<std::uint8_t, 9> window{};
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int k = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) window[k++] = img.clamped(x + dx, y + dy);
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out.at(x, y) = window[4];
    }
  }
  return out;
}

double otsu_between_class_variance(const GrayImage& img, int threshold) {
  std::int64_t n0 = 0, s0 = 0, s = 0;
  for (auto p : img.pixels()) {
    s += p;
    if (p <= threshold) {
      ++n0;
      s0 += p;
    }
  }
  const auto n = static_cast<std::int64_t>(img.size());
  const std::int64_t n1 = n - n0;
  if (n0 == 0 || n1 == 0) return 0.0;
  // w0 * w1 * (mu0 - mu1)^2 = (N*S0 - n0*S)^2 / (n0*n1*N^2)
  const auto diff = static_cast<double>(n * s0 - n0 * s);
  const auto nn = static_cast<double>(n);
  return diff * diff / (static_cast<double>(n0) * static_cast<double>(n1) * nn * nn);
}

OtsuResult otsu_binarize(const GrayImage& img) {
  std::array<std::int64_t, 256> hist{};
  for (auto p : img.pixels()) ++hist[p];
  if (std::count_if(hist.begin(), hist.end(), [](auto h) { return h > 0; }) < 2) {
    throw Error(ErrorCode::UniformImage, "otsu: image has a single intensity");
  }
  std::int64_t total_sum = 0;
  for (int v = 0; v < 256; ++v) total_sum += v * hist[v];
  const auto n = static_cast<std::int64_t>(img.size());

  int best_t = 0;
  double best = -1.0;
  std::int64_t n0 = 0, s0 = 0;
  for (int t = 0; t <= 254; ++t) {
    n0 += hist[t];
    s0 += t * hist[t];
    const std::int64_t n1 = n - n0;
    double var = 0.0;
    if (n0 > 0 && n1 > 0) {
      const auto diff = static_cast<double>(n * s0 - n0 * total_sum);
      var = diff * diff / (static_cast<double>(n0) * static_cast<double>(n1));
    }
    if (var > best) {
      best = var;
      best_t = t;
    }
  }

  BinaryImage bin(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) bin.pixels()[i] = img.pixels()[i] <= best_t ? 1 : 0;
  return {best_t, std::move(bin)};
}

BinaryImage rotate(const BinaryImage& img, double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  const double s = std::sin(rad), c = std::cos(rad);
  const int out_w = std::max(1, static_cast<int>(std::ceil(img.width() * std::abs(c) + img.height() * std::abs(s) - 1e-6)));
  const int out_h = std::max(1, static_cast<int>(std::ceil(img.width() * std::abs(s) + img.height() * std::abs(c) - 1e-6)));
  const double cx_in = (img.width() - 1) / 2.0, cy_in = (img.height() - 1) / 2.0;
  const double cx_out = (out_w - 1) / 2.0, cy_out = (out_h - 1) / 2.0;

  BinaryImage out(out_w, out_h);
  for (int yo = 0; yo < out_h; ++yo) {
    for (int xo = 0; xo < out_w; ++xo) {
      const double dx = xo - cx_out, dy = yo - cy_out;
      // inverse of the on-screen counterclockwise rotation (y axis points down)
      const double sx = dx * c - dy * s + cx_in;
      const double sy = dx * s + dy * c + cy_in;
      if (sx < -2.0 || sy < -2.0 || sx > img.width() + 1.0 || sy > img.height() + 1.0) continue;
      out.at(xo, yo) = sample_bicubic(img, sx, sy, Border::Background) >= 0.5 ? 1 : 0;
    }
  }
  return out;
}

double detect_skew(const BinaryImage& page) {
  std::vector<std::pair<double, double>> ink;
  const double cx = (page.width() - 1) / 2.0, cy = (page.height() - 1) / 2.0;
  for (int y = 0; y < page.height(); ++y) {
    for (int x = 0; x < page.width(); ++x) {
      if (page.at(x, y)) ink.emplace_back(x - cx, y - cy);
    }
  }
  if (ink.empty()) throw Error(ErrorCode::EmptyPage, "detect_skew: page has no ink");
  const int half_range = static_cast<int>(std::ceil(std::hypot(page.width(), page.height()) / 2.0)) + 1;

  struct Candidate {
    int tenths;
    std::int64_t score;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (std::abs(a.tenths) != std::abs(b.tenths)) return std::abs(a.tenths) < std::abs(b.tenths);
    return a.tenths < b.tenths;
  };

  const int limit = static_cast<int>(kMaxSkewDegrees * 10);
  Candidate best{0, profile_score(ink, 0, half_range)};
  for (int t = -limit; t <= limit; t += 5) {
    const Candidate cand{t, profile_score(ink, t, half_range)};
    if (better(cand, best)) best = cand;
  }
  const int coarse = best.tenths;
  for (int t = std::max(-limit, coarse - 5); t <= std::min(limit, coarse + 5); ++t) {
    const Candidate cand{t, profile_score(ink, t, half_range)};
    if (better(cand, best)) best = cand;
  }
  return best.tenths / 10.0;
}

BinaryImage deskew(const BinaryImage& page, double angle_degrees) {
  if (!(std::abs(angle_degrees) <= kMaxSkewDegrees)) {
    throw Error(ErrorCode::AngleOutOfRange, "deskew: |angle| must not exceed 15 degrees");
  }
  return rotate(page, -angle_degrees);
}

std::vector<LineInterval> segment_lines(const BinaryImage& page) {
  std::vector<int> counts(static_cast<std::size_t>(page.height()), 0);
  for (int y = 0; y < page.height(); ++y) {
    for (int x = 0; x < page.width(); ++x) counts[y] += page.at(x, y);
  }

  std::vector<LineInterval> runs;
  for (int y = 0; y < page.height();) {
    if (counts[y] == 0) {
      ++y;
      continue;
    }
    const int top = y;
    while (y < page.height() && counts[y] > 0) ++y;
    runs.push_back({top, y - 1});
  }
  if (runs.empty()) return runs;

  // Reference line height; only runs clearly taller than a typical line are
  // candidates for holding several touching lines.
  std::vector<int> heights;
  for (const auto& r : runs) heights.push_back(r.bottom - r.top + 1);
  std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
  const int median_height = heights[heights.size() / 2];
  const bool have_reference = runs.size() >= 2;

  std::vector<LineInterval> lines;
  for (const auto& run : runs) {
    const int height = run.bottom - run.top + 1;
    if (have_reference && 2 * height < 3 * median_height) {
      lines.push_back(run);
      continue;
    }
    int max_count = 0;
    for (int y = run.top; y <= run.bottom; ++y) max_count = std::max(max_count, counts[y]);

    // valleys between consecutive groups of peak rows
    std::vector<int> valleys;
    int last_peak_end = -1;
    for (int y = run.top; y <= run.bottom; ++y) {
      if (2 * counts[y] <= max_count) continue;
      if (last_peak_end >= 0 && y > last_peak_end + 1) {
        int valley = last_peak_end + 1;
        for (int v = last_peak_end + 1; v < y; ++v) {
          if (counts[v] < counts[valley]) valley = v;
        }
        valleys.push_back(valley);
      }
      last_peak_end = y;
    }

    // deepest valleys first; each cut must leave pieces of at least half a line
    std::stable_sort(valleys.begin(), valleys.end(), [&](int a, int b) { return counts[a] < counts[b]; });
    const int min_piece = have_reference ? std::max(1, median_height / 2) : 1;
    std::vector<int> cuts;
    for (int v : valleys) {
      std::vector<int> trial = cuts;
      trial.push_back(v);
      std::sort(trial.begin(), trial.end());
      bool ok = true;
      int start = run.top;
      for (int cut : trial) {
        ok &= (cut - start + 1) >= min_piece;
        start = cut + 1;
      }
      ok &= (run.bottom - start + 1) >= min_piece;
      if (ok) cuts = std::move(trial);
    }
    int start = run.top;
    for (int cut : cuts) {
      lines.push_back({start, cut});
      start = cut + 1;
    }
    lines.push_back({start, run.bottom});
  }
  return lines;
}

std::vector<CharacterRecord> segment_characters(const BinaryImage& line) {
  auto comps = label_components(line);
  std::vector<CharacterRecord> records;
  for (auto& comp : comps) {
    if (static_cast<int>(comp.pixels.size()) < kMinComponentArea) continue;
    CharacterRecord rec;
    rec.bbox = comp.box;
    rec.crop = BinaryImage(comp.box.width, comp.box.height);
    for (const auto& [x, y] : comp.pixels) rec.crop.at(x - comp.box.left, y - comp.box.top) = 1;
    records.push_back(std::move(rec));
  }
  std::stable_sort(records.begin(), records.end(), [](const CharacterRecord& a, const CharacterRecord& b) {
    if (a.bbox.left != b.bbox.left) return a.bbox.left < b.bbox.left;
    return a.bbox.top < b.bbox.top;
  });
  return records;
}

BinaryImage normalize_size(const BinaryImage& crop) {
  if (count_foreground(crop) == 0) throw Error(ErrorCode::EmptyCrop, "normalize_size: crop has no ink");
  BinaryImage out(kNormalizedSize, kNormalizedSize);
  const double sx = static_cast<double>(crop.width()) / kNormalizedSize;
  const double sy = static_cast<double>(crop.height()) / kNormalizedSize;
  for (int y = 0; y < kNormalizedSize; ++y) {
    for (int x = 0; x < kNormalizedSize; ++x) {
      const double v = sample_bicubic(crop, (x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5, Border::Replicate);
      out.at(x, y) = v >= 0.5 ? 1 : 0;
    }
  }
  return out;
}

BinaryImage zhang_suen_thin(const BinaryImage& input) {
  BinaryImage img = input;
  std::vector<std::pair<int, int>> candidates;
  for (bool changed = true; changed;) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      candidates.clear();
      for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
          if (!img.at(x, y)) continue;
          const auto p = neighbours(img, x, y);
          const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
          if (b < 2 || b > 6 || transitions(p) != 1) continue;
          // p[0]=P2 (N), p[2]=P4 (E), p[4]=P6 (S), p[6]=P8 (W)
          const bool directional = pass == 0 ? (p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0)
                                             : (p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0);
          if (directional) candidates.emplace_back(x, y);
        }
      }
      // Candidates are re-checked against the partially updated image.
      for (const auto& [x, y] : candidates) {
        const auto p = neighbours(img, x, y);
        const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
        if (b >= 2 && transitions(p) == 1) {
          img.at(x, y) = 0;
          changed = true;
        }
      }
    }
  }
  return img;
}

BinaryImage thin(const BinaryImage& normalized) {
  if (normalized.width() != kNormalizedSize || normalized.height() != kNormalizedSize) {
    throw Error(ErrorCode::WrongDimensions, "thin: expected a 32x32 bitmap");
  }
  return zhang_suen_thin(normalized);
}

void complete_record(CharacterRecord& record) {
  record.normalized = normalize_size(record.crop);
  record.skeleton = thin(record.normalized);
}

PageResult process_page(const GrayImage& page) {
  PageResult result;
  auto otsu = otsu_binarize(median_filter(page));
  result.threshold = otsu.threshold;
  result.skew_degrees = detect_skew(otsu.binary);
  result.deskewed = deskew(otsu.binary, result.skew_degrees);
  result.lines = segment_lines(result.deskewed);
  for (const auto& line : result.lines) {
    const BoundingBox strip_box{0, line.top, result.deskewed.width(), line.bottom - line.top + 1};
    auto strip = crop(result.deskewed, strip_box);
    for (auto& rec : segment_characters(strip)) {
      rec.bbox.top += line.top;
      complete_record(rec);
      result.characters.push_back(std::move(rec));
    }
  }
  return result;
}

CharacterRecord process_character(const GrayImage& img) {
  auto otsu = otsu_binarize(median_filter(img));
  BinaryImage clean(img.width(), img.height());
  for (const auto& comp : label_components(otsu.binary)) {
    if (static_cast<int>(comp.pixels.size()) < kMinComponentArea) continue;
    for (const auto& [x, y] : comp.pixels) clean.at(x, y) = 1;
  }
  const auto box = foreground_bounds(clean);
  if (!box) throw Error(ErrorCode::EmptyCrop, "process_character: no ink after speck removal");
  CharacterRecord rec;
  rec.bbox = *box;
  rec.crop = crop(clean, *box);
  complete_record(rec);
  return rec;
}

}  // namespace gsvm
