#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library's algorithms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <gsvm/image.hpp>
#include <gsvm/kernel.hpp>

namespace oracle {

using gsvm::BinaryImage;
using gsvm::GrayImage;

/// Between-class variance of the partition {v <= t} / {v > t}, summed over pixels.
inline double otsu_variance(const GrayImage& img, int t) {
  double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
  for (auto v : img.pixels()) {
    if (v <= t) {
      n0 += 1;
      s0 += v;
    } else {
      n1 += 1;
      s1 += v;
    }
  }
  if (n0 == 0 || n1 == 0) return 0.0;
  const double n = n0 + n1;
  const double d = s0 / n0 - s1 / n1;
  return (n0 / n) * (n1 / n) * d * d;
}

/// Smallest t in 0..255 maximizing the between-class variance.
inline int otsu_threshold(const GrayImage& img) {
  int best = 0;
  double best_v = -1.0;
  for (int t = 0; t < 256; ++t) {
    const double v = otsu_variance(img, t);
    if (v > best_v) {
      best_v = v;
      best = t;
    }
  }
  return best;
}

/// Number of 0->1 transitions around the 8-neighbourhood, clockwise from north.
inline int crossing_number(const BinaryImage& img, int x, int y) {
  static constexpr std::array<std::array<int, 2>, 8> ring{
      {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};
  int t = 0;
  for (int k = 0; k < 8; ++k) {
    const auto [ax, ay] = ring[k];
    const auto [bx, by] = ring[(k + 1) % 8];
    const bool a = img.contains(x + ax, y + ay) && img.at(x + ax, y + ay);
    const bool b = img.contains(x + bx, y + by) && img.at(x + bx, y + by);
    if (!a && b) ++t;
  }
  return t;
}

struct Topology {
  int endpoints = 0;
  int branches = 0;
  int crosses = 0;
};

inline Topology topology(const BinaryImage& img) {
  Topology r;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      const int t = crossing_number(img, x, y);
      if (t == 1) ++r.endpoints;
      if (t == 3) ++r.branches;
      if (t >= 4) ++r.crosses;
    }
  }
  return r;
}

/// 8-connected components by repeated flood fill.
inline int components(const BinaryImage& img) {
  std::vector<char> seen(img.pixels().size(), 0);
  int count = 0;
  for (int y0 = 0; y0 < img.height(); ++y0) {
    for (int x0 = 0; x0 < img.width(); ++x0) {
      if (!img.at(x0, y0) || seen[y0 * img.width() + x0]) continue;
      ++count;
      std::vector<std::pair<int, int>> stack{{x0, y0}};
      seen[y0 * img.width() + x0] = 1;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (!img.contains(nx, ny) || !img.at(nx, ny) || seen[ny * img.width() + nx]) continue;
            seen[ny * img.width() + nx] = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return count;
}

/// Random 4-connected blob grown from the centre; thick enough to thin.
inline BinaryImage random_blob(std::mt19937_64& rng, int size = 32) {
  BinaryImage img(size, size, 0);
  std::uniform_int_distribution<int> target_dist(size * size / 12, size * size / 3);
  const int target = target_dist(rng);
  std::vector<std::pair<int, int>> cells{{size / 2, size / 2}};
  img.at(size / 2, size / 2) = 1;
  static constexpr int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  while (static_cast<int>(cells.size()) < target) {
    const auto [x, y] = cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)];
    const int d = std::uniform_int_distribution<int>(0, 3)(rng);
    const int nx = x + dx[d], ny = y + dy[d];
    if (nx < 1 || ny < 1 || nx >= size - 1 || ny >= size - 1 || img.at(nx, ny)) continue;
    img.at(nx, ny) = 1;
    cells.emplace_back(nx, ny);
  }
  return img;
}

/// Several random 8-connected walks on one canvas. Within a walk each new
/// pixel touches only the previous one, so walks are 1 px wide; separate walks
/// may meet and cross.
inline BinaryImage random_thin_curves(std::mt19937_64& rng, int size = 32, int walks = 3) {
  BinaryImage img(size, size, 0);
  std::uniform_int_distribution<int> pos(2, size - 3), len(6, 30), dir(0, 7);
  static constexpr int dx[8] = {1, 1, 0, -1, -1, -1, 0, 1}, dy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  for (int w = 0; w < walks; ++w) {
    std::vector<std::pair<int, int>> path{{pos(rng), pos(rng)}};
    const int steps = len(rng);
    int heading = dir(rng);
    for (int s = 0; s < steps; ++s) {
      bool moved = false;
      for (int attempt = 0; attempt < 8 && !moved; ++attempt) {
        const int d = (heading + std::uniform_int_distribution<int>(-1, 1)(rng) + 8) % 8;
        const int nx = path.back().first + dx[d], ny = path.back().second + dy[d];
        if (nx < 1 || ny < 1 || nx >= size - 1 || ny >= size - 1) continue;
        bool ok = true;
        for (std::size_t k = 0; k + 1 < path.size() && ok; ++k) {
          ok = std::max(std::abs(path[k].first - nx), std::abs(path[k].second - ny)) > 1;
        }
        if (!ok) continue;
        path.emplace_back(nx, ny);
        heading = d;
        moved = true;
      }
      if (!moved) break;
    }
    for (auto [x, y] : path) img.at(x, y) = 1;
  }
  return img;
}

/// Dual objective sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij.
inline double dual_value(const std::vector<double>& a, const std::vector<int>& y,
                         const std::vector<std::vector<double>>& K) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    lin += a[i];
    for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * a[j] * y[i] * y[j] * K[i][j];
  }
  return lin - 0.5 * quad;
}

inline std::vector<std::vector<double>> gram(const gsvm::KernelSpec& spec, const std::vector<std::vector<double>>& x) {
  std::vector<std::vector<double>> K(x.size(), std::vector<double>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) K[i][j] = gsvm::kernel_eval(spec, x[i], x[j]);
  }
  return K;
}

/// Exact maximization of the dual along a_i += y_i t, a_j -= y_j t within the box.
inline bool pair_step(std::vector<double>& a, const std::vector<int>& y, const std::vector<std::vector<double>>& K,
                      double C, std::size_t i, std::size_t j) {
  const std::size_t n = a.size();
  // g_k = y_k * (sum_l a_l y_l K_kl) - 1 is the gradient of the negated objective
  double gi = -1.0, gj = -1.0;
  for (std::size_t l = 0; l < n; ++l) {
    gi += y[i] * a[l] * y[l] * K[i][l];
    gj += y[j] * a[l] * y[l] * K[j][l];
  }
  const double slope = -y[i] * gi + y[j] * gj;  // d/dt of the objective at t = 0
  const double curv = K[i][i] + K[j][j] - 2.0 * K[i][j];
  // feasible t interval from the box on both coordinates
  auto range = [&](std::size_t k, double sign) {
    // a_k + sign t in [0, C]
    return sign > 0 ? std::pair{-a[k], C - a[k]} : std::pair{a[k] - C, a[k]};
  };
  const auto [lo_i, hi_i] = range(i, y[i]);
  const auto [lo_j, hi_j] = range(j, -y[j]);
  const double lo = std::max(lo_i, lo_j), hi = std::min(hi_i, hi_j);
  if (hi - lo <= 0.0) return false;
  double t;
  if (curv > 1e-15) {
    t = std::clamp(slope / curv, lo, hi);
  } else {
    t = slope > 0 ? hi : slope < 0 ? lo : 0.0;
  }
  if (std::abs(t) < 1e-15) return false;
  const double before = dual_value(a, y, K);
  auto trial = a;
  trial[i] += y[i] * t;
  trial[j] -= y[j] * t;
  trial[i] = std::clamp(trial[i], 0.0, C);
  trial[j] = std::clamp(trial[j], 0.0, C);
  if (dual_value(trial, y, K) <= before) return false;
  a = trial;
  return true;
}

/// Brute-force dual optimum: every a_1..a_{n-1} on {0, C/10, ..., C}, a_n
/// solved from sum(a y) = 0 and rejected when outside [0, C]; the best point
/// is then polished by cyclic exact pair steps.
inline double brute_force_dual(const std::vector<int>& y, const std::vector<std::vector<double>>& K, double C,
                               std::vector<double>* alpha_out = nullptr) {
  const std::size_t n = y.size();
  std::vector<double> a(n, 0.0), best;
  double best_v = -std::numeric_limits<double>::infinity();
  // Incremental DFS: keep sum(a y) and Q a for the fixed prefix.
  std::vector<double> qa(n, 0.0);  // qa[k] = sum_l a_l y_l K_kl y_k over the prefix
  std::function<void(std::size_t, double, double, double)> dfs = [&](std::size_t k, double eq, double lin,
                                                                      double quad) {
    if (k + 1 == n) {
      const double last = -eq * y[k];  // y_k a_k = -eq
      if (last < -1e-12 || last > C + 1e-12) return;
      const double ak = std::clamp(last, 0.0, C);
      const double v = lin + ak - 0.5 * (quad + 2.0 * ak * qa[k] + ak * ak * K[k][k]);
      if (v > best_v) {
        best_v = v;
        best = a;
        best[k] = ak;
      }
      return;
    }
    for (int s = 0; s <= 10; ++s) {
      const double ak = C * s / 10.0;
      a[k] = ak;
      const double q = quad + 2.0 * ak * qa[k] + ak * ak * K[k][k];
      if (ak != 0.0) {
        for (std::size_t m = k + 1; m < n; ++m) qa[m] += ak * y[k] * y[m] * K[k][m];
      }
      dfs(k + 1, eq + ak * y[k], lin + ak, q);
      if (ak != 0.0) {
        for (std::size_t m = k + 1; m < n; ++m) qa[m] -= ak * y[k] * y[m] * K[k][m];
      }
    }
    a[k] = 0.0;
  };
  dfs(0, 0.0, 0.0, 0.0);
  a = best;
  for (int sweep = 0; sweep < 10000; ++sweep) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) moved |= pair_step(a, y, K, C, i, j);
    }
    if (!moved) break;
  }
  if (alpha_out) *alpha_out = a;
  return dual_value(a, y, K);
}

}  // namespace oracle
