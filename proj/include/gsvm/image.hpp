#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gsvm/error.hpp>

namespace gsvm {

/// Row-major 2-D raster with value semantics. Dimensions are always >= 1.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() : Raster(1, 1) {}
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::InvalidArgument, "raster dimensions must be >= 1");
    }
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Raster(int width, int height, std::vector<T> pixels) : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
      throw Error(ErrorCode::InvalidArgument, "raster dimensions must be >= 1");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorCode::InvalidArgument, "pixel buffer length must equal width * height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  T& at(int x, int y) { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  /// Out-of-bounds reads return `outside`.
  T get_or(int x, int y, T outside) const noexcept { return contains(x, y) ? at(x, y) : outside; }

  /// Clamped (replicate-border) read.
  const T& clamped(int x, int y) const noexcept {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return at(x, y);
  }

  std::span<T> pixels() noexcept { return pixels_; }
  std::span<const T> pixels() const noexcept { return pixels_; }

  bool operator==(const Raster&) const = default;

 private:
  int width_;
  int height_;
  std::vector<T> pixels_;
};

/// 8-bit intensities, 0 = black.
using GrayImage = Raster<std::uint8_t>;

/// 1 = ink (foreground), 0 = background. Values other than 0/1 are never stored.
using BinaryImage = Raster<std::uint8_t>;

struct BoundingBox {
  int left = 0;
  int top = 0;
  int width = 1;
  int height = 1;

  int right() const noexcept { return left + width - 1; }
  int bottom() const noexcept { return top + height - 1; }
  bool operator==(const BoundingBox&) const = default;
};

std::size_t count_foreground(const BinaryImage& img);

/// Copies the `box` region of `img`. Throws InvalidArgument if the box leaves the image.
BinaryImage crop(const BinaryImage& img, const BoundingBox& box);

/// Tight box around all foreground pixels, or nullopt for a blank image.
std::optional<BoundingBox> foreground_bounds(const BinaryImage& img);

/// Number of 8-connected foreground components.
int count_components8(const BinaryImage& img);

}  // namespace gsvm
