#include <gsvm/image.hpp>

#include <algorithm>
#include <vector>

namespace gsvm {

std::size_t count_foreground(const BinaryImage& img) {
  return static_cast<std::size_t>(std::count(img.pixels().begin(), img.pixels().end(), std::uint8_t{1}));
}

BinaryImage crop(const BinaryImage& img, const BoundingBox& box) {
  if (box.width < 1 || box.height < 1 || box.left < 0 || box.top < 0 || box.right() >= img.width() ||
      box.bottom() >= img.height()) {
    throw Error(ErrorCode::InvalidArgument, "crop box lies outside the image");
  }
  BinaryImage out(box.width, box.height);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) {
      out.at(x, y) = img.at(box.left + x, box.top + y);
    }
  }
  return out;
}

std::optional<BoundingBox> foreground_bounds(const BinaryImage& img) {
  int min_x = img.width(), min_y = img.height(), max_x = -1, max_y = -1;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.at(x, y)) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (max_x < 0) return std::nullopt;
  return BoundingBox{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

int count_components8(const BinaryImage& img) {
  std::vector<std::uint8_t> seen(img.size(), 0);
  std::vector<std::pair<int, int>> stack;
  int components = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * img.width() + x;
      if (!img.at(x, y) || seen[idx]) continue;
      ++components;
      seen[idx] = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (!img.contains(nx, ny) || !img.at(nx, ny)) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * img.width() + nx;
            if (seen[nidx]) continue;
            seen[nidx] = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace gsvm
