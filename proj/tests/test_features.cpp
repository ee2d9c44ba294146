#include <doctest.h>

#include <numeric>

#include <gsvm/features.hpp>
#include <gsvm/preprocess.hpp>

#include "oracles.hpp"

using namespace gsvm;

namespace {

BinaryImage empty32() { return BinaryImage(32, 32, 0); }

FeatureConfig cells(int px) {
  FeatureConfig c;
  c.cell_px = px;
  return c;
}

}  // namespace

TEST_CASE("feature lengths per cell size") {
  const std::pair<int, std::size_t> expected[] = {{16, 8}, {8, 20}, {4, 68}, {2, 260}};
  for (auto [px, len] : expected) {
    CharacterRecord rec;
    rec.bbox = {0, 0, 10, 10};
    CHECK(extract_features(rec, cells(px)).values.size() == len);
    CHECK(cells(px).total_count() == len);
  }
  CHECK_THROWS_AS(cells(5).validate(), Error);
}

TEST_CASE("zoning on trivial skeletons") {
  const auto zeros = local_zone_features(empty32(), cells(4));
  CHECK(zeros == std::vector<double>(64, 0.0));
  const auto full = local_zone_features(BinaryImage(32, 32, 1), cells(4));
  CHECK(full == std::vector<double>(64, 16.0));
  auto corner = empty32();
  corner.at(0, 0) = 1;
  const auto v = local_zone_features(corner, cells(4));
  CHECK(v[0] == 1.0);
  CHECK(std::accumulate(v.begin(), v.end(), 0.0) == 1.0);
}

TEST_CASE("cells are row-major") {
  auto img = empty32();
  img.at(9, 0) = 1;   // column cell 2, row cell 0
  img.at(0, 13) = 1;  // column cell 0, row cell 3
  const auto v = local_zone_features(img, cells(4));
  CHECK(v[2] == 1.0);
  CHECK(v[3 * 8] == 1.0);
}

TEST_CASE("zone counts sum to the skeleton size for every cell size") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    const auto sk = thin(oracle::random_blob(rng));
    for (int px : {16, 8, 4, 2}) {
      const auto v = local_zone_features(sk, cells(px));
      CHECK(std::accumulate(v.begin(), v.end(), 0.0) == static_cast<double>(count_foreground(sk)));
      for (double e : v) CHECK(e <= px * px);
    }
  }
}

TEST_CASE("shifting by one cell shifts the zone vector") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto curves = oracle::random_thin_curves(rng, 32, 2);
    BinaryImage small = empty32();
    for (int y = 0; y < 24; ++y) {
      for (int x = 0; x < 24; ++x) small.at(x, y) = curves.at(x + 4, y + 4);
    }
    for (int px : {8, 4, 2}) {
      BinaryImage shifted = empty32();
      for (int y = 0; y + px < 32; ++y) {
        for (int x = 0; x + px < 32; ++x) shifted.at(x + px, y + px) = small.at(x, y);
      }
      const auto a = local_zone_features(small, cells(px));
      const auto b = local_zone_features(shifted, cells(px));
      const int side = 32 / px;
      for (int r = 0; r + 1 < side; ++r) {
        for (int c = 0; c + 1 < side; ++c) CHECK(b[(r + 1) * side + c + 1] == a[r * side + c]);
      }
    }
  }
}

TEST_CASE("aspect ratio") {
  CHECK(aspect_ratio({0, 0, 10, 10}) == 1.0);
  CHECK(aspect_ratio({0, 0, 20, 40}) == 0.5);
  CHECK(aspect_ratio({0, 0, 40, 20}) == 2.0);
}

TEST_CASE("topology of line, plus, tee and empty") {
  auto line = empty32();
  for (int x = 5; x < 15; ++x) line.at(x, 8) = 1;
  CHECK(skeleton_topology(line) == SkeletonTopology{2, 0, 0});

  auto plus = empty32();
  for (int i = 0; i < 7; ++i) plus.at(10 + i, 13) = plus.at(13, 10 + i) = 1;
  CHECK(skeleton_topology(plus) == SkeletonTopology{4, 0, 1});

  auto tee = empty32();
  for (int i = 0; i < 7; ++i) tee.at(10 + i, 10) = 1;
  for (int i = 1; i <= 4; ++i) tee.at(13, 10 + i) = 1;
  CHECK(skeleton_topology(tee) == SkeletonTopology{3, 1, 0});

  CHECK(skeleton_topology(empty32()) == SkeletonTopology{0, 0, 0});
}

TEST_CASE("topology matches the crossing-number oracle on random curves") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto img = oracle::random_thin_curves(rng);
    const auto t = skeleton_topology(img);
    const auto o = oracle::topology(img);
    CHECK(t.endpoints == o.endpoints);
    CHECK(t.branch_points == o.branches);
    CHECK(t.cross_points == o.crosses);
  }
}

TEST_CASE("single open curve has two ends and no junctions") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto img = oracle::random_thin_curves(rng, 32, 1);
    if (count_foreground(img) < 2) continue;
    CHECK(skeleton_topology(img) == SkeletonTopology{2, 0, 0});
  }
}

TEST_CASE("global features follow the locals") {
  CharacterRecord rec;
  rec.bbox = {0, 0, 12, 30};
  rec.skeleton = empty32();
  for (int y = 3; y < 29; ++y) rec.skeleton.at(16, y) = 1;
  const auto fv = extract_features(rec, cells(4));
  REQUIRE(fv.values.size() == 68);
  CHECK(fv.values[64] == doctest::Approx(0.4));
  CHECK(fv.values[65] == 2.0);
  CHECK(fv.values[66] == 0.0);
  CHECK(fv.values[67] == 0.0);
}

TEST_CASE("csv header") {
  const auto h = feature_csv_header(cells(16));
  CHECK(h == "label,v1,v2,v3,v4,whr,ep,cp,bp");
}
