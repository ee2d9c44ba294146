#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include <gsvm/dataset.hpp>
#include <gsvm/features.hpp>
#include <gsvm/model_io.hpp>
#include <gsvm/modelsel.hpp>
#include <gsvm/pgm.hpp>
#include <gsvm/preprocess.hpp>
#include <gsvm/synth.hpp>

#include "scratch_dir.hpp"

using namespace gsvm;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset toy(int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.7);
  Dataset d;
  d.features = FeatureMatrix(4);
  for (int c = 1; c <= classes; ++c) {
    for (int i = 0; i < 12; ++i) {
      d.features.push_back(std::vector<double>{c + g(rng), -c + g(rng), g(rng), 3.0});
      d.labels.push_back(c);
    }
  }
  return d;
}

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_model(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("model accepted");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("dataset loading") {
  TEST_CASE("image directory with two classes") {
    testutil::ScratchDir dir("imgdir");
    SynthConfig sc;
    sc.classes = 2;
    sc.samples_per_class = 3;
    CHECK(generate_synthetic_dataset(sc, dir.path()) == 6);
    const auto d = load_image_dir(dir.path(), {});
    CHECK(d.size() == 6);
    CHECK(d.dimension() == 68);
    CHECK(d.class_ids() == std::vector<int>{1, 2});
  }

  TEST_CASE("empty class directory") {
    testutil::ScratchDir dir("emptycls");
    std::filesystem::create_directories(dir / "1");
    std::filesystem::create_directories(dir / "2");
    write_pgm(dir / "1" / "a.pgm", render_glyph(0, {}));
    try {
      load_image_dir(dir.path(), {});
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyClass);
    }
  }

  TEST_CASE("directory names map to ids") {
    testutil::ScratchDir a("numeric");
    for (const char* n : {"10", "2", "7"}) std::filesystem::create_directories(a / n);
    const auto numeric = class_directories(a.path());
    REQUIRE(numeric.size() == 3);
    CHECK(numeric[0].first == 2);
    CHECK(numeric[2].first == 10);
    testutil::ScratchDir b("named");
    for (const char* n : {"beta", "alpha", "10"}) std::filesystem::create_directories(b / n);
    const auto named = class_directories(b.path());
    REQUIRE(named.size() == 3);
    CHECK(named[0].second == "10");
    CHECK(named[1].second == "alpha");
    CHECK(named[1].first == 1);
  }

  TEST_CASE("feature csv roundtrip") {
    FeatureConfig cfg;
    Dataset d;
    d.features = FeatureMatrix(68);
    for (int r = 0; r < 5; ++r) {
      std::vector<double> v(68);
      for (int k = 0; k < 68; ++k) v[k] = r * 0.1 + k / 3.0;
      d.features.push_back(v);
      d.labels.push_back(r % 2 + 1);
    }
    std::stringstream ss;
    write_feature_csv(ss, d, cfg);
    const auto back = read_feature_csv(ss);
    CHECK(back.size() == 5);
    CHECK(back.dimension() == 68);
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
  }

  TEST_CASE("ragged csv") {
    std::istringstream in("label,a,b\n1,0.5,1\n2,0.25\n");
    try {
      read_feature_csv(in);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MixedDimensions);
    }
  }
}

TEST_SUITE("model files") {
  TEST_CASE("roundtrip keeps decision values exactly") {
    testutil::ScratchDir dir("model");
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 2.0);
    for (auto strategy : {Strategy::OneVsAll, Strategy::OneVsOne}) {
      for (const auto& k : {KernelSpec::rbf(0.3), KernelSpec::polynomial(3), KernelSpec::sigmoid(0.1, -0.3),
                            KernelSpec::linear()}) {
        const auto model = train_multiclass(strategy, toy(3, 4), k, 2.0);
        save_model(model, dir / "m.gsvm");
        const auto back = load_model(dir / "m.gsvm");
        CHECK(back.class_ids == model.class_ids);
        CHECK(back.scaling == model.scaling);
        for (int p = 0; p < 100; ++p) {
          const std::vector<double> probe{g(rng), g(rng), g(rng), g(rng)};
          CHECK(decision_values(back, probe) == decision_values(model, probe));
        }
      }
    }
  }

  TEST_CASE("corruption is detected") {
    std::ostringstream os;
    write_model(os, train_multiclass(Strategy::OneVsOne, toy(3, 5), KernelSpec::rbf(1.0), 1.0));
    const std::string good = os.str();
    CHECK(load_error("XXXX\n") == ErrorCode::BadMagic);
    CHECK(load_error("") == ErrorCode::BadMagic);
    auto v2 = good;
    v2.replace(v2.find("version 1"), 9, "version 2");
    CHECK(load_error(v2) == ErrorCode::VersionMismatch);
    CHECK(load_error(good.substr(0, good.size() / 2)) == ErrorCode::CorruptBlock);
    CHECK(load_error(good.substr(0, good.size() - 4)) == ErrorCode::CorruptBlock);
    auto wrong_count = good;
    wrong_count.replace(wrong_count.find("classifiers 3"), 13, "classifiers 2");
    CHECK(load_error(wrong_count) == ErrorCode::CorruptBlock);
    auto short_row = good;
    const auto sv = short_row.find("sv ");
    const auto row_start = short_row.find('\n', sv) + 1;
    const auto row_end = short_row.find('\n', row_start);
    short_row.erase(short_row.rfind(' ', row_end), row_end - short_row.rfind(' ', row_end));
    CHECK(load_error(short_row) == ErrorCode::CorruptBlock);
  }

  TEST_CASE("missing file") {
    try {
      load_model("/nonexistent/model.gsvm");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnreadableFile);
    }
  }
}

TEST_SUITE("synthetic data") {
  TEST_CASE("generation is deterministic and laid out by class") {
    testutil::ScratchDir a("gen_a"), b("gen_b");
    SynthConfig sc;
    sc.classes = 10;
    sc.samples_per_class = 50;
    sc.seed = 7;
    CHECK(generate_synthetic_dataset(sc, a.path()) == 500);
    CHECK(generate_synthetic_dataset(sc, b.path()) == 500);
    int dirs = 0, files = 0;
    for (const auto& cls : std::filesystem::directory_iterator(a.path())) {
      ++dirs;
      for (const auto& f : std::filesystem::directory_iterator(cls.path())) {
        ++files;
        const auto rel = std::filesystem::relative(f.path(), a.path());
        CHECK(slurp(f.path()) == slurp(b.path() / rel));
      }
    }
    CHECK(dirs == 10);
    CHECK(files == 500);
  }

  TEST_CASE("invalid configs") {
    SynthConfig sc;
    sc.classes = 1;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc.classes = 2;
    sc.noise_rate = 0.06;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc.noise_rate = 0.02;
    CHECK_NOTHROW(sc.validate());
    sc.classes = glyph_library_size() + 1;
    try {
      sc.validate();
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  }

  TEST_CASE("noise-free samples keep their base glyph topology") {
    SynthConfig sc;
    sc.classes = 2;
    sc.samples_per_class = 200;
    for (int k = 1; k <= 2; ++k) {
      const auto base = skeleton_topology(process_character(render_glyph(k - 1, {})).skeleton);
      for (int i = 0; i < sc.samples_per_class; ++i) {
        CHECK(skeleton_topology(process_character(synth_sample(sc, k, i)).skeleton) == base);
      }
    }
  }

  TEST_CASE("base glyphs differ in topology between neighbouring classes") {
    int distinct = 0;
    for (int k = 0; k + 1 < 10; ++k) {
      const auto a = skeleton_topology(process_character(render_glyph(k, {})).skeleton);
      const auto b = skeleton_topology(process_character(render_glyph(k + 1, {})).skeleton);
      distinct += !(a == b);
    }
    CHECK(distinct >= 7);
  }

  TEST_CASE("noise changes pixels but stays decodable") {
    SynthConfig sc;
    sc.classes = 3;
    sc.noise_rate = 0.02;
    const auto noisy = synth_sample(sc, 2, 0);
    sc.noise_rate = 0.0;
    CHECK_FALSE(noisy == synth_sample(sc, 2, 0));
    CHECK_NOTHROW(process_character(noisy));
  }

  TEST_CASE("noise-free training accuracy is perfect") {
    SynthConfig sc;
    sc.classes = 10;
    sc.samples_per_class = 30;
    Dataset d;
    d.features = FeatureMatrix(68);
    for (int k = 1; k <= sc.classes; ++k) {
      for (int i = 0; i < sc.samples_per_class; ++i) {
        d.features.push_back(extract_features(process_character(synth_sample(sc, k, i)), {}).values);
        d.labels.push_back(k);
      }
    }
    const TrainConfig cfg{Strategy::OneVsAll, KernelSpec::rbf(0.125), 64.0, {}};
    CHECK(evaluate(train(d, cfg), d).overall_accuracy == 1.0);
  }
}
