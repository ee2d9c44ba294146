#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <gsvm/dataset.hpp>
#include <gsvm/model_io.hpp>
#include <gsvm/modelsel.hpp>
#include <gsvm/report.hpp>

#include "scratch_dir.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run gsvm_cli(const testutil::ScratchDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd =
      std::string("\"") + GSVM_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  Run r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("datagen, train and evaluate") {
  testutil::ScratchDir dir("cli_flow");
  const auto data = (dir / "data").string();
  auto r = gsvm_cli(dir, "datagen --out " + data + " --classes 3 --per-class 12 --seed 5");
  REQUIRE(r.status == 0);
  CHECK(r.out == "wrote 36 images in 3 classes\n");

  r = gsvm_cli(dir, "train --data " + data + " --kernel rbf --gamma 0.125 --c 64 --model " + (dir / "m.gsvm").string());
  REQUIRE(r.status == 0);
  CHECK(std::filesystem::exists(dir / "m.gsvm"));

  r = gsvm_cli(dir, "evaluate --data " + data + " --model " + (dir / "m.gsvm").string() + " --out " +
                        (dir / "report.txt").string() + " --confusion " + (dir / "conf.csv").string());
  REQUIRE(r.status == 0);
  const auto report = slurp(dir / "report.txt");
  CHECK(report.find("100.00") != std::string::npos);
  CHECK(slurp(dir / "conf.csv").rfind("true\\pred,1,2,3\n", 0) == 0);

  SUBCASE("feature dimension mismatch") {
    r = gsvm_cli(dir, "evaluate --data " + data + " --grid-cell 8 --model " + (dir / "m.gsvm").string());
    CHECK(r.status == 1);
    CHECK(r.err.rfind("error: DimensionMismatch", 0) == 0);
  }
  SUBCASE("features command matches the library") {
    r = gsvm_cli(dir, "features --data " + data + " --grid-cell 16");
    REQUIRE(r.status == 0);
    gsvm::FeatureConfig cfg;
    cfg.cell_px = 16;
    std::ostringstream os;
    gsvm::write_feature_csv(os, gsvm::load_image_dir(data, cfg), cfg);
    CHECK(r.out == os.str());
  }
}

TEST_CASE("gridsearch cell equals library cross-validation") {
  testutil::ScratchDir dir("cli_grid");
  const auto data = (dir / "data").string();
  REQUIRE(gsvm_cli(dir, "datagen --out " + data + " --classes 4 --per-class 10 --noise 0.01 --seed 9").status == 0);
  const auto r = gsvm_cli(dir, "gridsearch --data " + data + " --c-grid 2^3 --gamma-grid 2^-2 --folds 4 --seed 11");
  REQUIRE(r.status == 0);
  const auto d = gsvm::load_image_dir(data, {});
  const gsvm::TrainConfig cfg{gsvm::Strategy::OneVsAll, gsvm::KernelSpec::rbf(0.25), 8.0, {}};
  const double acc = gsvm::cross_validate(d, cfg, 4, 11);
  gsvm::GridSearchReport rep;
  rep.entries.push_back({8.0, 0.25, acc, {}});
  rep.best = rep.entries.front();
  CHECK(r.out == gsvm::format_grid_csv(rep));
}

TEST_CASE("seeded commands are reproducible") {
  testutil::ScratchDir dir("cli_seed");
  const auto data = (dir / "data").string();
  REQUIRE(gsvm_cli(dir, "datagen --out " + data + " --classes 3 --per-class 10 --noise 0.02 --seed 2").status == 0);
  const std::string cmd = "repeat-eval --data " + data + " --repeats 3 --gamma 0.25 --c 8 --seed 42";
  const auto a = gsvm_cli(dir, cmd);
  const auto b = gsvm_cli(dir, cmd);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("Average") != std::string::npos);

  const auto p1 = gsvm_cli(dir, "datagen --page " + (dir / "p1.pgm").string() + " --classes 5 --seed 3");
  const auto p2 = gsvm_cli(dir, "datagen --page " + (dir / "p2.pgm").string() + " --classes 5 --seed 3");
  REQUIRE(p1.status == 0);
  CHECK(p1.out == p2.out);
  CHECK(slurp(dir / "p1.pgm") == slurp(dir / "p2.pgm"));
}

TEST_CASE("preprocess splits a page") {
  testutil::ScratchDir dir("cli_page");
  auto r = gsvm_cli(dir, "datagen --page " + (dir / "page.pgm").string() +
                             " --classes 6 --lines 2 --chars-per-line 4 --skew 3 --seed 8");
  REQUIRE(r.status == 0);
  r = gsvm_cli(dir, "preprocess --input " + (dir / "page.pgm").string() + " --out " + (dir / "chars").string());
  REQUIRE(r.status == 0);
  CHECK(r.out.find("lines 2\ncharacters 8\n") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "chars" / "char_0007.pgm"));
}

TEST_CASE("errors map to exit codes") {
  testutil::ScratchDir dir("cli_err");
  auto r = gsvm_cli(dir, "train --data x");
  CHECK(r.status == 2);
  CHECK(r.err.rfind("error: Usage:", 0) == 0);
  r = gsvm_cli(dir, "train --data " + (dir / "missing").string() + " --model m.gsvm");
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
  std::ofstream(dir / "bad.gsvm") << "NOPE\n";
  r = gsvm_cli(dir, "evaluate --data " + (dir / "missing").string() + " --model " + (dir / "bad.gsvm").string());
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: BadMagic", 0) == 0);
  r = gsvm_cli(dir, "datagen --out " + (dir / "d").string() + " --classes 1");
  CHECK(r.status == 1);
  CHECK(r.err.rfind("error: InvalidConfig", 0) == 0);
}
