#include "fringestep/io.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

using namespace fringestep;
using test::random_field;

namespace {

namespace fs = std::filesystem;

// Fresh per-test scratch directory under the build tree.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::path("io_scratch") / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("float-map files round-trip exactly at 32-bit precision") {
  TempDir dir("pfm_roundtrip");
  ScalarField f = random_field(12, 17, 5, -3.0, 3.0);
  f(0, 0) = 0.0;
  f(3, 4) = -1.25e-30;  // tiny magnitude survives
  f(7, 7) = 6.5e20;     // large magnitude survives
  const std::string path = dir.file("field.pfm");
  write_pfm(path, f);

  const ScalarField back = read_pfm(path);
  REQUIRE(back.rows() == f.rows());
  REQUIRE(back.cols() == f.cols());
  for (Eigen::Index r = 0; r < f.rows(); ++r)
    for (Eigen::Index c = 0; c < f.cols(); ++c)
      CHECK(back(r, c) == static_cast<double>(static_cast<float>(f(r, c))));
}

TEST_CASE("float-map layout: header then rows bottom-to-top") {
  TempDir dir("pfm_layout");
  ScalarField f(2, 2);
  f << 1, 2,   // top row
       3, 4;   // bottom row
  const std::string path = dir.file("tiny.pfm");
  write_pfm(path, f);

  const std::string bytes = slurp(path);
  CHECK(bytes.substr(0, 3) == "Pf\n");
  CHECK(bytes.find("2 2\n") == 3);
  // 4 floats follow the "-1.0..." scale line; bottom row (3,4) comes first
  const std::size_t data_off = bytes.size() - 4 * sizeof(float);
  float vals[4];
  std::memcpy(vals, bytes.data() + data_off, sizeof(vals));
  CHECK(vals[0] == 3.0f);
  CHECK(vals[1] == 4.0f);
  CHECK(vals[2] == 1.0f);
  CHECK(vals[3] == 2.0f);
}

TEST_CASE("float-map reader applies the header scale magnitude") {
  TempDir dir("pfm_scale");
  ScalarField f = random_field(6, 9, 8);
  const std::string path = dir.file("unit.pfm");
  write_pfm(path, f);

  // rewrite the header so the scale magnitude is 10 instead of 1
  std::string bytes = slurp(path);
  const std::string old_scale = "\n-1.0\n";
  const std::size_t at = bytes.find(old_scale);
  REQUIRE(at != std::string::npos);
  bytes.replace(at, old_scale.size(), "\n-10.0\n");
  const std::string scaled_path = dir.file("scaled.pfm");
  std::ofstream(scaled_path, std::ios::binary) << bytes;

  const ScalarField unit = read_pfm(path);
  const ScalarField scaled = read_pfm(scaled_path);
  CHECK(((scaled - 10.0 * unit).abs() == 0.0).all());
}

TEST_CASE("malformed float-map files are rejected with the path in the message") {
  TempDir dir("pfm_bad");

  const std::string color = dir.file("color.pfm");
  std::ofstream(color, std::ios::binary) << "PF\n2 2\n-1.0\n" << std::string(48, '\0');
  CHECK_THROWS_AS((void)read_pfm(color), FileFormatError);

  const std::string truncated = dir.file("short.pfm");
  std::ofstream(truncated, std::ios::binary) << "Pf\n4 4\n-1.0\n" << std::string(10, '\0');
  CHECK_THROWS_AS((void)read_pfm(truncated), FileFormatError);

  const std::string zero_scale = dir.file("zs.pfm");
  std::ofstream(zero_scale, std::ios::binary) << "Pf\n1 1\n0.0\n" << std::string(4, '\0');
  CHECK_THROWS_AS((void)read_pfm(zero_scale), FileFormatError);

  CHECK_THROWS_WITH_AS((void)read_pfm(dir.file("missing.pfm")),
                       doctest::Contains("missing.pfm"), FileFormatError);
}

TEST_CASE("preview images are valid 8-bit PGM") {
  TempDir dir("pgm");
  const ScalarField f = random_field(9, 13, 77);
  const std::string path = dir.file("prev.pgm");
  write_pgm_preview(path, f);
  const std::string bytes = slurp(path);
  CHECK(bytes.substr(0, 3) == "P5\n");
  CHECK(bytes.find("13 9\n255\n") != std::string::npos);
  CHECK(bytes.size() == bytes.find("255\n") + 4 + 9 * 13);
}

TEST_CASE("result CSV round-trips records bit-exactly") {
  TempDir dir("csv_roundtrip");
  ExperimentPlan plan;
  plan.combos = {{FringeCase::I, Prefilter::None, Estimator::Tan},
                 {FringeCase::II, Prefilter::None, Estimator::Sin}};
  plan.sigmas = {0.0, 0.7};
  plan.trials = 2;
  plan.image.width = 64;
  plan.image.height = 64;
  const auto records = run_plan(plan);

  const std::string path = dir.file("results.csv");
  write_result_csv(path, records);
  const auto back = read_result_csv(path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].fringe_case == records[i].fringe_case);
    CHECK(back[i].prefilter == records[i].prefilter);
    CHECK(back[i].estimator == records[i].estimator);
    CHECK(back[i].sigma == records[i].sigma);
    CHECK(back[i].trial == records[i].trial);
    CHECK(back[i].delta_true == records[i].delta_true);
    CHECK(back[i].delta_hat == records[i].delta_hat);
    CHECK(back[i].abs_err == records[i].abs_err);
    CHECK(back[i].status == records[i].status);
    CHECK(back[i].kappa_ratio == records[i].kappa_ratio);
    CHECK(back[i].mask_fraction == records[i].mask_fraction);
    CHECK(back[i].seed == records[i].seed);
  }

  // identical aggregates either way
  const auto a = aggregate_mae(records);
  const auto b = aggregate_mae(back);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mae_median == b[i].mae_median);
    CHECK(a[i].q25 == b[i].q25);
    CHECK(a[i].q75 == b[i].q75);
  }
}

TEST_CASE("failed rows serialize with empty estimate columns") {
  TempDir dir("csv_failed");
  ExperimentRecord r;
  r.fringe_case = FringeCase::II;
  r.sigma = 0.5;
  r.trial = 3;
  r.delta_true = kPi / 3.0;
  r.delta_hat = std::numeric_limits<double>::quiet_NaN();
  r.abs_err = std::numeric_limits<double>::quiet_NaN();
  r.status = TrialStatus::Failed;
  r.seed = 11;
  const std::string path = dir.file("failed.csv");
  write_result_csv(path, {r});

  const std::string bytes = slurp(path);
  CHECK(bytes.find(",,") != std::string::npos);      // empty delta_hat/abs_err
  CHECK(bytes.find("failed") != std::string::npos);  // status column
  CHECK(bytes.find("nan") == std::string::npos);

  const auto back = read_result_csv(path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].status == TrialStatus::Failed);
  CHECK(std::isnan(back[0].delta_hat));
  CHECK(std::isnan(back[0].abs_err));
}

TEST_CASE("result CSV rejects malformed input with line numbers") {
  TempDir dir("csv_bad");

  const std::string wrong_header = dir.file("h.csv");
  std::ofstream(wrong_header) << "a,b,c\n";
  CHECK_THROWS_AS((void)read_result_csv(wrong_header), FileFormatError);

  const std::string short_row = dir.file("s.csv");
  std::ofstream(short_row) << kResultCsvHeader << "\nI,none,tan,0.0\n";
  CHECK_THROWS_WITH_AS((void)read_result_csv(short_row),
                       doctest::Contains("line 2"), FileFormatError);

  const std::string bad_case = dir.file("c.csv");
  std::ofstream(bad_case) << kResultCsvHeader
                          << "\nIX,none,tan,0,0,1,1,0,ok,0,1,7\n";
  CHECK_THROWS_AS((void)read_result_csv(bad_case), FileFormatError);

  // a failed row must leave the estimate columns empty
  const std::string bad_failed = dir.file("f.csv");
  std::ofstream(bad_failed) << kResultCsvHeader
                            << "\nI,none,tan,0,0,1,1,0,failed,0,1,7\n";
  CHECK_THROWS_AS((void)read_result_csv(bad_failed), FileFormatError);
}

TEST_CASE("plan files parse keys, comments, and defaults") {
  TempDir dir("plan_ok");
  const std::string path = dir.file("plan.cfg");
  std::ofstream(path) << "# evaluation sweep\n"
                         "combo = I, none, tan\n"
                         "combo = III, gfb, sin\n"
                         "\n"
                         "sigmas = 0.0, 0.25, 0.5\n"
                         "trials = 7\n"
                         "delta = 0.9\n"
                         "base_seed = 42\n"
                         "width = 96\n"
                         "height = 64\n"
                         "fringe_scale = 15\n";
  const ExperimentPlan plan = load_plan(path);
  REQUIRE(plan.combos.size() == 2);
  CHECK(plan.combos[0].fringe_case == FringeCase::I);
  CHECK(plan.combos[1].prefilter == Prefilter::Gfb);
  CHECK(plan.combos[1].estimator == Estimator::Sin);
  REQUIRE(plan.sigmas.size() == 3);
  CHECK(plan.sigmas[1] == 0.25);
  CHECK(plan.trials == 7);
  CHECK(plan.delta_true == 0.9);
  CHECK(plan.base_seed == 42);
  CHECK(plan.image.width == 96);
  CHECK(plan.image.height == 64);
  CHECK(plan.image.fringe_scale == 15.0);

  // omitted keys keep defaults
  const std::string minimal = dir.file("minimal.cfg");
  std::ofstream(minimal) << "combo = II, isotropic, tan\n";
  const ExperimentPlan def = load_plan(minimal);
  CHECK(def.sigmas.size() == 10);
  CHECK(def.trials == 50);
  CHECK(def.image.width == 256);
}

TEST_CASE("plan files reject unknown keys and invalid plans with line numbers") {
  TempDir dir("plan_bad");

  const std::string unknown = dir.file("unknown.cfg");
  std::ofstream(unknown) << "combo = I, none, tan\nthreads = 4\n";
  CHECK_THROWS_WITH_AS((void)load_plan(unknown), doctest::Contains("line 2"),
                       FileFormatError);

  const std::string no_combo = dir.file("none.cfg");
  std::ofstream(no_combo) << "trials = 3\n";
  CHECK_THROWS_AS((void)load_plan(no_combo), FileFormatError);

  const std::string bad_combo = dir.file("badcombo.cfg");
  std::ofstream(bad_combo) << "combo = I, none\n";
  CHECK_THROWS_WITH_AS((void)load_plan(bad_combo), doctest::Contains("line 1"),
                       FileFormatError);

  // syntactically fine but semantically invalid (validation applies)
  const std::string invalid = dir.file("invalid.cfg");
  std::ofstream(invalid) << "combo = III, none, sin\n";
  CHECK_THROWS_AS((void)load_plan(invalid), FileFormatError);

  CHECK_THROWS_AS((void)load_plan(dir.file("missing.cfg")), FileFormatError);
}

TEST_CASE("synthesis metadata dump lists the recipe") {
  TempDir dir("meta");
  SynthSpec spec;
  spec.fringe_case = FringeCase::III;
  spec.sigma = 0.25;
  spec.seed = 77;
  const std::string path = dir.file("meta.txt");
  write_synth_meta(path, spec);
  const std::string bytes = slurp(path);
  CHECK(bytes.find("case = III") != std::string::npos);
  CHECK(bytes.find("sigma = 0.25") != std::string::npos);
  CHECK(bytes.find("seed = 77") != std::string::npos);
  CHECK(bytes.find("width = 256") != std::string::npos);
}
