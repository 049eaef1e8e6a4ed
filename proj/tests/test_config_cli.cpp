#include <doctest.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "exchlab/cli.hpp"

using namespace exchlab;
namespace fs = std::filesystem;

namespace {

constexpr const char* kMinimalConfig = R"({
  "master_seed": 7,
  "experiments": [
    {
      "name": "mini",
      "generator": {"family": "iid_symmetric"},
      "statistic": "full_sum",
      "m_values": [100]
    }
  ]
})";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("exchlab_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const auto cfg = cli::parse_config_text(kMinimalConfig, "mini.json");
  REQUIRE(cfg.experiments.size() == 1);
  const auto& e = cfg.experiments[0];
  CHECK(cfg.master_seed == 7);
  CHECK(e.n_rep == 10000);
  CHECK(e.epsilons == std::vector<double>{0.05, 0.1, 0.5});
  CHECK(e.schedule.gamma == 0.0);
  CHECK_FALSE(e.outputs.write_samples);
}

TEST_CASE("weber gamma fills the target variance") {
  const auto cfg = cli::parse_config_text(R"({
    "master_seed": 1,
    "experiments": [{
      "name": "w",
      "generator": {"family": "iid_symmetric"},
      "statistic": "weber",
      "gamma": 0.5,
      "m_values": [10]
    }]
  })",
                                          "w.json");
  CHECK(cfg.experiments[0].statistic.target_sigma2() == 0.5);
}

TEST_CASE("config validation errors") {
  SUBCASE("duplicate names") {
    CHECK_THROWS_WITH_AS(
        cli::parse_config_text(R"({
          "master_seed": 1,
          "experiments": [
            {"name": "a", "generator": {"family": "iid_symmetric"},
             "statistic": "full_sum", "m_values": [10]},
            {"name": "a", "generator": {"family": "iid_symmetric"},
             "statistic": "full_sum", "m_values": [10]}
          ]
        })",
                               "dup.json"),
        doctest::Contains("duplicate experiment name"), cli::ConfigError);
  }
  SUBCASE("parse errors carry a line number") {
    CHECK_THROWS_WITH_AS(
        cli::parse_config_text("{\n  \"master_seed\": 1,\n  oops\n}", "bad.json"),
        doctest::Contains("bad.json:3"), cli::ConfigError);
  }
  SUBCASE("unknown keys are named") {
    CHECK_THROWS_WITH_AS(
        cli::parse_config_text(R"({"master_seed": 1, "experiments": [
          {"name": "a", "generator": {"family": "iid_symmetric"},
           "statistic": "full_sum", "m_values": [10], "reps": 7}]})",
                               "k.json"),
        doctest::Contains("unknown key 'reps'"), cli::ConfigError);
  }
  SUBCASE("generator fields are validated") {
    CHECK_THROWS_WITH_AS(
        cli::parse_config_text(R"({"master_seed": 1, "experiments": [
          {"name": "a", "generator": {"family": "equicorrelated_gaussian",
           "rho": 1.5}, "statistic": "full_sum", "m_values": [10]}]})",
                               "r.json"),
        doctest::Contains("rho"), cli::ConfigError);
    CHECK_THROWS_AS(
        cli::parse_config_text(R"({"master_seed": 1, "experiments": [
          {"name": "a", "generator": {"family": "equicorrelated_gaussian"},
           "statistic": "full_sum", "m_values": [10]}]})",
                               "r2.json"),
        cli::ConfigError);
    CHECK_THROWS_WITH_AS(
        cli::parse_config_text(R"({"master_seed": 1, "experiments": [
          {"name": "a", "generator": {"family": "nope"},
           "statistic": "full_sum", "m_values": [10]}]})",
                               "f.json"),
        doctest::Contains("unknown family"), cli::ConfigError);
  }
  SUBCASE("odd m for the zero-sum family is rejected up front") {
    CHECK_THROWS_WITH_AS(
        cli::parse_config_text(R"({"master_seed": 1, "experiments": [
          {"name": "a", "generator": {"family": "zero_sum_permutation"},
           "statistic": "full_sum", "m_values": [11]}]})",
                               "z.json"),
        doctest::Contains("even"), cli::ConfigError);
  }
  SUBCASE("missing master_seed") {
    CHECK_THROWS_AS(cli::parse_config_text(R"({"experiments": []})", "s.json"),
                    cli::ConfigError);
  }
}

TEST_CASE("explicit magnitude lists are normalized and length-checked") {
  const auto cfg = cli::parse_config_text(R"({
    "master_seed": 1,
    "experiments": [{
      "name": "mags",
      "generator": {"family": "rademacher_magnitude",
                    "magnitudes": [1, 2, 1, 2]},
      "statistic": "full_sum",
      "m_values": [4],
      "n_rep": 100
    }]
  })",
                                          "m.json");
  const auto& mags = cfg.experiments[0].generator.magnitudes.values;
  REQUIRE(mags.size() == 4);
  CHECK(mags[1] == doctest::Approx(2.0 / std::sqrt(2.5)).epsilon(1e-14));
  CHECK_THROWS_WITH_AS(
      cli::parse_config_text(R"({"master_seed": 1, "experiments": [
        {"name": "a", "generator": {"family": "rademacher_magnitude",
         "magnitudes": [1, 2]}, "statistic": "full_sum", "m_values": [4]}]})",
                             "len.json"),
      doctest::Contains("length"), cli::ConfigError);
}

TEST_CASE("format_double") {
  CHECK(cli::format_double(0.5) == "0.5");
  CHECK(cli::format_double(1.0) == "1");
  CHECK(cli::format_double(std::nan("")) == "");
  // round-trips
  const double v = 0.1234567890123456789;
  CHECK(std::stod(cli::format_double(v)) == v);
}

TEST_CASE("cmd_run writes the pinned CSV schema deterministically") {
  TempDir dir;
  auto cfg = cli::parse_config_text(R"({
    "master_seed": 99,
    "experiments": [{
      "name": "small",
      "generator": {"family": "rademacher_magnitude", "magnitudes": "unit"},
      "statistic": "full_sum",
      "m_values": [16, 32],
      "n_rep": 200,
      "write_samples": true
    }]
  })",
                                    "c.json");
  cli::Overrides ov;
  ov.out_dir = (dir.path / "out1").string();
  REQUIRE(cli::cmd_run(cfg, ov) == 0);
  const auto csv = read_file(dir.path / "out1" / "report.csv");
  CHECK(csv.rfind(std::string(cli::kReportHeader) + "\n", 0) == 0);
  // 2 m-values x 3 epsilons = 6 data rows
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(fs::exists(dir.path / "out1" / "samples_small_16.csv"));
  CHECK(fs::exists(dir.path / "out1" / "samples_small_32.csv"));

  SUBCASE("same seed, different thread hint: byte-identical") {
    cli::Overrides ov2 = ov;
    ov2.out_dir = (dir.path / "out2").string();
    ov2.threads = 3;
    REQUIRE(cli::cmd_run(cfg, ov2) == 0);
    CHECK(read_file(dir.path / "out2" / "report.csv") == csv);
    CHECK(read_file(dir.path / "out2" / "samples_small_16.csv") ==
          read_file(dir.path / "out1" / "samples_small_16.csv"));
  }
  SUBCASE("write_samples=false writes no sample files") {
    auto cfg2 = cfg;
    cfg2.experiments[0].outputs.write_samples = false;
    cli::Overrides ov3;
    ov3.out_dir = (dir.path / "out3").string();
    REQUIRE(cli::cmd_run(cfg2, ov3) == 0);
    CHECK_FALSE(fs::exists(dir.path / "out3" / "samples_small_16.csv"));
    CHECK(fs::exists(dir.path / "out3" / "report.csv"));
  }
  SUBCASE("seed override changes the bytes") {
    cli::Overrides ov4;
    ov4.out_dir = (dir.path / "out4").string();
    ov4.seed = 100;
    REQUIRE(cli::cmd_run(cfg, ov4) == 0);
    CHECK(read_file(dir.path / "out4" / "report.csv") != csv);
  }
}

TEST_CASE("cmd_check emits the schema with empty gof columns") {
  TempDir dir;
  auto cfg = cli::parse_config_text(kMinimalConfig, "mini.json");
  cfg.experiments[0].n_rep = 200;
  cli::Overrides ov;
  ov.out_dir = (dir.path / "chk").string();
  REQUIRE(cli::cmd_check(cfg, ov) == 0);
  const auto csv = read_file(dir.path / "chk" / "report.csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == cli::kReportHeader);
  REQUIRE(std::getline(lines, row));
  // ks, w1, sample_mean, sample_var empty: ",,,," after the seed field
  CHECK(row.find("mini,iid_symmetric,full_sum,0,100,200,7,,,,,") == 0);
}

TEST_CASE("cmd_identity") {
  CHECK(cli::cmd_identity(200, 300, 5) == 0);
  CHECK(cli::cmd_identity(201, 300, 5) == 2);  // odd m_max
  CHECK(cli::cmd_identity(200, 0, 5) == 2);    // no rows
}

TEST_CASE("cmd_run returns 1 when a cell fails at run time") {
  TempDir dir;
  // rho = 12/m leaves [0,1) at m=8; rules are only resolvable per cell
  const auto cfg = cli::parse_config_text(R"({
    "master_seed": 1,
    "experiments": [{
      "name": "blowup",
      "generator": {"family": "equicorrelated_gaussian", "rho_rule": {"c": 12}},
      "statistic": "full_sum",
      "m_values": [8],
      "n_rep": 100
    }]
  })",
                                          "b.json");
  cli::Overrides ov;
  ov.out_dir = (dir.path / "out").string();
  CHECK(cli::cmd_run(cfg, ov) == 1);
}

TEST_CASE("write_reports=false omits an experiment's rows") {
  TempDir dir;
  auto cfg = cli::parse_config_text(kMinimalConfig, "mini.json");
  cfg.experiments[0].n_rep = 100;
  cfg.experiments[0].outputs.write_reports = false;
  cli::Overrides ov;
  ov.out_dir = (dir.path / "out").string();
  REQUIRE(cli::cmd_run(cfg, ov) == 0);
  const auto csv = read_file(dir.path / "out" / "report.csv");
  CHECK(csv == std::string(cli::kReportHeader) + "\n");
}
