// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "retrodict/experiments.hpp"
#include "retrodict/io.hpp"
#include "retrodict/rng.hpp"
#include "retrodict/samplers.hpp"

using namespace retrodict;

namespace {

// ctest runs these from the build directory, next to the CLI binary.
int run_cli(const std::string& args) {
  const int rc = std::system(("./retrodict_cli " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("classical channel JSON round trip") {
  Eigen::MatrixXd m(3, 3);
  m << 0.5, 0.1, 0.25, 0.3, 0.6, 0.25, 0.2, 0.3, 0.5;
  const StochasticMatrix map{Eigen::MatrixXd(m)};
  const auto loaded = channel_from_json(channel_to_json(map));
  REQUIRE(std::holds_alternative<StochasticMatrix>(loaded));
  CHECK((std::get<StochasticMatrix>(loaded).mat() - m).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dilation JSON round trip preserves the channel") {
  RngStream rng(3, 1);
  GridCell cell{0.2, 0.4, 0.3, 0.6, 1};
  const SampledQubitChannel s = sample_qubit_gad_grid(cell, rng);
  save_channel(s, "io_test_dilation.json");
  const auto loaded = load_channel("io_test_dilation.json");
  REQUIRE(std::holds_alternative<Dilation>(loaded));
  const auto& d = std::get<Dilation>(loaded);
  CHECK((d.unitary() - s.dilation.unitary()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((d.beta().mat() - s.dilation.beta().mat()).cwiseAbs().maxCoeff() < 1e-15);
  std::remove("io_test_dilation.json");
}

TEST_CASE("channel file errors") {
  CHECK_THROWS_AS(load_channel("definitely_missing_file.json"), IoError);
  CHECK_THROWS_AS(channel_from_json("not json at all"), IoError);
  CHECK_THROWS_AS(channel_from_json("{\"type\":\"sundial\"}"), IoError);
}

TEST_CASE("CSV writer: 12 significant digits, LF endings, field counting") {
  CHECK(format_sig12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig12(2.0) == "2");
  {
    CsvWriter w("io_test.csv", {"a", "b"});
    w.field(1.0 / 3.0);
    w.field(std::string("x"));
    w.end_row();
    w.field(2.0);
    CHECK_THROWS_AS(w.end_row(), IoError);
    w.field(std::string("y"));
    w.end_row();
  }
  const std::string text = slurp("io_test.csv");
  CHECK(text == "a,b\n0.333333333333,x\n2,y\n");
  CHECK(text.find('\r') == std::string::npos);

  const CsvTable t = read_csv("io_test.csv");
  CHECK(t.column("b") == 1);
  CHECK(t.column("nope") == -1);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "0.333333333333");
  std::remove("io_test.csv");
}

TEST_CASE("cli: sample then measure a permutation") {
  CHECK(run_cli("sample --kind permutation --dim 3 --seed 5 --out cli_perm.json") == 0);
  const auto loaded = load_channel("cli_perm.json");
  REQUIRE(std::holds_alternative<StochasticMatrix>(loaded));

  CHECK(run_cli("measure cli_perm.json --seed 5 --npairs 50 --out cli_measure.json") == 0);
  const auto j = nlohmann::json::parse(slurp("cli_measure.json"));
  CHECK(j.at("kind") == "classical");
  CHECK(j.at("cad").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("class") == "Bijection");
  CHECK(j.at("subjectivity").at("value").get<double>() == doctest::Approx(0.0));
  std::remove("cli_perm.json");
  std::remove("cli_measure.json");
}

TEST_CASE("cli: exit codes") {
  CHECK(run_cli("--definitely-not-a-flag") == 2);
  CHECK(run_cli("measure missing_channel.json") == 3);
  CHECK(run_cli("sample --kind nonsense") == 2);
  CHECK(run_cli("verify nonsense") == 2);
  CHECK(run_cli("experiment bit --format yaml") == 2);
}

TEST_CASE("cli: bit experiment file shape and determinism") {
  CHECK(run_cli("experiment bit --grid 8 --seed 3 --out cli_bit_a.csv") == 0);
  CHECK(run_cli("experiment bit --grid 8 --seed 3 --out cli_bit_b.csv") == 0);
  CHECK(slurp("cli_bit_a.csv") == slurp("cli_bit_b.csv"));
  const CsvTable t = read_csv("cli_bit_a.csv");
  CHECK(t.rows.size() == 64);
  CHECK(t.column("subjectivity") >= 0);
  std::remove("cli_bit_b.csv");

  // JSON format carries the same values.
  CHECK(run_cli("experiment bit --grid 8 --seed 3 --format json --out cli_bit.json") == 0);
  const auto j = nlohmann::json::parse(slurp("cli_bit.json"));
  CHECK(j.at("rows").size() == 64);
  std::remove("cli_bit.json");
}

TEST_CASE("cli: heatmap from experiment data") {
  CHECK(run_cli("heatmap cli_bit_a.csv --x D --y F --value subjectivity "
                "--bins 8 --out cli_heat.svg") == 0);
  const std::string svg = slurp("cli_heat.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("bin-values") != std::string::npos);
  // Missing column is an I/O failure.
  CHECK(run_cli("heatmap cli_bit_a.csv --x D --y F --value nope --out x.svg") == 3);
  // Header-only file carries no data.
  {
    std::ofstream empty("cli_empty.csv", std::ios::binary);
    empty << "D,F,subjectivity\n";
  }
  CHECK(run_cli("heatmap cli_empty.csv --x D --y F --value subjectivity --out x.svg") ==
        3);
  std::remove("cli_bit_a.csv");
  std::remove("cli_heat.svg");
  std::remove("cli_empty.csv");
}

TEST_CASE("cli: config file mirrors flags") {
  {
    std::ofstream cfg("cli_test.cfg", std::ios::binary);
    cfg << "seed=9\n";
  }
  CHECK(run_cli("sample --kind permutation --dim 4 --config cli_test.cfg "
                "--out cli_cfg_a.json") == 0);
  CHECK(run_cli("sample --kind permutation --dim 4 --seed 9 --out cli_cfg_b.json") == 0);
  CHECK(slurp("cli_cfg_a.json") == slurp("cli_cfg_b.json"));
  std::remove("cli_test.cfg");
  std::remove("cli_cfg_a.json");
  std::remove("cli_cfg_b.json");
}

TEST_CASE("cli: verify absorbing suite passes and writes a report") {
  CHECK(run_cli("verify absorbing --samples 20 --seed 11 --out cli_report.json") == 0);
  const auto j = nlohmann::json::parse(slurp("cli_report.json"));
  CHECK(j.at("suite") == "absorbing");
  CHECK(j.at("properties").size() >= 4);
  for (const auto& p : j.at("properties")) CHECK(p.at("pass").get<bool>());
  std::remove("cli_report.json");
}
