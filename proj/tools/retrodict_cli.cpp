// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: measures for a stored channel, channel
// sampling, figure experiments, verification suites, and heatmaps.
// Exit codes: 0 success, 1 property failure, 2 usage/config error,
// 3 I/O error.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "retrodict/bit_analytic.hpp"
#include "retrodict/classical.hpp"
#include "retrodict/experiments.hpp"
#include "retrodict/io.hpp"
#include "retrodict/measures.hpp"
#include "retrodict/oracle.hpp"
#include "retrodict/quantum.hpp"
#include "retrodict/rng.hpp"
#include "retrodict/samplers.hpp"

namespace {

using namespace retrodict;

nlohmann::json estimate_json(const MeasureEstimate& e) {
  return {{"value", e.value},
          {"stderr", e.std_error},
          {"nsamples", e.nsamples},
          {"normalized", e.normalized},
          {"rejected", e.rejected}};
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw IoError("cannot write output file: " + out);
  f << text << "\n";
}

int run_measure(const std::string& channel_path, const ExperimentConfig& cfg, bool raw) {
  const LoadedChannel loaded = load_channel(channel_path);
  nlohmann::json j;
  j["input"] = channel_path;
  j["seed"] = cfg.seed;
  if (std::holds_alternative<StochasticMatrix>(loaded)) {
    const auto& map = std::get<StochasticMatrix>(loaded);
    IntegrationConfig mc = IntegrationConfig::classical_defaults(cfg.seed);
    mc.npairs = cfg.npairs_classical;
    mc.normalize = !raw;
    j["kind"] = "classical";
    j["dim"] = map.dim();
    j["cad"] = abs_determinant(map);
    j["cfd"] = cfd(map);
    j["class"] = classify(map).name();
    if (map.dim() == 3) {
      const auto s = skew(map);
      if (s) {
        j["skew"] = *s;
      } else {
        j["skew"] = nullptr;
      }
    }
    j["subjectivity"] = estimate_json(classical_subjectivity(map, mc));
    j["div_change"] = estimate_json(classical_avg_div_change(map, mc));
  } else {
    const auto chan = dilation_to_kraus(std::get<Dilation>(loaded));
    IntegrationConfig mc = IntegrationConfig::quantum_defaults(cfg.seed);
    mc.npairs = cfg.npairs_quantum;
    mc.diamond_restarts = cfg.diamond_restarts;
    mc.normalize = !raw;
    j["kind"] = "quantum";
    j["dim"] = chan.dim();
    j["qad"] = qad(chan);
    j["qfd"] = qfd(chan);
    j["subjectivity"] = estimate_json(quantum_subjectivity(chan, mc));
    j["div_change"] = estimate_json(quantum_avg_div_change(chan, mc));
  }
  write_text(cfg.out, j.dump(1));
  return 0;
}

struct SampleOptions {
  std::string kind = "trit";
  double restrict_mass = 0.0;  // trit: mass forced onto the last state
  int cell_i = 0, cell_j = 0, grid = 8;
  int dim = 3, absorbing_dim = 2;
  double p = 0.3, q = 0.3;
  std::uint64_t index = 0;
};

int run_sample(const SampleOptions& opt, const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, opt.index);
  std::string text;
  if (opt.kind == "trit") {
    text = channel_to_json(sample_trit_channel_restricted(opt.restrict_mass, rng));
  } else if (opt.kind == "qubit") {
    if (opt.cell_i < 0 || opt.cell_i >= opt.grid || opt.cell_j < 0 ||
        opt.cell_j >= opt.grid) {
      throw InvalidValue("sample qubit: cell indices outside the grid");
    }
    GridCell cell{static_cast<double>(opt.cell_i) / opt.grid,
                  static_cast<double>(opt.cell_i + 1) / opt.grid,
                  static_cast<double>(opt.cell_j) / opt.grid,
                  static_cast<double>(opt.cell_j + 1) / opt.grid, 1};
    SampledQubitChannel s = sample_qubit_gad_grid(cell, rng);
    s.cell_i = opt.cell_i;
    s.cell_j = opt.cell_j;
    text = channel_to_json(s);
  } else if (opt.kind == "absorbing") {
    text = channel_to_json(random_absorbing(opt.dim, opt.absorbing_dim, rng));
  } else if (opt.kind == "spiral") {
    text = channel_to_json(construct_spiral(opt.p, opt.q, random_permutation(3, rng)));
  } else if (opt.kind == "permutation") {
    text = channel_to_json(StochasticMatrix::permutation(random_permutation(opt.dim, rng)));
  } else {
    throw InvalidValue("sample: unknown kind " + opt.kind);
  }
  write_text(cfg.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian retrodiction maps and irreversibility measures"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  app.add_option("--seed", cfg.seed, "Random seed shared by all estimators");
  app.add_option("--samples", cfg.samples, "Channel budget for experiments/suites");
  cfg.out.clear();  // empty = per-command default (stdout or a named file)
  app.add_option("--out", cfg.out, "Output path (some commands default to stdout)");
  app.add_option("--format", cfg.format, "Table output format: csv or json");
  app.set_config("--config", "", "Flat key=value config file mirroring the flags");
  app.add_option("--npairs", cfg.npairs_classical,
                 "Prior pairs per classical Monte Carlo estimate");
  app.add_option("--npairs-quantum", cfg.npairs_quantum,
                 "Prior pairs per quantum Monte Carlo estimate");
  app.add_option("--diamond-restarts", cfg.diamond_restarts,
                 "Ascent restarts per diamond-norm evaluation");
  std::string cache_path = "retrodict_cache.json";
  app.add_option("--reference-cache", cache_path,
                 "Erasure-reference cache file; empty disables persistence");

  // measure
  auto* measure = app.add_subcommand("measure", "Measures for a stored channel file");
  std::string channel_path;
  bool raw = false;
  measure->add_option("channel", channel_path, "Channel JSON file")->required();
  measure->add_flag("--raw", raw, "Skip erasure normalization");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw one channel and print/store it");
  SampleOptions sopt;
  sample->add_option("--kind", sopt.kind, "trit | qubit | absorbing | spiral | permutation");
  sample->add_option("--restrict", sopt.restrict_mass,
                     "Trit sampler: mass forced onto the last state");
  sample->add_option("--cell-i", sopt.cell_i, "Qubit grid cell row");
  sample->add_option("--cell-j", sopt.cell_j, "Qubit grid cell column");
  sample->add_option("--grid", sopt.grid, "Qubit grid resolution");
  sample->add_option("--dim", sopt.dim, "Dimension for absorbing/permutation kinds");
  sample->add_option("--absorbing-dim", sopt.absorbing_dim, "Absorbing subset size");
  sample->add_option("--p", sopt.p, "Spiral leak probability");
  sample->add_option("--q", sopt.q, "Spiral stay probability");
  sample->add_option("--index", sopt.index, "Stream index (varies the draw)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Reproduce a figure as a data file");
  std::string which;
  experiment->add_option("name", which, "bit | qubit | trit")->required();
  experiment->add_option("--grid", cfg.grid, "Grid resolution (0 = per-experiment default)");
  experiment->add_option("--quota", cfg.quota, "Accepted channels per qubit grid cell");
  experiment->add_flag("--cross-check", cfg.cross_check,
                       "Bit figure: add quadrature/Monte Carlo columns");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a property suite, write a JSON report");
  std::string suite;
  verify->add_option("suite", suite, "dpi | theorems | absorbing")->required();

  // heatmap
  auto* heatmap = app.add_subcommand("heatmap", "Bin-averaged SVG from a CSV column");
  std::string data_csv, xcol, ycol, vcol;
  int bins = 64;
  heatmap->add_option("data", data_csv, "Input CSV file")->required();
  heatmap->add_option("--x", xcol, "X coordinate column")->required();
  heatmap->add_option("--y", ycol, "Y coordinate column")->required();
  heatmap->add_option("--value", vcol, "Averaged value column")->required();
  heatmap->add_option("--bins", bins, "Bins per axis");

  // Global flags may appear after the subcommand name.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    set_reference_cache_path(cache_path);
    if (measure->parsed()) return run_measure(channel_path, cfg, raw);
    if (sample->parsed()) return run_sample(sopt, cfg);
    if (experiment->parsed()) {
      if (cfg.out.empty()) {
        cfg.out = cfg.format == "json" ? "experiment.json" : "experiment.csv";
      }
      if (which == "bit") {
        run_bit_figure(cfg);
      } else if (which == "qubit") {
        run_qubit_figure(cfg);
      } else if (which == "trit") {
        run_trit_figure(cfg);
      } else {
        std::cerr << "unknown experiment: " << which << "\n";
        return 2;
      }
      return 0;
    }
    if (verify->parsed()) {
      const std::string report = cfg.out.empty() ? "report.json" : cfg.out;
      const int rc = verify_suite(cfg, suite, report);
      std::cerr << "report written to " << report << "\n";
      return rc;
    }
    if (heatmap->parsed()) {
      const std::string out = cfg.out.empty() ? "heatmap.svg" : cfg.out;
      emit_heatmap(data_csv, xcol, ycol, vcol, out, bins);
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const NoData& e) {
    std::cerr << "no data: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
