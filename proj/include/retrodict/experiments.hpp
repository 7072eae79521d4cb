// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace retrodict {

struct ExperimentConfig {
  std::uint64_t seed = 0;
  // Random-channel budget (trit experiment, verify suites).
  int samples = 400;
  int npairs_classical = 2000;
  int npairs_quantum = 200;
  // Grid resolution per axis; 0 means the per-experiment default
  // (64 for the bit grid, 8 for the qubit cell grid).
  int grid = 0;
  // Accepted channels per qubit grid cell.
  int quota = 2;
  int diamond_restarts = 16;
  // Bit experiment: add quadrature / Monte Carlo columns next to the
  // closed forms.
  bool cross_check = false;
  std::string out = "experiment.csv";
  std::string format = "csv";  // csv | json
};

// Closed-form bit measures over a (D, F) coordinate grid.
void run_bit_figure(const ExperimentConfig& cfg);

// Grid-targeted qubit channels with normalized quantum measures per
// channel and per-cell means.
void run_qubit_figure(const ExperimentConfig& cfg);

// Random trit channels (concentration parameter swept) plus injected
// absorber / spiral / permutation populations, with classical measures
// and geometry per channel.
void run_trit_figure(const ExperimentConfig& cfg);

// Property suites: "theorems", "dpi", "absorbing". Writes a JSON report
// to report_path (or cfg.out when empty) and returns 0 iff every
// property passed, 1 otherwise.
int verify_suite(const ExperimentConfig& cfg, const std::string& suite,
                 const std::string& report_path = "");

// Bin-averaged SVG heatmap of one CSV column against two others.
void emit_heatmap(const std::string& data_csv, const std::string& xcol,
                  const std::string& ycol, const std::string& vcol,
                  const std::string& out_svg, int bins = 64);

}  // namespace retrodict
