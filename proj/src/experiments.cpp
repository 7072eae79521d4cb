// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "retrodict/bit_analytic.hpp"
#include "retrodict/classical.hpp"
#include "retrodict/io.hpp"
#include "retrodict/measures.hpp"
#include "retrodict/oracle.hpp"
#include "retrodict/quantum.hpp"
#include "retrodict/rng.hpp"
#include "retrodict/samplers.hpp"

namespace retrodict {

namespace {

// Row-oriented writer over both output formats. CSV delegates to
// CsvWriter; JSON produces {"columns": [...], "rows": [[...], ...]}
// with the same 12-significant-digit number rendering, so the two
// formats carry identical values.
class TableWriter {
 public:
  TableWriter(const std::string& path, const std::string& format,
              const std::vector<std::string>& header)
      : json_(format == "json") {
    if (format != "csv" && format != "json") {
      throw InvalidValue("output format must be csv or json");
    }
    if (json_) {
      out_.open(path, std::ios::binary);
      if (!out_) throw IoError("cannot write output file: " + path);
      out_ << "{\n \"columns\": [";
      for (std::size_t i = 0; i < header.size(); ++i) {
        out_ << (i ? ", " : "") << '"' << header[i] << '"';
      }
      out_ << "],\n \"rows\": [";
    } else {
      csv_.emplace(path, header);
    }
  }

  void field(double v) {
    if (json_) {
      buf_.push_back(std::isfinite(v) ? format_sig12(v) : "null");
    } else {
      csv_->field(v);
    }
  }

  void field(long long v) {
    if (json_) {
      buf_.push_back(std::to_string(v));
    } else {
      csv_->field(v);
    }
  }

  void field(const std::string& s) {
    if (json_) {
      buf_.push_back('"' + s + '"');
    } else {
      csv_->field(s);
    }
  }

  // Value absent for this row (e.g. undefined skew).
  void field_missing() {
    if (json_) {
      buf_.push_back("null");
    } else {
      csv_->field(std::string());
    }
  }

  void end_row() {
    if (json_) {
      out_ << (first_row_ ? "\n  [" : ",\n  [");
      first_row_ = false;
      for (std::size_t i = 0; i < buf_.size(); ++i) out_ << (i ? ", " : "") << buf_[i];
      out_ << "]";
      buf_.clear();
    } else {
      csv_->end_row();
    }
  }

  void finish() {
    if (json_) out_ << "\n ]\n}\n";
  }

 private:
  bool json_;
  std::optional<CsvWriter> csv_;
  std::ofstream out_;
  std::vector<std::string> buf_;
  bool first_row_ = true;
};

// A bit channel realizing the coordinates (D, F): determinant D and
// fixed point (1 + F) / 2.
StochasticMatrix bit_channel_at(double D, double F) {
  const double p = (1.0 + F) / 2.0;
  const double b = p * (1.0 - D);
  const double a = D + b;
  Eigen::MatrixXd m(2, 2);
  m << a, b, 1.0 - a, 1.0 - b;
  return StochasticMatrix(std::move(m));
}

StochasticMatrix random_trit_channel(RngStream& rng) {
  Eigen::MatrixXd m(3, 3);
  for (int j = 0; j < 3; ++j) m.col(j) = sample_simplex(3, rng).vec();
  return StochasticMatrix(std::move(m));
}

KrausChannel random_qubit_channel(RngStream& rng) {
  CMat beta = CMat::Zero(2, 2);
  beta(0, 0) = 1.0;
  return dilation_to_kraus(Dilation(2, 2, haar_unitary(4, rng), DensityOperator(beta)));
}

struct Property {
  std::string name;
  bool pass = true;
  double statistic = 0.0;
  double threshold = 0.0;
};

struct Report {
  std::string suite;
  const ExperimentConfig* cfg = nullptr;
  std::vector<Property> properties;
  std::vector<std::string> violations;

  void add(const std::string& name, bool pass, double statistic, double threshold) {
    properties.push_back({name, pass, statistic, threshold});
  }

  int write(const std::string& path) const {
    nlohmann::json j;
    j["suite"] = suite;
    j["seed"] = cfg->seed;
    j["budgets"] = {{"samples", cfg->samples},
                    {"npairs_classical", cfg->npairs_classical},
                    {"npairs_quantum", cfg->npairs_quantum},
                    {"diamond_restarts", cfg->diamond_restarts}};
    j["properties"] = nlohmann::json::array();
    bool all_pass = true;
    for (const auto& p : properties) {
      j["properties"].push_back({{"name", p.name},
                                 {"pass", p.pass},
                                 {"statistic", p.statistic},
                                 {"threshold", p.threshold}});
      all_pass = all_pass && p.pass;
    }
    j["violations"] = violations;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write report file: " + path);
    out << j.dump(1) << "\n";
    return all_pass ? 0 : 1;
  }
};

IntegrationConfig classical_mc(const ExperimentConfig& cfg, bool normalize) {
  IntegrationConfig c = IntegrationConfig::classical_defaults(cfg.seed);
  c.npairs = cfg.npairs_classical;
  c.normalize = normalize;
  return c;
}

IntegrationConfig quantum_mc(const ExperimentConfig& cfg, bool normalize) {
  IntegrationConfig c = IntegrationConfig::quantum_defaults(cfg.seed);
  c.npairs = cfg.npairs_quantum;
  c.diamond_restarts = cfg.diamond_restarts;
  c.normalize = normalize;
  return c;
}

double combined_band(const MeasureEstimate& a, const MeasureEstimate& b) {
  return 3.0 * std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

}  // namespace

void run_bit_figure(const ExperimentConfig& cfg) {
  const int n = cfg.grid > 0 ? cfg.grid : 64;
  std::vector<std::string> header = {"index",      "D",
                                     "F",          "subjectivity",
                                     "subjectivity_stderr", "div_change",
                                     "div_change_stderr",   "class",
                                     "seed"};
  if (cfg.cross_check) {
    header.insert(header.end(),
                  {"subjectivity_quad", "subjectivity_mc", "subjectivity_mc_stderr",
                   "div_change_mc", "div_change_mc_stderr"});
  }
  TableWriter w(cfg.out, cfg.format, header);
  long long index = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double D = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      const double F = n == 1 ? 0.0 : static_cast<double>(j) / (n - 1);
      const StochasticMatrix rep = bit_channel_at(D, F);
      w.field(index);
      w.field(D);
      w.field(F);
      w.field(bit_subjectivity_analytic({D, F}));
      w.field(0.0);
      w.field(bit_divchange_analytic({D, F}));
      w.field(0.0);
      w.field(classify(rep).name());
      w.field(static_cast<long long>(cfg.seed));
      if (cfg.cross_check) {
        w.field(quadrature_bit_subjectivity_squared(rep, QuadratureGrid{}));
        IntegrationConfig mc = classical_mc(cfg, false);
        const auto subj = classical_subjectivity(rep, mc);
        const auto div = classical_avg_div_change(rep, mc);
        w.field(subj.value);
        w.field(subj.std_error);
        w.field(div.value);
        w.field(div.std_error);
      }
      w.end_row();
      ++index;
    }
  }
  w.finish();
}

void run_qubit_figure(const ExperimentConfig& cfg) {
  const int g = cfg.grid > 0 ? cfg.grid : 8;
  const int quota = std::max(1, cfg.quota);
  TableWriter w(cfg.out, cfg.format,
                {"row_kind", "cell_i", "cell_j", "index", "qad", "qfd", "subjectivity",
                 "subjectivity_stderr", "div_change", "div_change_stderr", "sandwiched",
                 "retries", "seed"});
  const IntegrationConfig mc = quantum_mc(cfg, true);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      GridCell cell{static_cast<double>(i) / g, static_cast<double>(i + 1) / g,
                    static_cast<double>(j) / g, static_cast<double>(j + 1) / g, quota};
      double mean_u = 0, mean_f = 0, mean_s = 0, mean_d = 0, var_s = 0, var_d = 0;
      for (int k = 0; k < quota; ++k) {
        const long long index = (static_cast<long long>(i) * g + j) * quota + k;
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(index));
        const SampledQubitChannel s = sample_qubit_gad_grid(cell, rng);
        const KrausChannel chan = dilation_to_kraus(s.dilation);
        const auto subj = quantum_subjectivity(chan, mc);
        const auto div = quantum_avg_div_change(chan, mc);
        w.field(std::string("sample"));
        w.field(static_cast<long long>(i));
        w.field(static_cast<long long>(j));
        w.field(index);
        w.field(s.det_coord);
        w.field(s.fix_coord);
        w.field(subj.value);
        w.field(subj.std_error);
        w.field(div.value);
        w.field(div.std_error);
        w.field(static_cast<long long>(s.sandwiched ? 1 : 0));
        w.field(static_cast<long long>(s.retries));
        w.field(static_cast<long long>(cfg.seed));
        w.end_row();
        mean_u += s.det_coord;
        mean_f += s.fix_coord;
        mean_s += subj.value;
        mean_d += div.value;
        var_s += subj.std_error * subj.std_error;
        var_d += div.std_error * div.std_error;
      }
      w.field(std::string("cell_mean"));
      w.field(static_cast<long long>(i));
      w.field(static_cast<long long>(j));
      w.field(static_cast<long long>(-1));
      w.field(mean_u / quota);
      w.field(mean_f / quota);
      w.field(mean_s / quota);
      w.field(std::sqrt(var_s) / quota);
      w.field(mean_d / quota);
      w.field(std::sqrt(var_d) / quota);
      w.field(static_cast<long long>(0));
      w.field(static_cast<long long>(0));
      w.field(static_cast<long long>(cfg.seed));
      w.end_row();
    }
  }
  w.finish();
}

void run_trit_figure(const ExperimentConfig& cfg) {
  TableWriter w(cfg.out, cfg.format,
                {"index", "source", "class", "sweep_param", "cad", "cfd", "skew",
                 "subjectivity", "subjectivity_stderr", "div_change",
                 "div_change_stderr", "seed"});
  const IntegrationConfig mc = classical_mc(cfg, true);
  long long index = 0;
  auto emit = [&](const StochasticMatrix& m, const std::string& source, double param) {
    const auto subj = classical_subjectivity(m, mc);
    const auto div = classical_avg_div_change(m, mc);
    w.field(index);
    w.field(source);
    w.field(classify(m).name());
    w.field(param);
    w.field(abs_determinant(m));
    w.field(cfd(m));
    const auto s = skew(m);
    if (s) {
      w.field(*s);
    } else {
      w.field_missing();
    }
    w.field(subj.value);
    w.field(subj.std_error);
    w.field(div.value);
    w.field(div.std_error);
    w.field(static_cast<long long>(cfg.seed));
    w.end_row();
    ++index;
  };

  // Random sweep: the restriction parameter runs over the samples.
  const int nrandom = std::max(1, cfg.samples);
  for (int k = 0; k < nrandom; ++k) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(index));
    const double D = 0.95 * k / std::max(1, nrandom - 1);
    emit(sample_trit_channel_restricted(D, rng), "random", D);
  }

  // Injected populations: the special families live on measure-zero
  // sets, so random sampling never produces the ridges on its own.
  const int ninject = std::max(4, cfg.samples / 10);
  for (int k = 0; k < ninject; ++k) {
    RngStream rng(cfg.seed ^ 0xab50bULL, static_cast<std::uint64_t>(index));
    emit(random_absorbing(3, 1 + static_cast<int>(rng.uniform_index(2)), rng),
         "absorbing", -1.0);
  }
  for (int k = 0; k < ninject; ++k) {
    RngStream rng(cfg.seed ^ 0xa17eULL, static_cast<std::uint64_t>(index));
    // Alternating absorber: 2-cycle on the absorbing pair.
    double r1 = rng.uniform(), r2 = rng.uniform();
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    if (r1 + r2 < 1e-6) r1 = 0.5;
    Eigen::MatrixXd r(2, 1), q(1, 1);
    r << r1, r2;
    q << 1.0 - r1 - r2;
    emit(construct_absorbing(3, 2, r, q, random_permutation(3, rng), {1, 0}),
         "alternating", -1.0);
  }
  for (int k = 0; k < ninject; ++k) {
    RngStream rng(cfg.seed ^ 0x5b11aULL, static_cast<std::uint64_t>(index));
    // Half of the spirals have p = q, where the image skew peaks.
    const double p = (k % 2 == 0) ? rng.uniform(0.05, 0.5) : rng.uniform(0.05, 1.0);
    const double q = (k % 2 == 0) ? p : rng.uniform(0.0, 1.0 - p);
    emit(construct_spiral(p, q, random_permutation(3, rng)), "spiral", p);
  }
  for (int k = 0; k < ninject; ++k) {
    RngStream rng(cfg.seed ^ 0x9e87ULL, static_cast<std::uint64_t>(index));
    emit(StochasticMatrix::permutation(random_permutation(3, rng)), "permutation", -1.0);
  }
  w.finish();
}

namespace {

// ---- verify: theorems ---------------------------------------------------

void verify_theorems(const ExperimentConfig& cfg, Report& rep) {
  const IntegrationConfig cmc = classical_mc(cfg, false);
  const IntegrationConfig qmc = quantum_mc(cfg, false);
  const int nc = std::max(1, cfg.samples);
  const int nq = std::min(nc, 50);

  // Bijection after a channel leaves subjectivity unchanged.
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < nc; ++t) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(t));
      const StochasticMatrix phi = random_trit_channel(rng);
      const StochasticMatrix perm = StochasticMatrix::permutation(random_permutation(3, rng));
      const auto base = classical_subjectivity(phi, cmc);
      const auto post = classical_subjectivity(compose(perm, phi), cmc);
      const double band = std::max(combined_band(base, post), 1e-12);
      worst = std::max(worst, std::abs(post.value - base.value) / band);
      if (std::abs(post.value - base.value) > band) {
        pass = false;
        rep.violations.push_back("bijection_post_composition: instance " +
                                 std::to_string(t));
      }
    }
    rep.add("bijection_post_composition_classical", pass, worst, 1.0);
  }

  // Channel after an erasure is still an erasure: same subjectivity.
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < nc; ++t) {
      RngStream rng(cfg.seed ^ 0xe5ULL, static_cast<std::uint64_t>(t));
      const StochasticMatrix phi = random_trit_channel(rng);
      const StochasticMatrix era = StochasticMatrix::erasure(sample_simplex(3, rng));
      const auto base = classical_subjectivity(era, cmc);
      const auto pre = classical_subjectivity(compose(phi, era), cmc);
      const double band = std::max(combined_band(base, pre), 1e-12);
      worst = std::max(worst, std::abs(pre.value - base.value) / band);
      if (std::abs(pre.value - base.value) > band) {
        pass = false;
        rep.violations.push_back("erasure_pre_composition: instance " + std::to_string(t));
      }
    }
    rep.add("erasure_pre_composition_classical", pass, worst, 1.0);
  }

  // Unitary after a quantum channel leaves subjectivity unchanged.
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < nq; ++t) {
      RngStream rng(cfg.seed ^ 0x0fULL, static_cast<std::uint64_t>(t));
      const KrausChannel f = random_qubit_channel(rng);
      const KrausChannel u = KrausChannel::unitary(haar_unitary(2, rng));
      const auto base = quantum_subjectivity(f, qmc);
      const auto post = quantum_subjectivity(compose_channels(u, f), qmc);
      const double band = std::max(combined_band(base, post), 1e-6);
      worst = std::max(worst, std::abs(post.value - base.value) / band);
      if (std::abs(post.value - base.value) > band) {
        pass = false;
        rep.violations.push_back("unitary_post_composition: instance " +
                                 std::to_string(t));
      }
    }
    rep.add("unitary_post_composition_quantum", pass, worst, 1.0);
  }

  // Quantum channel after an erasure is still an erasure.
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < nq; ++t) {
      RngStream rng(cfg.seed ^ 0xf0ULL, static_cast<std::uint64_t>(t));
      const KrausChannel f = random_qubit_channel(rng);
      const KrausChannel w = KrausChannel::erasure(sample_density_hs(2, rng));
      const auto base = quantum_subjectivity(w, qmc);
      const auto pre = quantum_subjectivity(compose_channels(f, w), qmc);
      const double band = std::max(combined_band(base, pre), 1e-6);
      worst = std::max(worst, std::abs(pre.value - base.value) / band);
      if (std::abs(pre.value - base.value) > band) {
        pass = false;
        rep.violations.push_back("erasure_pre_composition_quantum: instance " +
                                 std::to_string(t));
      }
    }
    rep.add("erasure_pre_composition_quantum", pass, worst, 1.0);
  }
}

// ---- verify: dpi ---------------------------------------------------------

constexpr int kMaxResample = 100000;

// Paired estimate of subjectivity growth under post-composition: for
// each prior pair, the disagreement of the composed channel minus the
// base channel's, sharing the random pairs (common random numbers).
struct PairedDiff {
  double mean = 0.0;
  double std_error = 0.0;
  long long decreases = 0;
};

PairedDiff classical_dpi_pair(const StochasticMatrix& phi, const StochasticMatrix& psi,
                              const IntegrationConfig& mc) {
  const StochasticMatrix comp = compose(psi, phi);
  double sum = 0, sumsq = 0;
  long long dec = 0;
  for (int i = 0; i < mc.npairs; ++i) {
    RngStream rng(mc.seed, static_cast<std::uint64_t>(i));
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxResample) {
        throw SingularPushforward("classical_dpi_pair: no interior prior survives");
      }
      const ProbVector g1 = sample_simplex(3, rng);
      const ProbVector g2 = sample_simplex(3, rng);
      const Eigen::VectorXd p1 = phi.mat() * g1.vec();
      const Eigen::VectorXd p2 = phi.mat() * g2.vec();
      const Eigen::VectorXd c1 = comp.mat() * g1.vec();
      const Eigen::VectorXd c2 = comp.mat() * g2.vec();
      const double lo = std::min(std::min(p1.minCoeff(), p2.minCoeff()),
                                 std::min(c1.minCoeff(), c2.minCoeff()));
      if (lo <= mc.rejection_eps) continue;
      const double base = spectral_norm_distance(bayes_inverse(phi, g1, mc.rejection_eps),
                                                 bayes_inverse(phi, g2, mc.rejection_eps));
      const double post = spectral_norm_distance(bayes_inverse(comp, g1, mc.rejection_eps),
                                                 bayes_inverse(comp, g2, mc.rejection_eps));
      const double diff = post - base;
      sum += diff;
      sumsq += diff * diff;
      if (diff < -1e-12) ++dec;
      break;
    }
  }
  PairedDiff out;
  out.mean = sum / mc.npairs;
  const double var = std::max(0.0, sumsq / mc.npairs - out.mean * out.mean);
  out.std_error = std::sqrt(var / mc.npairs);
  out.decreases = dec;
  return out;
}

PairedDiff quantum_dpi_pair(const KrausChannel& f, const KrausChannel& g,
                            const IntegrationConfig& mc) {
  const KrausChannel comp = compose_channels(g, f);
  double sum = 0, sumsq = 0;
  long long dec = 0;
  for (int i = 0; i < mc.npairs; ++i) {
    RngStream rng(mc.seed, static_cast<std::uint64_t>(i));
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxResample) {
        throw SingularPushforward("quantum_dpi_pair: no interior prior survives");
      }
      const DensityOperator r1 = sample_density_hs(2, rng);
      const DensityOperator r2 = sample_density_hs(2, rng);
      double base, post;
      try {
        base = diamond_norm_distance(petz_inverse(f, r1, mc.rejection_eps),
                                     petz_inverse(f, r2, mc.rejection_eps), mc);
        post = diamond_norm_distance(petz_inverse(comp, r1, mc.rejection_eps),
                                     petz_inverse(comp, r2, mc.rejection_eps), mc);
      } catch (const SingularPushforward&) {
        continue;
      }
      const double diff = post - base;
      sum += diff;
      sumsq += diff * diff;
      if (diff < -1e-9) ++dec;
      break;
    }
  }
  PairedDiff out;
  out.mean = sum / mc.npairs;
  const double var = std::max(0.0, sumsq / mc.npairs - out.mean * out.mean);
  out.std_error = std::sqrt(var / mc.npairs);
  out.decreases = dec;
  return out;
}

void verify_dpi(const ExperimentConfig& cfg, Report& rep) {
  const IntegrationConfig cmc = classical_mc(cfg, false);
  const IntegrationConfig qmc = quantum_mc(cfg, false);
  const int nc = std::max(1, cfg.samples);
  const int nq = std::max(1, cfg.samples / 4);

  long long elementwise_decreases = 0;
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < nc; ++t) {
      RngStream rng(cfg.seed ^ 0xd81ULL, static_cast<std::uint64_t>(t));
      const StochasticMatrix phi = random_trit_channel(rng);
      const StochasticMatrix psi = random_trit_channel(rng);
      const PairedDiff d = classical_dpi_pair(phi, psi, cmc);
      elementwise_decreases += d.decreases;
      const double band = std::max(3.0 * d.std_error, 1e-12);
      worst = std::min(worst, d.mean / band);
      if (d.mean < -band) {
        pass = false;
        rep.violations.push_back("classical_no_decrease: instance " + std::to_string(t) +
                                 " mean " + format_sig12(d.mean));
      }
    }
    rep.add("classical_no_subjectivity_decrease", pass, worst, -1.0);
  }
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < nq; ++t) {
      RngStream rng(cfg.seed ^ 0xd82ULL, static_cast<std::uint64_t>(t));
      const KrausChannel f = random_qubit_channel(rng);
      const KrausChannel g = random_qubit_channel(rng);
      const PairedDiff d = quantum_dpi_pair(f, g, qmc);
      elementwise_decreases += d.decreases;
      const double band = std::max(3.0 * d.std_error, 1e-9);
      worst = std::min(worst, d.mean / band);
      if (d.mean < -band) {
        pass = false;
        rep.violations.push_back("quantum_no_decrease: instance " + std::to_string(t) +
                                 " mean " + format_sig12(d.mean));
      }
    }
    rep.add("quantum_no_subjectivity_decrease", pass, worst, -1.0);
  }
  // Monotonicity holds on average, not pointwise: the suite must catch
  // at least one prior pair whose disagreement shrinks.
  rep.add("elementwise_decrease_exhibited", elementwise_decreases >= 1,
          static_cast<double>(elementwise_decreases), 1.0);
}

// ---- verify: absorbing ---------------------------------------------------

void verify_absorbing(const ExperimentConfig& cfg, Report& rep) {
  const int n = std::max(1, cfg.samples);

  // Displacement bounds for random standard-form absorbers.
  {
    bool pass = true;
    double worst = 0.0;
    for (int t = 0; t < n; ++t) {
      RngStream rng(cfg.seed ^ 0xab5ULL, static_cast<std::uint64_t>(t));
      const int d = 3 + static_cast<int>(rng.uniform_index(3));
      const int nn = 1 + static_cast<int>(rng.uniform_index(d - 1));
      const double v = cfd(random_absorbing(d, nn, rng));
      const double lower = std::sqrt((d - nn) / ((d - 1.0) * nn));
      const double upper = std::sqrt((d - nn) * (d + 1.0 - nn) / ((d - 1.0) * d));
      const double violation = std::max(lower - v, v - upper);
      worst = std::max(worst, violation);
      if (violation > 1e-9) {
        pass = false;
        rep.violations.push_back("cfd_bounds: instance " + std::to_string(t));
      }
    }
    rep.add("cfd_bounds", pass, worst, 1e-9);
  }

  // Alternating absorbers sit exactly halfway out; single-state
  // absorbers sit at the simplex corner.
  {
    bool pass_alt = true, pass_one = true;
    double worst_alt = 0.0, worst_one = 0.0;
    for (int t = 0; t < n; ++t) {
      RngStream rng(cfg.seed ^ 0xa17ULL, static_cast<std::uint64_t>(t));
      double r1 = rng.uniform(), r2 = rng.uniform();
      if (r1 + r2 > 1.0) {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
      }
      if (r1 + r2 < 1e-6) r1 = 0.5;
      Eigen::MatrixXd r(2, 1), q(1, 1);
      r << r1, r2;
      q << 1.0 - r1 - r2;
      const double v = cfd(construct_absorbing(3, 2, r, q, random_permutation(3, rng),
                                               {1, 0}));
      worst_alt = std::max(worst_alt, std::abs(v - 0.5));
      if (std::abs(v - 0.5) > 1e-9) pass_alt = false;

      const int d = 3 + static_cast<int>(rng.uniform_index(3));
      const double v1 = cfd(random_absorbing(d, 1, rng));
      worst_one = std::max(worst_one, std::abs(v1 - 1.0));
      if (std::abs(v1 - 1.0) > 1e-9) pass_one = false;
    }
    rep.add("alternating_cfd_half", pass_alt, worst_alt, 1e-9);
    rep.add("single_state_cfd_one", pass_one, worst_one, 1e-9);
  }

  // Standard-form absorbers: inputs inside the absorbing set never
  // retrodict to transient states, so the inverse carries the mirrored
  // zero block. With a diagonal transient block the inverse is itself
  // absorbing.
  {
    bool pass_block = true, pass_diag = true;
    double worst_block = 0.0;
    for (int t = 0; t < n; ++t) {
      RngStream rng(cfg.seed ^ 0xb10cULL, static_cast<std::uint64_t>(t));
      const int d = 3 + static_cast<int>(rng.uniform_index(3));
      const int nn = 1 + static_cast<int>(rng.uniform_index(d - 1));
      std::vector<int> id(d), inner(nn);
      for (int i = 0; i < d; ++i) id[i] = i;
      for (int i = 0; i < nn; ++i) inner[i] = i;

      // Diagonal transient block; columns complete through R.
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d - nn, d - nn);
      Eigen::MatrixXd r(nn, d - nn);
      for (int j = 0; j < d - nn; ++j) {
        q(j, j) = rng.uniform(0.0, 0.9);
        Eigen::VectorXd col = Eigen::VectorXd::Zero(nn);
        for (int i = 0; i < nn; ++i) col(i) = -std::log(std::max(rng.uniform(), 1e-300));
        r.col(j) = (1.0 - q(j, j)) * col / col.sum();
      }
      const StochasticMatrix ups = construct_absorbing(d, nn, r, q, id, inner);

      ProbVector prior = sample_simplex(d, rng);
      while (prior.min_entry() < 1e-4) prior = sample_simplex(d, rng);
      const StochasticMatrix inv = bayes_inverse(ups, prior);
      for (int a = 0; a < nn; ++a) {
        for (int b = nn; b < d; ++b) {
          worst_block = std::max(worst_block, std::abs(inv(a, b)));
        }
      }
      if (classify(inv).tag != ChannelTag::Absorbing) {
        pass_diag = false;
        rep.violations.push_back("diagonal_q_inverse_not_absorbing: instance " +
                                 std::to_string(t));
      }
    }
    if (worst_block > 1e-12) pass_block = false;
    rep.add("inverse_zero_block", pass_block, worst_block, 1e-12);
    rep.add("diagonal_q_absorbing_inverse", pass_diag, 0.0, 0.0);
  }
}

}  // namespace

int verify_suite(const ExperimentConfig& cfg, const std::string& suite,
                 const std::string& report_path) {
  Report rep;
  rep.suite = suite;
  rep.cfg = &cfg;
  if (suite == "theorems") {
    verify_theorems(cfg, rep);
  } else if (suite == "dpi") {
    verify_dpi(cfg, rep);
  } else if (suite == "absorbing") {
    verify_absorbing(cfg, rep);
  } else {
    throw InvalidValue("unknown verification suite: " + suite);
  }
  return rep.write(report_path.empty() ? cfg.out : report_path);
}

namespace {

// Five-stop linear color scale (dark violet -> yellow).
std::string color_for(double t) {
  static const int stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0);
  const double x = t * 4.0;
  const int k = std::min(3, static_cast<int>(x));
  const double f = x - k;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
  return buf;
}

}  // namespace

void emit_heatmap(const std::string& data_csv, const std::string& xcol,
                  const std::string& ycol, const std::string& vcol,
                  const std::string& out_svg, int bins) {
  if (bins < 1) throw InvalidValue("emit_heatmap: bins must be positive");
  const CsvTable table = read_csv(data_csv);
  const int xi = table.column(xcol);
  const int yi = table.column(ycol);
  const int vi = table.column(vcol);
  if (xi < 0 || yi < 0 || vi < 0) {
    throw IoError("emit_heatmap: missing column in " + data_csv);
  }

  std::vector<std::array<double, 3>> pts;
  for (const auto& row : table.rows) {
    const int needed = std::max(xi, std::max(yi, vi));
    if (static_cast<int>(row.size()) <= needed) continue;
    char* end = nullptr;
    const double x = std::strtod(row[xi].c_str(), &end);
    if (end == row[xi].c_str()) continue;
    const double y = std::strtod(row[yi].c_str(), &end);
    if (end == row[yi].c_str()) continue;
    const double v = std::strtod(row[vi].c_str(), &end);
    if (end == row[vi].c_str()) continue;
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(v)) continue;
    pts.push_back({x, y, v});
  }
  if (pts.empty()) throw NoData("emit_heatmap: no usable rows in " + data_csv);

  double xmin = pts[0][0], xmax = pts[0][0], ymin = pts[0][1], ymax = pts[0][1];
  for (const auto& p : pts) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  if (xmax - xmin < 1e-300) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-300) ymax = ymin + 1.0;

  std::vector<double> sum(static_cast<std::size_t>(bins) * bins, 0.0);
  std::vector<long long> count(static_cast<std::size_t>(bins) * bins, 0);
  for (const auto& p : pts) {
    const int bx = std::min(bins - 1, static_cast<int>((p[0] - xmin) / (xmax - xmin) * bins));
    const int by = std::min(bins - 1, static_cast<int>((p[1] - ymin) / (ymax - ymin) * bins));
    sum[static_cast<std::size_t>(by) * bins + bx] += p[2];
    ++count[static_cast<std::size_t>(by) * bins + bx];
  }

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sum.size(); ++i) {
    if (count[i] > 0) {
      const double m = sum[i] / count[i];
      vmin = std::min(vmin, m);
      vmax = std::max(vmax, m);
    }
  }
  if (vmax - vmin < 1e-300) vmax = vmin + 1.0;

  const int plot = 512, left = 70, top = 20, bottom = 50, right = 100;
  std::ofstream out(out_svg, std::ios::binary);
  if (!out) throw IoError("cannot write heatmap file: " + out_svg);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + plot + right
      << "\" height=\"" << top + plot + bottom << "\">\n";
  // Bin means embedded verbatim so two runs over the same data are
  // comparable without rendering.
  out << "<desc id=\"bin-values\">\nbx,by,mean\n";
  for (int by = 0; by < bins; ++by) {
    for (int bx = 0; bx < bins; ++bx) {
      const std::size_t i = static_cast<std::size_t>(by) * bins + bx;
      if (count[i] > 0) {
        out << bx << "," << by << "," << format_sig12(sum[i] / count[i]) << "\n";
      }
    }
  }
  out << "</desc>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot
      << "\" height=\"" << plot << "\" fill=\"#f4f4f4\"/>\n";
  const double cw = static_cast<double>(plot) / bins;
  for (int by = 0; by < bins; ++by) {
    for (int bx = 0; bx < bins; ++bx) {
      const std::size_t i = static_cast<std::size_t>(by) * bins + bx;
      if (count[i] == 0) continue;
      const double m = sum[i] / count[i];
      const double t = (m - vmin) / (vmax - vmin);
      out << "<rect x=\"" << format_sig12(left + bx * cw) << "\" y=\""
          << format_sig12(top + plot - (by + 1) * cw) << "\" width=\""
          << format_sig12(cw + 0.5) << "\" height=\"" << format_sig12(cw + 0.5)
          << "\" fill=\"" << color_for(t) << "\"/>\n";
    }
  }
  // Color bar.
  for (int k = 0; k < 64; ++k) {
    out << "<rect x=\"" << left + plot + 20 << "\" y=\""
        << format_sig12(top + plot - (k + 1) * plot / 64.0) << "\" width=\"16\" height=\""
        << format_sig12(plot / 64.0 + 0.5) << "\" fill=\"" << color_for((k + 0.5) / 64.0)
        << "\"/>\n";
  }
  auto text = [&](double x, double y, const std::string& s, const std::string& extra) {
    out << "<text x=\"" << format_sig12(x) << "\" y=\"" << format_sig12(y)
        << "\" font-family=\"sans-serif\" font-size=\"13\"" << extra << ">" << s
        << "</text>\n";
  };
  text(left + plot / 2.0, top + plot + 36, xcol, " text-anchor=\"middle\"");
  out << "<text x=\"18\" y=\"" << top + plot / 2.0
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 18 " << top + plot / 2.0 << ")\">" << ycol
      << "</text>\n";
  text(left, top + plot + 16, format_sig12(xmin), "");
  text(left + plot, top + plot + 16, format_sig12(xmax), " text-anchor=\"end\"");
  text(left - 6, top + plot, format_sig12(ymin), " text-anchor=\"end\"");
  text(left - 6, top + 12, format_sig12(ymax), " text-anchor=\"end\"");
  text(left + plot + 40, top + plot, format_sig12(vmin), "");
  text(left + plot + 40, top + 12, format_sig12(vmax), "");
  text(left + plot + 40, top + 30, vcol, "");
  out << "</svg>\n";
}

}  // namespace retrodict
