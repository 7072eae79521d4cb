// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/measures.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "retrodict/rng.hpp"
#include "retrodict/samplers.hpp"

namespace retrodict {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Interior resampling caps out eventually: a map whose pushforward is
// singular for every prior (erasure to a boundary state) has no
// retrodiction integral at all.
constexpr int kMaxResample = 100000;

struct Accumulator {
  double sum = 0.0;
  double sumsq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double std_error() const {
    if (n < 2) return 0.0;
    const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  }
};

MeasureEstimate finish(const Accumulator& acc, const IntegrationConfig& cfg,
                       long long rejected, int dim, ReferenceKind kind) {
  MeasureEstimate e{acc.mean(), acc.std_error(), acc.n, cfg.seed, false, rejected};
  if (cfg.normalize) {
    IntegrationConfig ref_cfg = cfg;
    ref_cfg.normalize = false;
    const MeasureEstimate ref = erasure_reference_value(dim, ref_cfg, kind);
    e.value /= ref.value;
    e.std_error /= ref.value;
    e.normalized = true;
  }
  return e;
}

// ---- diamond norm ----------------------------------------------------

CMat lift(const CMat& k, int anc) {
  if (anc == 1) return k;
  const int d = static_cast<int>(k.rows());
  CMat out = CMat::Zero(d * anc, d * anc);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out.block(i * anc, j * anc, anc, anc) =
          k(i, j) * CMat::Identity(anc, anc);
    }
  }
  return out;
}

struct DiffObjective {
  std::vector<CMat> lifted_a, lifted_b;
  int n = 0;

  DiffObjective(const KrausChannel& a, const KrausChannel& b, int anc) {
    n = a.dim() * anc;
    for (const auto& k : a.kraus()) lifted_a.push_back(lift(k, anc));
    for (const auto& k : b.kraus()) lifted_b.push_back(lift(k, anc));
  }

  // Trace norm of the lifted difference applied to |psi><psi|; when
  // grad_op is given, also the Hermitian operator H with gradient 2 H
  // psi (adjoint action of the output's sign operator).
  double eval(const CVec& psi, CMat* grad_op) const {
    CMat rho = CMat::Zero(n, n);
    for (const auto& l : lifted_a) {
      const CVec v = l * psi;
      rho += v * v.adjoint();
    }
    for (const auto& l : lifted_b) {
      const CVec v = l * psi;
      rho -= v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    const double value = es.eigenvalues().cwiseAbs().sum();
    if (grad_op) {
      CMat s = CMat::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        const double sign = es.eigenvalues()(i) >= 0 ? 1.0 : -1.0;
        s += sign * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      }
      CMat h = CMat::Zero(n, n);
      for (const auto& l : lifted_a) h += l.adjoint() * s * l;
      for (const auto& l : lifted_b) h -= l.adjoint() * s * l;
      *grad_op = std::move(h);
    }
    return value;
  }

  double ascend(CVec psi) const {
    psi.normalize();
    CMat h;
    double g = eval(psi, &h);
    for (int iter = 0; iter < 300; ++iter) {
      const CVec dir = h * psi;
      double step = 1.0;
      bool improved = false;
      CVec cand;
      double gc = g;
      for (int halve = 0; halve < 40; ++halve) {
        cand = psi + step * dir;
        cand.normalize();
        gc = eval(cand, nullptr);
        if (gc > g + 1e-14) {
          improved = true;
          break;
        }
        step /= 2;
      }
      if (!improved) break;
      psi = cand;
      const double gain = gc - g;
      g = eval(psi, &h);
      if (gain < 1e-9) break;
    }
    return g;
  }
};

CVec random_state(int n, RngStream& rng) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = std::complex<double>(rng.gaussian(), rng.gaussian());
  v.normalize();
  return v;
}

double optimize_diff(const KrausChannel& a, const KrausChannel& b, int anc, int restarts,
                     std::uint64_t seed) {
  const int d = a.dim();
  const DiffObjective obj(a, b, anc);
  double best = 0.0;
  int r = 0;
  if (anc == d) {
    CVec ent = CVec::Zero(d * d);
    for (int i = 0; i < d; ++i) ent(i * d + i) = 1.0;
    ent.normalize();
    best = std::max(best, obj.ascend(ent));
    ++r;
  }
  for (int i = 0; i < obj.n && r < restarts; ++i, ++r) {
    CVec basis = CVec::Zero(obj.n);
    basis(i) = 1.0;
    best = std::max(best, obj.ascend(basis));
  }
  for (; r < restarts; ++r) {
    RngStream rng(seed ^ 0xd1a30ull, static_cast<std::uint64_t>(r));
    best = std::max(best, obj.ascend(random_state(obj.n, rng)));
  }
  return best;
}

}  // namespace

double diamond_norm_distance(const KrausChannel& a, const KrausChannel& b,
                             const IntegrationConfig& cfg) {
  if (a.dim() != b.dim()) throw DimensionMismatch("diamond_norm_distance: dims differ");
  const int d = a.dim();
  const KrausChannel ca =
      static_cast<int>(a.kraus().size()) > d * d ? canonical_kraus(a) : a;
  const KrausChannel cb =
      static_cast<int>(b.kraus().size()) > d * d ? canonical_kraus(b) : b;
  const double with_ancilla =
      optimize_diff(ca, cb, d, std::max(1, cfg.diamond_restarts), cfg.seed);
  // Ancilla-free maximization lower-bounds the diamond norm; keep the
  // better of the two.
  const double ancilla_free = optimize_diff(ca, cb, 1, 4, cfg.seed + 1);
  return std::max(with_ancilla, ancilla_free);
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("kl_divergence: dims differ");
  double sum = 0.0;
  for (int a = 0; a < p.dim(); ++a) {
    if (p(a) <= 0.0) continue;
    if (q(a) <= 0.0) return kInf;
    sum += p(a) * std::log(p(a) / q(a));
  }
  return std::max(0.0, sum);
}

double umegaki_divergence(const DensityOperator& rho, const DensityOperator& gamma) {
  if (rho.dim() != gamma.dim()) throw DimensionMismatch("umegaki_divergence: dims differ");
  constexpr double tol = 1e-12;
  Eigen::SelfAdjointEigenSolver<CMat> er(rho.mat());
  Eigen::SelfAdjointEigenSolver<CMat> eg(gamma.mat());
  double entropy = 0.0;
  for (int i = 0; i < rho.dim(); ++i) {
    const double lam = er.eigenvalues()(i);
    if (lam > tol) entropy += lam * std::log(lam);
  }
  double cross = 0.0;
  for (int j = 0; j < gamma.dim(); ++j) {
    const double mu = eg.eigenvalues()(j);
    const double weight =
        (eg.eigenvectors().col(j).adjoint() * rho.mat() * eg.eigenvectors().col(j))(0)
            .real();
    if (mu <= tol) {
      if (weight > tol) return kInf;
      continue;
    }
    cross += weight * std::log(mu);
  }
  return std::max(0.0, entropy - cross);
}

MeasureEstimate classical_subjectivity(const StochasticMatrix& map,
                                       const IntegrationConfig& cfg) {
  const int d = map.dim();
  const double eps = cfg.rejection_eps;
  Accumulator acc;
  long long rejected = 0;
  for (int i = 0; i < cfg.npairs; ++i) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxResample) {
        throw SingularPushforward("classical_subjectivity: no interior prior survives");
      }
      const ProbVector g1 = sample_simplex(d, rng);
      const ProbVector g2 = sample_simplex(d, rng);
      if (g1.min_entry() < eps || g2.min_entry() < eps ||
          (map.mat() * g1.vec()).minCoeff() <= eps ||
          (map.mat() * g2.vec()).minCoeff() <= eps) {
        ++rejected;
        continue;
      }
      acc.add(spectral_norm_distance(bayes_inverse(map, g1, eps),
                                     bayes_inverse(map, g2, eps)));
      break;
    }
  }
  return finish(acc, cfg, rejected, d, ReferenceKind::ClassicalSubjectivity);
}

MeasureEstimate quantum_subjectivity(const KrausChannel& chan,
                                     const IntegrationConfig& cfg) {
  const int d = chan.dim();
  const double eps = cfg.rejection_eps;
  Accumulator acc;
  long long rejected = 0;
  for (int i = 0; i < cfg.npairs; ++i) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxResample) {
        throw SingularPushforward("quantum_subjectivity: no interior prior survives");
      }
      const DensityOperator g1 = sample_density_hs(d, rng);
      const DensityOperator g2 = sample_density_hs(d, rng);
      CMat p1 = apply_channel_raw(chan, g1.mat());
      CMat p2 = apply_channel_raw(chan, g2.mat());
      Eigen::SelfAdjointEigenSolver<CMat> e1((p1 + p1.adjoint().eval()) / 2.0,
                                             Eigen::EigenvaluesOnly);
      Eigen::SelfAdjointEigenSolver<CMat> e2((p2 + p2.adjoint().eval()) / 2.0,
                                             Eigen::EigenvaluesOnly);
      if (e1.eigenvalues().minCoeff() <= eps || e2.eigenvalues().minCoeff() <= eps) {
        ++rejected;
        continue;
      }
      acc.add(diamond_norm_distance(petz_inverse(chan, g1, eps),
                                    petz_inverse(chan, g2, eps), cfg));
      break;
    }
  }
  return finish(acc, cfg, rejected, d, ReferenceKind::QuantumSubjectivity);
}

MeasureEstimate classical_avg_div_change(const StochasticMatrix& map,
                                         const IntegrationConfig& cfg) {
  const int d = map.dim();
  Accumulator acc;
  long long rejected = 0;
  for (int i = 0; i < cfg.npairs; ++i) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxResample) {
        throw SingularPushforward("classical_avg_div_change: every sample diverges");
      }
      const ProbVector p = sample_simplex(d, rng);
      const ProbVector g = sample_simplex(d, rng);
      const double before = kl_divergence(p, g);
      if (std::isinf(before)) {
        ++rejected;
        continue;
      }
      const double after = kl_divergence(apply(map, p), apply(map, g));
      if (std::isinf(after)) {
        ++rejected;
        continue;
      }
      acc.add(before - after);
      break;
    }
  }
  return finish(acc, cfg, rejected, d, ReferenceKind::ClassicalDivChange);
}

MeasureEstimate quantum_avg_div_change(const KrausChannel& chan,
                                       const IntegrationConfig& cfg) {
  const int d = chan.dim();
  Accumulator acc;
  long long rejected = 0;
  for (int i = 0; i < cfg.npairs; ++i) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxResample) {
        throw SingularPushforward("quantum_avg_div_change: every sample diverges");
      }
      const DensityOperator rho = sample_density_hs(d, rng);
      const DensityOperator g = sample_density_hs(d, rng);
      const double before = umegaki_divergence(rho, g);
      if (std::isinf(before)) {
        ++rejected;
        continue;
      }
      const double after =
          umegaki_divergence(apply_channel(chan, rho), apply_channel(chan, g));
      if (std::isinf(after)) {
        ++rejected;
        continue;
      }
      acc.add(before - after);
      break;
    }
  }
  return finish(acc, cfg, rejected, d, ReferenceKind::QuantumDivChange);
}

// ---- erasure reference cache ------------------------------------------

namespace {

// Function-local so that callers in other translation units can touch
// the cache from their own static initializers.
struct CacheState {
  std::mutex mu;
  std::map<std::string, MeasureEstimate> entries;
  std::string path = "retrodict_cache.json";
  bool loaded = false;
};

CacheState& cache_state() {
  static CacheState state;
  return state;
}

std::string kind_label(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::ClassicalSubjectivity:
      return "cs";
    case ReferenceKind::QuantumSubjectivity:
      return "qs";
    case ReferenceKind::ClassicalDivChange:
      return "cd";
    case ReferenceKind::QuantumDivChange:
      return "qd";
  }
  return "?";
}

void load_cache_locked() {
  CacheState& st = cache_state();
  if (st.loaded) return;
  st.loaded = true;
  if (st.path.empty()) return;
  std::ifstream in(st.path);
  if (!in) return;
  try {
    nlohmann::json j;
    in >> j;
    for (auto it = j.begin(); it != j.end(); ++it) {
      MeasureEstimate e;
      e.value = it.value().at("value").get<double>();
      e.std_error = it.value().at("stderr").get<double>();
      e.nsamples = it.value().at("nsamples").get<int>();
      st.entries[it.key()] = e;
    }
  } catch (...) {
    // A corrupt cache is discardable; recompute instead.
    st.entries.clear();
  }
}

void persist_cache_locked() {
  CacheState& st = cache_state();
  if (st.path.empty()) return;
  nlohmann::json j;
  for (const auto& [key, e] : st.entries) {
    j[key] = {{"value", e.value}, {"stderr", e.std_error}, {"nsamples", e.nsamples}};
  }
  std::ofstream out(st.path);
  if (out) out << j.dump(1) << "\n";
}

}  // namespace

void set_reference_cache_path(const std::string& path) {
  CacheState& st = cache_state();
  std::lock_guard<std::mutex> lock(st.mu);
  st.path = path;
  st.entries.clear();
  st.loaded = false;
}

MeasureEstimate erasure_reference_value(int dim, const IntegrationConfig& cfg,
                                        ReferenceKind kind) {
  if (dim < 2) throw DimensionMismatch("erasure_reference_value: dim must be >= 2");
  std::ostringstream key;
  key << kind_label(kind) << ":d=" << dim << ":seed=" << cfg.seed
      << ":npairs=" << cfg.npairs;
  CacheState& st = cache_state();
  {
    std::lock_guard<std::mutex> lock(st.mu);
    load_cache_locked();
    auto it = st.entries.find(key.str());
    if (it != st.entries.end()) {
      MeasureEstimate e = it->second;
      e.seed = cfg.seed;
      return e;
    }
  }
  IntegrationConfig ref_cfg = cfg;
  ref_cfg.normalize = false;
  MeasureEstimate e;
  switch (kind) {
    case ReferenceKind::ClassicalSubjectivity:
      e = classical_subjectivity(StochasticMatrix::erasure(ProbVector::uniform(dim)),
                                 ref_cfg);
      break;
    case ReferenceKind::ClassicalDivChange:
      e = classical_avg_div_change(StochasticMatrix::erasure(ProbVector::uniform(dim)),
                                   ref_cfg);
      break;
    case ReferenceKind::QuantumSubjectivity:
      e = quantum_subjectivity(KrausChannel::erasure(DensityOperator::maximally_mixed(dim)),
                               ref_cfg);
      break;
    case ReferenceKind::QuantumDivChange:
      e = quantum_avg_div_change(
          KrausChannel::erasure(DensityOperator::maximally_mixed(dim)), ref_cfg);
      break;
  }
  std::lock_guard<std::mutex> lock(st.mu);
  st.entries[key.str()] = e;
  persist_cache_locked();
  return e;
}

}  // namespace retrodict
