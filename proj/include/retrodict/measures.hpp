// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "retrodict/classical.hpp"
#include "retrodict/quantum.hpp"

namespace retrodict {

// Monte Carlo estimate with provenance. rejected counts samples thrown
// away by the interior-resampling policy, so integral bias stays
// auditable.
struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int nsamples = 0;
  std::uint64_t seed = 0;
  bool normalized = false;
  long long rejected = 0;
};

struct IntegrationConfig {
  int npairs = 2000;
  std::uint64_t seed = 0;
  double rejection_eps = 1e-9;
  int diamond_restarts = 16;
  bool normalize = false;

  static IntegrationConfig classical_defaults(std::uint64_t seed = 0) {
    IntegrationConfig c;
    c.npairs = 2000;
    c.seed = seed;
    return c;
  }
  // Smaller budget: every sample pays for a diamond-norm optimization.
  static IntegrationConfig quantum_defaults(std::uint64_t seed = 0) {
    IntegrationConfig c;
    c.npairs = 200;
    c.seed = seed;
    return c;
  }
};

enum class ReferenceKind {
  ClassicalSubjectivity,
  QuantumSubjectivity,
  ClassicalDivChange,
  QuantumDivChange,
};

// Mean spectral-norm distance between retrodiction maps over pairs of
// flat-Dirichlet priors. cfg.normalize divides by the erasure reference
// of the same dimension.
MeasureEstimate classical_subjectivity(const StochasticMatrix& map,
                                       const IntegrationConfig& cfg);

// Mean diamond distance between Petz retrodiction maps over pairs of
// Hilbert-Schmidt priors.
MeasureEstimate quantum_subjectivity(const KrausChannel& chan,
                                     const IntegrationConfig& cfg);

// Mean of KL(p||g) - KL(map[p]||map[g]) over flat-Dirichlet pairs.
MeasureEstimate classical_avg_div_change(const StochasticMatrix& map,
                                         const IntegrationConfig& cfg);

// Mean Umegaki divergence contraction over Hilbert-Schmidt pairs.
MeasureEstimate quantum_avg_div_change(const KrausChannel& chan,
                                       const IntegrationConfig& cfg);

// Value of the given measure for the canonical erasure (to the uniform
// vector / maximally mixed state): the normalization yardstick. Cached
// by (kind, dim, seed, npairs) in memory and in a JSON cache file.
MeasureEstimate erasure_reference_value(int dim, const IntegrationConfig& cfg,
                                        ReferenceKind kind);

// Location of the persisted reference cache (empty string disables
// persistence; default "retrodict_cache.json" in the working
// directory).
void set_reference_cache_path(const std::string& path);

// Diamond-norm distance estimated by multi-start projected gradient
// ascent over pure states on system x ancilla; never below the
// ancilla-free lower bound, which is computed alongside.
double diamond_norm_distance(const KrausChannel& a, const KrausChannel& b,
                             const IntegrationConfig& cfg);

// Sum p ln(p/q); +infinity on support mismatch.
double kl_divergence(const ProbVector& p, const ProbVector& q);

// Tr[rho (ln rho - ln gamma)]; +infinity when rho's support leaves
// gamma's (eigenvalue threshold 1e-12).
double umegaki_divergence(const DensityOperator& rho, const DensityOperator& gamma);

}  // namespace retrodict
