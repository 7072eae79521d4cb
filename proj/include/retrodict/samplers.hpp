// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "retrodict/classical.hpp"
#include "retrodict/quantum.hpp"
#include "retrodict/rng.hpp"

namespace retrodict {

// One cell of the (|det T|, fixed-point-norm) coordinate grid used by
// the qubit channel sampler.
struct GridCell {
  double u_lo = 0.0, u_hi = 1.0;
  double f_lo = 0.0, f_hi = 1.0;
  int quota = 1;
};

struct SampledQubitChannel {
  Dilation dilation;
  // (|det T'|, ||(I - T')^{-1} t'||) of the realized channel.
  double det_coord = 0.0;
  double fix_coord = 0.0;
  int cell_i = 0, cell_j = 0;
  int retries = 0;
  bool sandwiched = false;
};

// Uniform sample on the probability simplex (flat Dirichlet).
ProbVector sample_simplex(int dim, RngStream& rng);

// Haar-distributed unitary (QR of a complex Gaussian with phase fix).
CMat haar_unitary(int dim, RngStream& rng);

// Hilbert-Schmidt-distributed density operator (G G^dag / Tr), resampled
// until the smallest eigenvalue exceeds min_eig.
DensityOperator sample_density_hs(int dim, RngStream& rng, double min_eig = 1e-6);

// Qubit channel whose coordinates land in the cell: amplitude damping
// with parameters read off the cell, optionally sandwiched between Haar
// unitaries (probability sandwich_prob, up to max_retries resamples,
// then fallback to the plain damping channel).
SampledQubitChannel sample_qubit_gad_grid(const GridCell& cell, RngStream& rng,
                                          double sandwich_prob = 0.8,
                                          int max_retries = 64);

// Trit channel with every column's first two entries drawn uniformly
// from {(r1, r2) in [0, 1-D]^2 : r1 + r2 <= 1-D}. Concentrates mass on
// the last state as D grows; D is not a determinant guarantee.
StochasticMatrix sample_trit_channel_restricted(double D, RngStream& rng);

// Absorbing map in standard block form: permutation (inner) on the
// first n states, transfer block R (n x (d-n)) feeding them, transient
// block Q ((d-n) x (d-n)), then relabeled by the outer permutation.
StochasticMatrix construct_absorbing(int d, int n, const Eigen::MatrixXd& R,
                                     const Eigen::MatrixXd& Q,
                                     const std::vector<int>& outer,
                                     const std::vector<int>& inner);

// Trit spiral (pseudo-absorber): a 2-cycle-looking pattern with leak p
// out of the apparent absorbing pair, relabeled by the outer
// permutation. Requires p > 0, q >= 0, p + q <= 1.
StochasticMatrix construct_spiral(double p, double q, const std::vector<int>& outer);

// Random standard-form absorber with uniformly sampled [R; Q] columns
// and random inner/outer permutations; resamples until R is nonzero and
// I - Q is invertible.
StochasticMatrix random_absorbing(int d, int n, RngStream& rng);

std::vector<int> random_permutation(int d, RngStream& rng);

}  // namespace retrodict
