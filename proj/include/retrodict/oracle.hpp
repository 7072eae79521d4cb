// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "retrodict/classical.hpp"
#include "retrodict/quantum.hpp"

namespace retrodict {

// Independent brute-force references used to cross-check the main
// implementations. Deliberately share no code with them.

struct QuadratureGrid {
  int npoints = 400;
  // Margin excluded at the simplex boundary; mirrors the Monte Carlo
  // rejection policy so both integrate the same effective region.
  double margin = 1e-4;
};

// Trapezoid approximation of the subjectivity double integral for a
// bit channel (priors are one-parameter), normalized by the same
// quadrature of the canonical bit erasure.
double quadrature_bit_subjectivity(const StochasticMatrix& map, const QuadratureGrid& grid);

// Same quadrature with the squared spectral distance as integrand,
// unnormalized. This is the quantity the closed-form bit expression
// integrates.
double quadrature_bit_subjectivity_squared(const StochasticMatrix& map,
                                           const QuadratureGrid& grid);

// Certified lower bound on the diamond distance: max output trace norm
// over random pure system x ancilla inputs (plus the computational
// basis probes).
double brute_diamond_lower(const KrausChannel& a, const KrausChannel& b, int nsamples);

// Singular values, descending, by one-sided Jacobi. Independent of the
// eigensolver-based path used elsewhere.
Eigen::VectorXd svd_reference(const Eigen::MatrixXd& m);

}  // namespace retrodict
