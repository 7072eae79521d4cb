// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "retrodict/rng.hpp"

namespace retrodict {

namespace {

// Retrodiction map of a bit channel at prior (p, 1-p), written out by
// hand so the oracle shares no code with bayes_inverse.
Eigen::Matrix2d bit_inverse(const Eigen::Matrix2d& m, double p) {
  const double push0 = m(0, 0) * p + m(0, 1) * (1 - p);
  const double push1 = m(1, 0) * p + m(1, 1) * (1 - p);
  Eigen::Matrix2d inv;
  inv(0, 0) = m(0, 0) * p / push0;
  inv(1, 0) = m(0, 1) * (1 - p) / push0;
  inv(0, 1) = m(1, 0) * p / push1;
  inv(1, 1) = m(1, 1) * (1 - p) / push1;
  return inv;
}

// Largest singular value squared of a 2x2 difference of stochastic
// matrices (columns sum to zero, so the matrix is (v, w) x (1, -1)^T
// up to signs): closed form 2 (v^2 + w^2).
double spectral_sq(const Eigen::Matrix2d& diff) {
  return 2.0 * (diff(0, 0) * diff(0, 0) + diff(0, 1) * diff(0, 1));
}

double quadrature(const StochasticMatrix& map, const QuadratureGrid& grid, bool squared) {
  if (map.dim() != 2) throw DimensionMismatch("bit quadrature: dim must be 2");
  if (grid.npoints < 16) throw InvalidValue("QuadratureGrid: npoints must be >= 16");
  const int n = grid.npoints;
  const double lo = grid.margin;
  const double hi = 1.0 - grid.margin;
  const double h = (hi - lo) / (n - 1);
  const Eigen::Matrix2d m = map.mat();

  std::vector<Eigen::Matrix2d> inv(n);
  for (int i = 0; i < n; ++i) inv[i] = bit_inverse(m, lo + i * h);

  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      const double s2 = spectral_sq(inv[i] - inv[j]);
      row += wj * (squared ? s2 : std::sqrt(std::max(0.0, s2)));
    }
    total += wi * row;
  }
  return total * h * h;
}

}  // namespace

double quadrature_bit_subjectivity(const StochasticMatrix& map, const QuadratureGrid& grid) {
  const double raw = quadrature(map, grid, false);
  const double ref =
      quadrature(StochasticMatrix::erasure(ProbVector::uniform(2)), grid, false);
  return raw / ref;
}

double quadrature_bit_subjectivity_squared(const StochasticMatrix& map,
                                           const QuadratureGrid& grid) {
  return quadrature(map, grid, true);
}

double brute_diamond_lower(const KrausChannel& a, const KrausChannel& b, int nsamples) {
  if (a.dim() != b.dim()) throw DimensionMismatch("brute_diamond_lower: dims differ");
  const int d = a.dim();
  const int n = d * d;

  auto value_at = [&](const CVec& psi) {
    CMat rho = CMat::Zero(n, n);
    for (const auto& k : a.kraus()) {
      CMat lifted = CMat::Zero(n, n);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          lifted.block(i * d, j * d, d, d) = k(i, j) * CMat::Identity(d, d);
        }
      }
      const CVec v = lifted * psi;
      rho += v * v.adjoint();
    }
    for (const auto& k : b.kraus()) {
      CMat lifted = CMat::Zero(n, n);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          lifted.block(i * d, j * d, d, d) = k(i, j) * CMat::Identity(d, d);
        }
      }
      const CVec v = lifted * psi;
      rho -= v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  };

  double best = 0.0;
  // Deterministic probes first: product basis states catch the common
  // optima (orthogonal erasures, basis-aligned unitaries).
  for (int i = 0; i < n; ++i) {
    CVec e = CVec::Zero(n);
    e(i) = 1.0;
    best = std::max(best, value_at(e));
  }
  RngStream rng(0x0b5e55ull, 0);
  for (int s = 0; s < nsamples; ++s) {
    CVec v(n);
    for (int i = 0; i < n; ++i) {
      v(i) = std::complex<double>(rng.gaussian(), rng.gaussian());
    }
    v.normalize();
    best = std::max(best, value_at(v));
  }
  return best;
}

Eigen::VectorXd svd_reference(const Eigen::MatrixXd& m) {
  // One-sided Jacobi: orthogonalize column pairs of a working copy
  // until every off-diagonal Gram entry is negligible.
  Eigen::MatrixXd a = m;
  const int cols = static_cast<int>(a.cols());
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < cols - 1; ++p) {
      for (int q = p + 1; q < cols; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double g = a.col(p).dot(a.col(q));
        if (alpha < 1e-300 || beta < 1e-300) continue;
        off = std::max(off, std::abs(g) / std::sqrt(alpha * beta));
        if (std::abs(g) < 1e-30) continue;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd ap = a.col(p);
        a.col(p) = c * ap - s * a.col(q);
        a.col(q) = s * ap + c * a.col(q);
      }
    }
    if (off < 1e-15) break;
  }
  Eigen::VectorXd sv(cols);
  for (int j = 0; j < cols; ++j) sv(j) = a.col(j).norm();
  std::sort(sv.data(), sv.data() + cols, std::greater<double>());
  return sv;
}

}  // namespace retrodict
