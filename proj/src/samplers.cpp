// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/samplers.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace retrodict {

namespace {

Eigen::MatrixXd permutation_matrix(const std::vector<int>& sigma) {
  const int d = static_cast<int>(sigma.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
  std::vector<bool> seen(d, false);
  for (int a = 0; a < d; ++a) {
    if (sigma[a] < 0 || sigma[a] >= d || seen[sigma[a]]) {
      throw InvalidBlocks("permutation: not a bijection on {0..d-1}");
    }
    seen[sigma[a]] = true;
    p(sigma[a], a) = 1.0;
  }
  return p;
}

// 4x4 interaction unitary of amplitude damping with strength gamma,
// basis order (s, a) -> s * 2 + a.
CMat damping_unitary(double gamma) {
  const double c = std::sqrt(1.0 - gamma);
  const double s = std::sqrt(gamma);
  CMat u = CMat::Zero(4, 4);
  u(0, 0) = 1;
  u(1, 1) = c;
  u(1, 2) = s;
  u(2, 1) = -s;
  u(2, 2) = c;
  u(3, 3) = 1;
  return u;
}

CMat kron2(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// (|det T|, ||(I-T)^{-1} t||) of the channel realized by (U, beta).
// The scale factors between the operator-basis coefficients and Bloch
// coordinates cancel in both quantities.
std::pair<double, double> qubit_coords(const CMat& u, const DensityOperator& beta) {
  const auto kraus = dilation_to_kraus(Dilation(2, 2, u, beta));
  const Eigen::MatrixXd m = transfer_matrix(kraus).mat;
  const Eigen::Matrix3d t_block = m.topLeftCorner(3, 3);
  const Eigen::Vector3d shift = m.topRightCorner(3, 1);
  const double det = std::abs(t_block.determinant());
  const Eigen::Matrix3d rest = Eigen::Matrix3d::Identity() - t_block;
  if (std::abs(rest.determinant()) < 1e-12) {
    return {det, std::numeric_limits<double>::infinity()};
  }
  const Eigen::Vector3d fix = rest.inverse() * shift;
  return {det, fix.norm()};
}

}  // namespace

ProbVector sample_simplex(int dim, RngStream& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    v(i) = -std::log(u);
  }
  v /= v.sum();
  return ProbVector(std::move(v));
}

CMat haar_unitary(int dim, RngStream& rng) {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
    }
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the phases of R's diagonal makes the distribution Haar.
  for (int j = 0; j < dim; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

DensityOperator sample_density_hs(int dim, RngStream& rng, double min_eig) {
  for (;;) {
    CMat g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
      }
    }
    CMat rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = (rho + rho.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() >= min_eig) return DensityOperator(std::move(rho));
  }
}

SampledQubitChannel sample_qubit_gad_grid(const GridCell& cell, RngStream& rng,
                                          double sandwich_prob, int max_retries) {
  if (cell.u_lo < 0 || cell.u_hi > 1 || cell.f_lo < 0 || cell.f_hi > 1 ||
      cell.u_lo >= cell.u_hi || cell.f_lo >= cell.f_hi) {
    throw InvalidValue("GridCell: malformed intervals");
  }
  const double u = rng.uniform(cell.u_lo, cell.u_hi);
  const double f = rng.uniform(cell.f_lo, cell.f_hi);
  const double gamma = 1.0 - std::sqrt(u);
  const double p = rng.bernoulli(0.5) ? (1.0 + f) / 2.0 : (1.0 - f) / 2.0;
  DensityOperator beta = DensityOperator::diagonal(Eigen::Vector2d(p, 1.0 - p));
  const CMat u_ad = damping_unitary(gamma);
  const CMat eye2 = CMat::Identity(2, 2);

  auto in_cell = [&](const std::pair<double, double>& c) {
    return c.first >= cell.u_lo && c.first <= cell.u_hi && c.second >= cell.f_lo &&
           c.second <= cell.f_hi;
  };

  if (rng.bernoulli(sandwich_prob)) {
    for (int retry = 0; retry < max_retries; ++retry) {
      const CMat u1 = haar_unitary(2, rng);
      const CMat u2 = haar_unitary(2, rng);
      const CMat sandwiched = kron2(u1, eye2) * u_ad * kron2(u2, eye2);
      const auto coords = qubit_coords(sandwiched, beta);
      if (in_cell(coords)) {
        return {Dilation(2, 2, sandwiched, beta), coords.first, coords.second,
                0,        0,                      retry + 1,    true};
      }
    }
  }
  const auto coords = qubit_coords(u_ad, beta);
  return {Dilation(2, 2, u_ad, beta), coords.first, coords.second, 0, 0, 0, false};
}

StochasticMatrix sample_trit_channel_restricted(double D, RngStream& rng) {
  if (D < 0.0 || D > 1.0) throw InvalidValue("sample_trit_channel_restricted: D outside [0,1]");
  Eigen::MatrixXd m(3, 3);
  for (int j = 0; j < 3; ++j) {
    // Uniform on the triangle r1, r2 >= 0, r1 + r2 <= 1 - D.
    double a = rng.uniform();
    double b = rng.uniform();
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    m(0, j) = (1.0 - D) * a;
    m(1, j) = (1.0 - D) * b;
    m(2, j) = 1.0 - m(0, j) - m(1, j);
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix construct_absorbing(int d, int n, const Eigen::MatrixXd& R,
                                     const Eigen::MatrixXd& Q,
                                     const std::vector<int>& outer,
                                     const std::vector<int>& inner) {
  const int m = d - n;
  if (n < 1 || n >= d) throw InvalidBlocks("construct_absorbing: need 1 <= n < d");
  if (R.rows() != n || R.cols() != m || Q.rows() != m || Q.cols() != m) {
    throw InvalidBlocks("construct_absorbing: block shape mismatch");
  }
  if (R.cwiseAbs().maxCoeff() <= 1e-12) {
    throw InvalidBlocks("construct_absorbing: transfer block is zero");
  }
  const Eigen::MatrixXd rest = Eigen::MatrixXd::Identity(m, m) - Q;
  if (std::abs(rest.determinant()) < 1e-12) {
    throw InvalidBlocks("construct_absorbing: I - Q is singular");
  }
  if (static_cast<int>(inner.size()) != n || static_cast<int>(outer.size()) != d) {
    throw InvalidBlocks("construct_absorbing: permutation size mismatch");
  }
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(d, d);
  block.topLeftCorner(n, n) = permutation_matrix(inner);
  block.topRightCorner(n, m) = R;
  block.bottomRightCorner(m, m) = Q;
  const Eigen::MatrixXd p = permutation_matrix(outer);
  return StochasticMatrix(p * block * p.transpose());
}

StochasticMatrix construct_spiral(double p, double q, const std::vector<int>& outer) {
  if (!(p > 0.0) || q < 0.0 || p + q > 1.0) {
    throw DomainError("construct_spiral: need p > 0, q >= 0, p + q <= 1");
  }
  Eigen::MatrixXd m(3, 3);
  m << 0, 0, p, 1, 0, q, 0, 1, 1 - p - q;
  const Eigen::MatrixXd perm = permutation_matrix(outer);
  return StochasticMatrix(perm * m * perm.transpose());
}

StochasticMatrix random_absorbing(int d, int n, RngStream& rng) {
  const int m = d - n;
  for (;;) {
    Eigen::MatrixXd r(n, m), q(m, m);
    for (int j = 0; j < m; ++j) {
      const ProbVector col = sample_simplex(d, rng);
      for (int i = 0; i < n; ++i) r(i, j) = col(i);
      for (int i = 0; i < m; ++i) q(i, j) = col(n + i);
    }
    if (r.cwiseAbs().maxCoeff() <= 1e-12) continue;
    if (std::abs((Eigen::MatrixXd::Identity(m, m) - q).determinant()) < 1e-9) continue;
    return construct_absorbing(d, n, r, q, random_permutation(d, rng),
                               random_permutation(n, rng));
  }
}

std::vector<int> random_permutation(int d, RngStream& rng) {
  std::vector<int> sigma(d);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int i = d - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_index(i + 1));
    std::swap(sigma[i], sigma[j]);
  }
  return sigma;
}

}  // namespace retrodict
