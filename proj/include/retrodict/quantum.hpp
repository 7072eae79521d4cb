// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "retrodict/errors.hpp"

namespace retrodict {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// d x d Hermitian, positive semidefinite, unit trace.
class DensityOperator {
 public:
  explicit DensityOperator(CMat m);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator pure(const CVec& ket);
  static DensityOperator diagonal(const Eigen::VectorXd& probs);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMat& mat() const { return mat_; }
  double min_eigenvalue() const;

 private:
  CMat mat_;
};

// CPTP map as a list of Kraus operators with sum k^dag k = 1.
class KrausChannel {
 public:
  KrausChannel(int dim, std::vector<CMat> kraus);
  static KrausChannel identity(int dim);
  static KrausChannel unitary(const CMat& u);
  // Constant map to the target state.
  static KrausChannel erasure(const DensityOperator& target);
  // Qubit amplitude damping toward |0>, decay strength s in [0,1].
  static KrausChannel amplitude_damping(double s);

  int dim() const { return dim_; }
  const std::vector<CMat>& kraus() const { return kraus_; }

 private:
  int dim_;
  std::vector<CMat> kraus_;
};

// Channel as the marginal of a global unitary on system x ancilla with
// a fixed ancilla input state. Tensor index convention: basis vector
// (s, a) sits at row s * ancilla_dim + a.
class Dilation {
 public:
  Dilation(int system_dim, int ancilla_dim, CMat u, DensityOperator beta);

  int system_dim() const { return system_dim_; }
  int ancilla_dim() const { return ancilla_dim_; }
  const CMat& unitary() const { return u_; }
  const DensityOperator& beta() const { return beta_; }

 private:
  int system_dim_;
  int ancilla_dim_;
  CMat u_;
  DensityOperator beta_;
};

// Real d^2 x d^2 representation in the orthonormal Hermitian basis
// returned by hermitian_basis(); last basis element is 1/sqrt(d).
// Trace preservation puts (0,...,0,1) in the last row, so the matrix
// has the affine block form [[T, t], [0, 1]].
struct TransferMatrix {
  int dim = 0;
  Eigen::MatrixXd mat;
};

// Orthonormal Hermitian basis for d x d operators: Tr[P_i P_j] =
// delta_ij, with the scaled identity last. For d = 2 this is the Pauli
// basis over sqrt(2); for d > 2 generalized Gell-Mann, normalized.
const std::vector<CMat>& hermitian_basis(int dim);

// Matrix functions of Hermitian operators by eigendecomposition, with
// eigenvalues clamped from below.
CMat hermitian_sqrt(const CMat& h, double clamp = 1e-12);
CMat hermitian_inv_sqrt(const CMat& h, double clamp = 1e-12);

DensityOperator apply_channel(const KrausChannel& chan, const DensityOperator& rho);
// Linear extension to arbitrary matrices (no state validation).
CMat apply_channel_raw(const KrausChannel& chan, const CMat& x);

KrausChannel dilation_to_kraus(const Dilation& dil);

// Adjoint (Heisenberg picture) action: sum k^dag X k.
CMat adjoint_apply(const KrausChannel& chan, const CMat& x);

// Retrodiction channel with respect to the reference state: Kraus set
// {sqrt(prior) k^dag pushforward^{-1/2}}. Requires the pushforward's
// smallest eigenvalue above eps.
KrausChannel petz_inverse(const KrausChannel& chan, const DensityOperator& prior,
                          double eps = 1e-9);

TransferMatrix transfer_matrix(const KrausChannel& chan);

// |det| of the transfer matrix. 1 exactly for unitaries, 0 for
// erasures.
double qad(const KrausChannel& chan);

// Normalized Bloch norm of the asymptotic image of the maximally mixed
// state; same iteration scheme as the classical fixed centroid.
double qfd(const KrausChannel& chan);

KrausChannel compose_channels(const KrausChannel& outer, const KrausChannel& inner);

// Minimal Kraus representation via the Choi eigendecomposition; drops
// weights below tol. Keeps operator counts at most d^2.
KrausChannel canonical_kraus(const KrausChannel& chan, double tol = 1e-12);

}  // namespace retrodict
