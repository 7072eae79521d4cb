// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/quantum.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "power_limit.hpp"

namespace retrodict {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-10;

void check_hermitian(const CMat& m, const char* what) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    throw InvalidValue(std::string(what) + ": not Hermitian");
  }
}

}  // namespace

DensityOperator::DensityOperator(CMat m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
    throw InvalidValue("DensityOperator: not square");
  }
  check_hermitian(mat_, "DensityOperator");
  if (std::abs(mat_.trace().real() - 1.0) > kHermTol ||
      std::abs(mat_.trace().imag()) > kHermTol) {
    throw InvalidValue("DensityOperator: trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kHermTol) {
    throw InvalidValue("DensityOperator: negative eigenvalue");
  }
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(CMat::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::pure(const CVec& ket) {
  CVec k = ket / ket.norm();
  return DensityOperator(k * k.adjoint());
}

DensityOperator DensityOperator::diagonal(const Eigen::VectorXd& probs) {
  return DensityOperator(probs.cast<std::complex<double>>().asDiagonal());
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(mat_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

KrausChannel::KrausChannel(int dim, std::vector<CMat> kraus)
    : dim_(dim), kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidValue("KrausChannel: empty Kraus set");
  CMat sum = CMat::Zero(dim_, dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw InvalidValue("KrausChannel: operator shape mismatch");
    }
    sum += k.adjoint() * k;
  }
  if ((sum - CMat::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > kTraceTol) {
    throw InvalidValue("KrausChannel: not trace preserving");
  }
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel(dim, {CMat::Identity(dim, dim)});
}

KrausChannel KrausChannel::unitary(const CMat& u) {
  const int d = static_cast<int>(u.rows());
  if ((u.adjoint() * u - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > kTraceTol) {
    throw InvalidValue("KrausChannel::unitary: matrix is not unitary");
  }
  return KrausChannel(d, {u});
}

KrausChannel KrausChannel::erasure(const DensityOperator& target) {
  const int d = target.dim();
  Eigen::SelfAdjointEigenSolver<CMat> es(target.mat());
  std::vector<CMat> ks;
  for (int j = 0; j < d; ++j) {
    const double lam = std::max(0.0, es.eigenvalues()(j));
    if (lam < 1e-15) continue;
    for (int i = 0; i < d; ++i) {
      CMat k = CMat::Zero(d, d);
      k.col(i) = std::sqrt(lam) * es.eigenvectors().col(j);
      ks.push_back(std::move(k));
    }
  }
  return KrausChannel(d, std::move(ks));
}

KrausChannel KrausChannel::amplitude_damping(double s) {
  CMat k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - s);
  k1 << 0, std::sqrt(s), 0, 0;
  return KrausChannel(2, {k0, k1});
}

Dilation::Dilation(int system_dim, int ancilla_dim, CMat u, DensityOperator beta)
    : system_dim_(system_dim), ancilla_dim_(ancilla_dim), u_(std::move(u)),
      beta_(std::move(beta)) {
  const int n = system_dim_ * ancilla_dim_;
  if (u_.rows() != n || u_.cols() != n) {
    throw InvalidValue("Dilation: unitary shape mismatch");
  }
  if ((u_.adjoint() * u_ - CMat::Identity(n, n)).cwiseAbs().maxCoeff() > kTraceTol) {
    throw InvalidValue("Dilation: matrix is not unitary");
  }
  if (beta_.dim() != ancilla_dim_) {
    throw InvalidValue("Dilation: ancilla state dimension mismatch");
  }
}

const std::vector<CMat>& hermitian_basis(int dim) {
  static std::mutex mu;
  static std::map<int, std::vector<CMat>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;

  std::vector<CMat> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      CMat x = CMat::Zero(dim, dim);
      x(i, j) = inv_sqrt2;
      x(j, i) = inv_sqrt2;
      basis.push_back(x);
      CMat y = CMat::Zero(dim, dim);
      y(i, j) = std::complex<double>(0, -inv_sqrt2);
      y(j, i) = std::complex<double>(0, inv_sqrt2);
      basis.push_back(y);
    }
  }
  for (int l = 1; l < dim; ++l) {
    CMat z = CMat::Zero(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int k = 0; k < l; ++k) z(k, k) = norm;
    z(l, l) = -static_cast<double>(l) * norm;
    basis.push_back(z);
  }
  basis.push_back(CMat::Identity(dim, dim) / std::sqrt(static_cast<double>(dim)));
  return cache.emplace(dim, std::move(basis)).first->second;
}

CMat hermitian_sqrt(const CMat& h, double clamp) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(clamp);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

CMat hermitian_inv_sqrt(const CMat& h, double clamp) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(clamp);
  return es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint();
}

CMat apply_channel_raw(const KrausChannel& chan, const CMat& x) {
  if (x.rows() != chan.dim() || x.cols() != chan.dim()) {
    throw DimensionMismatch("apply_channel: dims differ");
  }
  CMat out = CMat::Zero(chan.dim(), chan.dim());
  for (const auto& k : chan.kraus()) out += k * x * k.adjoint();
  return out;
}

DensityOperator apply_channel(const KrausChannel& chan, const DensityOperator& rho) {
  CMat out = apply_channel_raw(chan, rho.mat());
  // Symmetrize away rounding before revalidating.
  out = (out + out.adjoint().eval()) / 2.0;
  out /= out.trace().real();
  return DensityOperator(std::move(out));
}

KrausChannel dilation_to_kraus(const Dilation& dil) {
  const int d = dil.system_dim();
  const int dB = dil.ancilla_dim();
  Eigen::SelfAdjointEigenSolver<CMat> es(dil.beta().mat());
  std::vector<CMat> ks;
  for (int k = 0; k < dB; ++k) {
    const double lam = std::max(0.0, es.eigenvalues()(k));
    if (lam < 1e-15) continue;
    const CVec b = es.eigenvectors().col(k);
    for (int j = 0; j < dB; ++j) {
      // K[(s'), (s)] = sqrt(lam) <s', j | U | s, b_k>, index (s, a) at
      // s * dB + a.
      CMat op(d, d);
      for (int sp = 0; sp < d; ++sp) {
        for (int s = 0; s < d; ++s) {
          std::complex<double> v = 0;
          for (int a = 0; a < dB; ++a) v += dil.unitary()(sp * dB + j, s * dB + a) * b(a);
          op(sp, s) = std::sqrt(lam) * v;
        }
      }
      ks.push_back(std::move(op));
    }
  }
  return KrausChannel(d, std::move(ks));
}

CMat adjoint_apply(const KrausChannel& chan, const CMat& x) {
  if (x.rows() != chan.dim() || x.cols() != chan.dim()) {
    throw DimensionMismatch("adjoint_apply: dims differ");
  }
  CMat out = CMat::Zero(chan.dim(), chan.dim());
  for (const auto& k : chan.kraus()) out += k.adjoint() * x * k;
  return out;
}

KrausChannel petz_inverse(const KrausChannel& chan, const DensityOperator& prior,
                          double eps) {
  if (chan.dim() != prior.dim()) throw DimensionMismatch("petz_inverse: dims differ");
  CMat push = apply_channel_raw(chan, prior.mat());
  push = (push + push.adjoint().eval()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(push, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= eps) {
    throw SingularPushforward("petz_inverse: pushforward near singular");
  }
  const CMat sqrt_prior = hermitian_sqrt(prior.mat());
  const CMat inv_sqrt_push = hermitian_inv_sqrt(push);
  std::vector<CMat> ks;
  ks.reserve(chan.kraus().size());
  for (const auto& k : chan.kraus()) {
    ks.push_back(sqrt_prior * k.adjoint() * inv_sqrt_push);
  }
  return KrausChannel(chan.dim(), std::move(ks));
}

TransferMatrix transfer_matrix(const KrausChannel& chan) {
  const int d = chan.dim();
  const auto& basis = hermitian_basis(d);
  const int n = d * d;
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    const CMat img = apply_channel_raw(chan, basis[j]);
    for (int i = 0; i < n; ++i) {
      m(i, j) = (basis[i].adjoint() * img).trace().real();
    }
  }
  // Trace preservation fixes the last row exactly.
  m.row(n - 1).setZero();
  m(n - 1, n - 1) = 1.0;
  return {d, std::move(m)};
}

double qad(const KrausChannel& chan) {
  return std::min(1.0, std::abs(transfer_matrix(chan).mat.determinant()));
}

double qfd(const KrausChannel& chan) {
  const int d = chan.dim();
  const int n = d * d;
  const Eigen::MatrixXd m = transfer_matrix(chan).mat;
  // Coefficient vector of the maximally mixed state in the Hermitian
  // basis: zero Bloch part, 1/sqrt(d) on the identity component.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c(n - 1) = 1.0 / std::sqrt(static_cast<double>(d));

  // Same doubling scheme as the classical fixed centroid, but the
  // convergence test tracks the centroid orbit itself: a unitary's
  // transfer matrix never settles while its centroid never moves.
  Eigen::MatrixXd a = m;
  Eigen::VectorXd v = a * c;
  int doublings = 0;
  const int max_doublings = 10000;
  bool settled = false;
  while (doublings < max_doublings) {
    a = a * a;
    ++doublings;
    Eigen::VectorXd w = a * c;
    const bool close = (w - v).cwiseAbs().maxCoeff() < 1e-12;
    v = w;
    if (close && doublings >= 8) {
      settled = true;
      break;
    }
  }

  int period = 0;
  Eigen::VectorXd probe = v;
  for (int r = 1; r <= 24; ++r) {
    probe = m * probe;
    if ((probe - v).cwiseAbs().maxCoeff() < 1e-9) {
      period = r;
      break;
    }
  }
  if (period == 0) {
    if (!settled) throw NoConvergence("qfd: centroid orbit has no short cycle");
    period = 1;
  }
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd cur = v;
  for (int s = 0; s < period; ++s) {
    acc += cur;
    cur = m * cur;
  }
  acc /= period;
  const double bloch = acc.head(n - 1).norm();
  const double pure = std::sqrt(1.0 - 1.0 / d);
  return std::min(1.0, bloch / pure);
}

KrausChannel compose_channels(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.dim() != inner.dim()) {
    throw DimensionMismatch("compose_channels: dims differ");
  }
  std::vector<CMat> ks;
  ks.reserve(outer.kraus().size() * inner.kraus().size());
  for (const auto& g : outer.kraus()) {
    for (const auto& f : inner.kraus()) ks.push_back(g * f);
  }
  KrausChannel out(outer.dim(), std::move(ks));
  const int d = outer.dim();
  if (static_cast<int>(out.kraus().size()) > d * d) return canonical_kraus(out);
  return out;
}

KrausChannel canonical_kraus(const KrausChannel& chan, double tol) {
  const int d = chan.dim();
  const int n = d * d;
  // Choi matrix with column-stacked vectorization.
  CMat choi = CMat::Zero(n, n);
  for (const auto& k : chan.kraus()) {
    CVec v(n);
    for (int j = 0; j < d; ++j) v.segment(j * d, d) = k.col(j);
    choi += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(choi);
  std::vector<CMat> ks;
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam <= tol) continue;
    CMat k(d, d);
    for (int j = 0; j < d; ++j) k.col(j) = es.eigenvectors().col(i).segment(j * d, d);
    ks.push_back(std::sqrt(lam) * k);
  }
  return KrausChannel(d, std::move(ks));
}

}  // namespace retrodict
