// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/classical.hpp"

#include <algorithm>
#include <cmath>

#include "power_limit.hpp"

namespace retrodict {

namespace {

constexpr double kTypeTol = 1e-12;
constexpr double kClassTol = 1e-9;

bool is_permutation_matrix(const Eigen::MatrixXd& m, double tol) {
  const int d = static_cast<int>(m.rows());
  std::vector<int> row_hits(d, 0);
  for (int j = 0; j < d; ++j) {
    int col_ones = 0;
    for (int i = 0; i < d; ++i) {
      const double v = m(i, j);
      if (std::abs(v - 1.0) < tol) {
        ++col_ones;
        ++row_hits[i];
      } else if (std::abs(v) >= tol) {
        return false;
      }
    }
    if (col_ones != 1) return false;
  }
  return std::all_of(row_hits.begin(), row_hits.end(), [](int h) { return h == 1; });
}

// Does m match the 3x3 spiral pattern
//   [0 0 p]
//   [1 0 q]
//   [0 1 *]   with p > tol,
// under simultaneous row/column relabeling?
bool matches_spiral_pattern(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != 3) return false;
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& s : perms) {
    auto e = [&](int i, int j) { return m(s[i], s[j]); };
    const bool zeros = std::abs(e(0, 0)) < tol && std::abs(e(0, 1)) < tol &&
                       std::abs(e(1, 1)) < tol && std::abs(e(2, 0)) < tol;
    const bool ones = std::abs(e(1, 0) - 1.0) < tol && std::abs(e(2, 1) - 1.0) < tol;
    if (zeros && ones && e(0, 2) > tol) return true;
  }
  return false;
}

}  // namespace

ProbVector::ProbVector(Eigen::VectorXd entries) : entries_(std::move(entries)) {
  if (entries_.size() < 1) throw InvalidValue("ProbVector: empty");
  if (entries_.minCoeff() < -kTypeTol || entries_.maxCoeff() > 1.0 + kTypeTol) {
    throw InvalidValue("ProbVector: entry outside [0,1]");
  }
  if (std::abs(entries_.sum() - 1.0) > kTypeTol) {
    throw InvalidValue("ProbVector: entries do not sum to 1");
  }
}

ProbVector ProbVector::uniform(int dim) {
  return ProbVector(Eigen::VectorXd::Constant(dim, 1.0 / dim));
}

ProbVector ProbVector::pure(int dim, int outcome) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(outcome) = 1.0;
  return ProbVector(std::move(v));
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw InvalidValue("StochasticMatrix: not square");
  }
  if (entries_.minCoeff() < -kTypeTol || entries_.maxCoeff() > 1.0 + kTypeTol) {
    throw InvalidValue("StochasticMatrix: entry outside [0,1]");
  }
  for (int j = 0; j < entries_.cols(); ++j) {
    if (std::abs(entries_.col(j).sum() - 1.0) > kTypeTol) {
      throw InvalidValue("StochasticMatrix: column does not sum to 1");
    }
  }
}

StochasticMatrix StochasticMatrix::identity(int dim) {
  return StochasticMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

StochasticMatrix StochasticMatrix::erasure(const ProbVector& target) {
  const int d = target.dim();
  Eigen::MatrixXd m(d, d);
  for (int j = 0; j < d; ++j) m.col(j) = target.vec();
  return StochasticMatrix(std::move(m));
}

StochasticMatrix StochasticMatrix::permutation(const std::vector<int>& sigma) {
  const int d = static_cast<int>(sigma.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a) m(sigma[a], a) = 1.0;
  return StochasticMatrix(std::move(m));
}

std::string ChannelClass::name() const {
  switch (tag) {
    case ChannelTag::Bijection:
      return "Bijection";
    case ChannelTag::Erasure:
      return "Erasure";
    case ChannelTag::Absorbing:
      return "Absorbing(" + std::to_string(absorbing_dim) + ")";
    case ChannelTag::PseudoAbsorbing:
      return "PseudoAbsorbing";
    case ChannelTag::Generic:
      return "Generic";
  }
  return "Generic";
}

ProbVector apply(const StochasticMatrix& map, const ProbVector& state) {
  if (map.dim() != state.dim()) throw DimensionMismatch("apply: dims differ");
  Eigen::VectorXd out = map.mat() * state.vec();
  // Rounding can nudge entries a hair outside [0,1]; re-clamp before
  // revalidating.
  out = out.cwiseMax(0.0).cwiseMin(1.0);
  out /= out.sum();
  return ProbVector(std::move(out));
}

StochasticMatrix bayes_inverse(const StochasticMatrix& map, const ProbVector& prior,
                               double eps) {
  if (map.dim() != prior.dim()) throw DimensionMismatch("bayes_inverse: dims differ");
  const int d = map.dim();
  const Eigen::VectorXd push = map.mat() * prior.vec();
  if (push.minCoeff() <= eps) {
    throw SingularPushforward("bayes_inverse: pushforward entry below threshold");
  }
  Eigen::MatrixXd inv(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) inv(i, j) = map(j, i) * prior(i) / push(j);
    inv.col(j) /= inv.col(j).sum();
  }
  return StochasticMatrix(std::move(inv));
}

double abs_determinant(const StochasticMatrix& map) {
  return std::min(1.0, std::abs(map.mat().determinant()));
}

FixedCentroidResult fixed_centroid(const StochasticMatrix& map) {
  const int d = map.dim();
  const auto pl = detail::power_limit(map.mat());
  Eigen::MatrixXd a = pl.limit;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  for (int s = 0; s < pl.period; ++s) {
    acc += a.rowwise().mean();
    if (s + 1 < pl.period) a = a * map.mat();
  }
  Eigen::VectorXd c = acc / pl.period;
  c = c.cwiseMax(0.0);
  c /= c.sum();
  return {ProbVector(std::move(c)), pl.period};
}

double cfd(const StochasticMatrix& map) {
  const int d = map.dim();
  const Eigen::VectorXd c = fixed_centroid(map).centroid.vec();
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(d, 1.0 / d);
  const double pure_dist = std::sqrt((d - 1.0) / d);
  return std::min(1.0, (c - u).norm() / pure_dist);
}

RelaxationTime relaxation_time(const StochasticMatrix& map, double z) {
  const double cad = abs_determinant(map);
  if (cad >= 1.0 - 1e-12) return {true, 0};
  if (cad <= 0.0) return {false, 1};
  // Nudge below the ceiling so exact-ratio cases are not pushed up a
  // step by determinant roundoff.
  const double t = std::ceil(-z / std::log10(cad) - 1e-9);
  return {false, std::max(1LL, static_cast<long long>(t))};
}

std::optional<double> skew(const StochasticMatrix& map) {
  if (map.dim() != 3) throw DimensionMismatch("skew: requires dimension 3");
  const Eigen::Vector3d c0 = map.mat().col(0);
  const Eigen::Vector3d c1 = map.mat().col(1);
  const Eigen::Vector3d c2 = map.mat().col(2);
  Eigen::Matrix<double, 3, 2> edges;
  edges.col(0) = c1 - c0;
  edges.col(1) = c2 - c0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(edges);
  if (svd.singularValues().minCoeff() < 1e-12) return std::nullopt;
  const Eigen::Vector3d v[3] = {c0, c1, c2};
  double angles[3];
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d e1 = v[(k + 1) % 3] - v[k];
    const Eigen::Vector3d e2 = v[(k + 2) % 3] - v[k];
    const double cosang =
        std::clamp(e1.dot(e2) / (e1.norm() * e2.norm()), -1.0, 1.0);
    angles[k] = std::acos(cosang) * 180.0 / M_PI;
  }
  const double amax = *std::max_element(angles, angles + 3);
  const double amin = *std::min_element(angles, angles + 3);
  return std::max(amax / 120.0, (60.0 - amin) / 60.0) - 0.5;
}

ChannelClass classify(const StochasticMatrix& map) {
  const int d = map.dim();
  const Eigen::MatrixXd& m = map.mat();
  if (is_permutation_matrix(m, kClassTol)) return {ChannelTag::Bijection, {}, 0};

  bool all_equal = true;
  for (int j = 1; j < d && all_equal; ++j) {
    all_equal = (m.col(j) - m.col(0)).cwiseAbs().maxCoeff() < kClassTol;
  }
  if (all_equal) return {ChannelTag::Erasure, m.col(0), 0};

  const bool has_deterministic = ((m.array() - 1.0).abs() < kClassTol).any();
  if (has_deterministic) {
    const auto pl = detail::power_limit(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pl.limit);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > kClassTol) ++rank;
    }
    // A genuine absorber confines into a sub-simplex spanned by pure
    // states, so the asymptotic image must contain that many pure
    // columns. Spirals collapse to an interior point and fail this.
    int pure_cols = 0;
    Eigen::MatrixXd a = pl.limit;
    for (int s = 0; s < pl.period; ++s) {
      int here = 0;
      for (int j = 0; j < d; ++j) {
        if ((a.col(j).array() - 1.0).abs().minCoeff() < kClassTol &&
            a.col(j).maxCoeff() > 1.0 - kClassTol) {
          ++here;
        }
      }
      pure_cols = std::max(pure_cols, here);
      if (s + 1 < pl.period) a = a * m;
    }
    if (rank < d && pure_cols >= rank) return {ChannelTag::Absorbing, {}, rank};
  }

  if (matches_spiral_pattern(m, kClassTol)) return {ChannelTag::PseudoAbsorbing, {}, 0};
  return {ChannelTag::Generic, {}, 0};
}

StochasticMatrix compose(const StochasticMatrix& outer, const StochasticMatrix& inner) {
  if (outer.dim() != inner.dim()) throw DimensionMismatch("compose: dims differ");
  Eigen::MatrixXd p = outer.mat() * inner.mat();
  for (int j = 0; j < p.cols(); ++j) p.col(j) /= p.col(j).sum();
  return StochasticMatrix(std::move(p));
}

double spectral_norm_distance(const StochasticMatrix& a, const StochasticMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("spectral_norm_distance: dims differ");
  const Eigen::MatrixXd diff = a.mat() - b.mat();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff.transpose() * diff);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace retrodict
