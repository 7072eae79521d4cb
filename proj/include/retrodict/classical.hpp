// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "retrodict/errors.hpp"

namespace retrodict {

// Probability vector on d outcomes. Entries in [0,1], summing to 1,
// both within 1e-12.
class ProbVector {
 public:
  explicit ProbVector(Eigen::VectorXd entries);
  static ProbVector uniform(int dim);
  static ProbVector pure(int dim, int outcome);

  int dim() const { return static_cast<int>(entries_.size()); }
  double operator()(int a) const { return entries_(a); }
  const Eigen::VectorXd& vec() const { return entries_; }
  double min_entry() const { return entries_.minCoeff(); }

 private:
  Eigen::VectorXd entries_;
};

// Column-stochastic d x d matrix; entry (a', a) is the transition
// probability a -> a'.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd entries);
  static StochasticMatrix identity(int dim);
  // Every column equals the target: the constant map.
  static StochasticMatrix erasure(const ProbVector& target);
  // Maps outcome a to sigma[a].
  static StochasticMatrix permutation(const std::vector<int>& sigma);

  int dim() const { return static_cast<int>(entries_.rows()); }
  double operator()(int to, int from) const { return entries_(to, from); }
  const Eigen::MatrixXd& mat() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

enum class ChannelTag { Bijection, Erasure, Absorbing, PseudoAbsorbing, Generic };

struct ChannelClass {
  ChannelTag tag = ChannelTag::Generic;
  // For Erasure: the common column.
  std::optional<Eigen::VectorXd> fixed;
  // For Absorbing: dimension n of the absorbing sub-simplex.
  int absorbing_dim = 0;

  std::string name() const;
};

// Number of steps or unbounded; the latter happens exactly at
// determinant magnitude 1.
struct RelaxationTime {
  bool is_infinite = false;
  long long steps = 1;
};

ProbVector apply(const StochasticMatrix& map, const ProbVector& state);

// Retrodiction map with respect to the reference prior:
// entry (a, a') = map(a'|a) prior(a) / pushforward(a'). Requires every
// pushforward entry above eps.
StochasticMatrix bayes_inverse(const StochasticMatrix& map, const ProbVector& prior,
                               double eps = 1e-9);

// |det| of the matrix; fraction of simplex volume preserved.
double abs_determinant(const StochasticMatrix& map);

struct FixedCentroidResult {
  ProbVector centroid;
  // 1 for a genuine fixed point; >1 when the asymptotic image cycles
  // and the centroid is a period average.
  int period;
};

// Centroid of the asymptotic image: repeated squaring with cycle
// detection and period averaging.
FixedCentroidResult fixed_centroid(const StochasticMatrix& map);

// Distance of the fixed centroid from uniform, normalized so a pure
// centroid scores 1.
double cfd(const StochasticMatrix& map);

// ceil(-z / log10 |det|), clamped to >= 1; Infinite at |det| = 1 and 1
// at |det| = 0.
RelaxationTime relaxation_time(const StochasticMatrix& map, double z);

// Triangle irregularity of a trit map's image; nullopt when the image
// is degenerate (affine rank < 2).
std::optional<double> skew(const StochasticMatrix& map);

ChannelClass classify(const StochasticMatrix& map);

StochasticMatrix compose(const StochasticMatrix& outer, const StochasticMatrix& inner);

// Largest singular value of (a - b).
double spectral_norm_distance(const StochasticMatrix& a, const StochasticMatrix& b);

}  // namespace retrodict
