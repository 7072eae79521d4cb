// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "retrodict/errors.hpp"

namespace retrodict::detail {

struct PowerLimit {
  // m^t for t large enough that every transient below machine noise is
  // dead (t = 2^64 unless squaring converged earlier).
  Eigen::MatrixXd limit;
  // Smallest r <= 24 with limit * m^r == limit (max-norm, cycle_tol);
  // r = 1 is a genuine fixed point.
  int period = 1;
};

// Asymptotic power of a matrix with peripheral spectrum on roots of
// unity (stochastic matrices, channel transfer matrices). Repeated
// squaring until stationary or 64 doublings, then a short cycle search;
// squaring continues if no cycle shows up.
inline PowerLimit power_limit(const Eigen::MatrixXd& m, double conv_tol = 1e-12,
                              double cycle_tol = 1e-9, int max_doublings = 10000) {
  Eigen::MatrixXd a = m;
  int doublings = 0;
  auto square_until = [&](int cap) {
    while (doublings < cap) {
      Eigen::MatrixXd b = a * a;
      ++doublings;
      if ((b - a).cwiseAbs().maxCoeff() < conv_tol) {
        a = b;
        return true;
      }
      a = b;
    }
    return false;
  };
  square_until(64);
  while (true) {
    Eigen::MatrixXd c = a;
    for (int r = 1; r <= 24; ++r) {
      c = c * m;
      if ((c - a).cwiseAbs().maxCoeff() < cycle_tol) return {a, r};
    }
    if (doublings >= max_doublings) {
      throw NoConvergence("power iteration: no fixed point or short cycle");
    }
    square_until(doublings + 64);
  }
}

}  // namespace retrodict::detail
