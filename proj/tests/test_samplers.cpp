// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "retrodict/classical.hpp"
#include "retrodict/quantum.hpp"
#include "retrodict/rng.hpp"
#include "retrodict/samplers.hpp"

using namespace retrodict;

TEST_CASE("sample_simplex: validity, mean, determinism") {
  RngStream rng(42, 7);
  auto p = sample_simplex(3, rng);
  CHECK(std::abs(p.vec().sum() - 1.0) < 1e-12);

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    RngStream s(123, static_cast<std::uint64_t>(i));
    mean += sample_simplex(3, s).vec();
  }
  mean /= n;
  CHECK((mean - Eigen::Vector3d::Constant(1.0 / 3)).cwiseAbs().maxCoeff() < 0.01);

  RngStream s1(9, 4), s2(9, 4);
  CHECK(sample_simplex(4, s1).vec() == sample_simplex(4, s2).vec());
}

TEST_CASE("haar_unitary: unitarity and rotation invariance") {
  RngStream rng(1, 0);
  for (int t = 0; t < 10; ++t) {
    const CMat u = haar_unitary(3, rng);
    CHECK((u.adjoint() * u - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(std::abs(u.determinant()) - 1.0) < 1e-10);
  }

  // |<0|U|0>|^2 should be Beta(1, d-1)-distributed and invariant under
  // a fixed left rotation; compare the two empirical means.
  const CMat fixed = haar_unitary(2, rng);
  double mean_plain = 0, mean_rotated = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    RngStream s(77, static_cast<std::uint64_t>(i));
    const CMat u = haar_unitary(2, s);
    mean_plain += std::norm(u(0, 0));
    mean_rotated += std::norm((fixed * u)(0, 0));
  }
  mean_plain /= n;
  mean_rotated /= n;
  CHECK(std::abs(mean_plain - 0.5) < 0.02);
  CHECK(std::abs(mean_plain - mean_rotated) < 0.02);
}

TEST_CASE("sample_qubit_gad_grid: coordinate identities") {
  // gamma = 1 - sqrt(u) makes |det T| = u; the fixed-point norm is
  // |2p - 1| = f for the unsandwiched channel.
  GridCell cell{0.2, 0.3, 0.4, 0.5, 1};
  for (int i = 0; i < 50; ++i) {
    RngStream rng(5, static_cast<std::uint64_t>(i));
    auto s = sample_qubit_gad_grid(cell, rng);
    CHECK(s.det_coord >= cell.u_lo);
    CHECK(s.det_coord <= cell.u_hi);
    CHECK(s.fix_coord >= cell.f_lo);
    CHECK(s.fix_coord <= cell.f_hi);
    // Realized channel agrees with the recorded coordinates.
    auto chan = dilation_to_kraus(s.dilation);
    CHECK(qad(chan) == doctest::Approx(s.det_coord).epsilon(1e-8));
    CHECK(qfd(chan) == doctest::Approx(s.fix_coord).epsilon(1e-7));
  }
}

TEST_CASE("sample_qubit_gad_grid: determinism and fallback works near u=1") {
  GridCell cell{0.9, 1.0, 0.0, 0.1, 1};
  RngStream a(3, 12), b(3, 12);
  auto s1 = sample_qubit_gad_grid(cell, a);
  auto s2 = sample_qubit_gad_grid(cell, b);
  CHECK(s1.det_coord == s2.det_coord);
  CHECK(s1.fix_coord == s2.fix_coord);
  CHECK((s1.dilation.unitary() - s2.dilation.unitary()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_trit_channel_restricted: validity and extremes") {
  RngStream rng(8, 0);
  for (int t = 0; t < 20; ++t) {
    auto m = sample_trit_channel_restricted(0.3, rng);
    CHECK(m.dim() == 3);
    for (int j = 0; j < 3; ++j) {
      CHECK(m(0, j) + m(1, j) <= 0.7 + 1e-12);
      CHECK(m(2, j) >= 0.3 - 1e-12);
    }
  }
  auto hard = sample_trit_channel_restricted(1.0, rng);
  for (int j = 0; j < 3; ++j) {
    CHECK(hard(2, j) == doctest::Approx(1.0));
  }
  // D = 0 covers the full simplex: some draw should reach each corner
  // region.
  double max0 = 0, max1 = 0, max2 = 0;
  for (int i = 0; i < 10000; ++i) {
    RngStream s(21, static_cast<std::uint64_t>(i));
    auto m = sample_trit_channel_restricted(0.0, s);
    max0 = std::max(max0, m(0, 0));
    max1 = std::max(max1, m(1, 0));
    max2 = std::max(max2, m(2, 0));
  }
  CHECK(max0 > 0.97);
  CHECK(max1 > 0.97);
  CHECK(max2 > 0.97);
}

TEST_CASE("construct_absorbing: spec anchors and validation") {
  Eigen::MatrixXd r(2, 1), q(1, 1);
  r << 0.3, 0.3;
  q << 0.4;
  auto ups = construct_absorbing(3, 2, r, q, {0, 1, 2}, {0, 1});
  CHECK(classify(ups).tag == ChannelTag::Absorbing);
  CHECK(classify(ups).absorbing_dim == 2);

  // Deterministic single-state absorber: everything drains to state 0.
  Eigen::MatrixXd r1(1, 2), q1(2, 2);
  r1 << 1.0, 1.0;
  q1.setZero();
  auto det_abs = construct_absorbing(3, 1, r1, q1, {0, 1, 2}, {0});
  CHECK(cfd(det_abs) == doctest::Approx(1.0).epsilon(1e-10));

  // Alternating absorber: inner bit flip pins the centroid midway.
  Eigen::MatrixXd r2(2, 1), q2(1, 1);
  r2 << 0.25, 0.45;
  q2 << 0.3;
  auto alt = construct_absorbing(3, 2, r2, q2, {0, 1, 2}, {1, 0});
  CHECK(cfd(alt) == doctest::Approx(0.5).epsilon(1e-10));

  Eigen::MatrixXd zero_r = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(construct_absorbing(3, 2, zero_r, q2, {0, 1, 2}, {1, 0}),
                  InvalidBlocks);
  Eigen::MatrixXd stuck_q(1, 1);
  stuck_q << 1.0;
  CHECK_THROWS_AS(
      construct_absorbing(3, 2, Eigen::MatrixXd::Zero(2, 1), stuck_q, {0, 1, 2}, {0, 1}),
      InvalidBlocks);
}

TEST_CASE("construct_spiral: classification, fixed inverse entries, domain") {
  auto spiral = construct_spiral(0.3, 0.3, {0, 1, 2});
  CHECK(classify(spiral).tag == ChannelTag::PseudoAbsorbing);

  // Five entries of the retrodiction map carry no prior dependence:
  // the 0/1 skeleton of the cycle.
  for (int t = 0; t < 10; ++t) {
    RngStream rng(13, static_cast<std::uint64_t>(t));
    ProbVector g = sample_simplex(3, rng);
    if (g.min_entry() < 1e-6) continue;
    auto inv = bayes_inverse(spiral, g);
    CHECK(std::abs(inv(0, 0)) < 1e-12);
    CHECK(std::abs(inv(1, 0)) < 1e-12);
    CHECK(inv(2, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inv(1, 1)) < 1e-12);
    CHECK(std::abs(inv(0, 2)) < 1e-12);
  }

  CHECK_THROWS_AS(construct_spiral(0.0, 0.3, {0, 1, 2}), DomainError);
  CHECK_THROWS_AS(construct_spiral(0.5, 0.6, {0, 1, 2}), DomainError);
}

TEST_CASE("random_absorbing satisfies the displacement bounds") {
  int tested = 0;
  for (int t = 0; tested < 200; ++t) {
    RngStream rng(31, static_cast<std::uint64_t>(t));
    const int d = 3 + static_cast<int>(rng.uniform_index(3));
    const int n = 1 + static_cast<int>(rng.uniform_index(d - 1));
    auto ups = random_absorbing(d, n, rng);
    const double v = cfd(ups);
    const double lower = std::sqrt((d - n) / ((d - 1.0) * n));
    const double upper = std::sqrt((d - n) * (d + 1.0 - n) / ((d - 1.0) * d));
    CHECK(v >= lower - 1e-9);
    CHECK(v < upper + 1e-9);
    ++tested;
  }
}
