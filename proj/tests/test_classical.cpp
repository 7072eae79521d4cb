// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "retrodict/classical.hpp"
#include "retrodict/rng.hpp"
#include "retrodict/samplers.hpp"

using namespace retrodict;

namespace {

StochasticMatrix from_cols(std::initializer_list<std::initializer_list<double>> cols) {
  const int d = static_cast<int>(cols.size());
  Eigen::MatrixXd m(d, d);
  int j = 0;
  for (const auto& c : cols) {
    int i = 0;
    for (double v : c) m(i++, j) = v;
    ++j;
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix random_channel(int d, RngStream& rng) {
  Eigen::MatrixXd m(d, d);
  for (int j = 0; j < d; ++j) m.col(j) = sample_simplex(d, rng).vec();
  return StochasticMatrix(std::move(m));
}

ProbVector interior_prior(int d, RngStream& rng) {
  for (;;) {
    ProbVector p = sample_simplex(d, rng);
    if (p.min_entry() > 1e-6) return p;
  }
}

}  // namespace

TEST_CASE("apply: identity, erasure, explicit product") {
  ProbVector p(Eigen::Vector2d(0.3, 0.7));
  CHECK(apply(StochasticMatrix::identity(2), p).vec().isApprox(p.vec(), 1e-14));

  ProbVector tau(Eigen::Vector2d(0.6, 0.4));
  auto er = StochasticMatrix::erasure(tau);
  CHECK(apply(er, p).vec().isApprox(tau.vec(), 1e-14));

  auto z = from_cols({{1.0, 0.0}, {0.5, 0.5}});
  ProbVector u = ProbVector::uniform(2);
  auto out = apply(z, u);
  CHECK(out(0) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(out(1) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("bayes_inverse: permutation transpose, erasure, Z closed form") {
  RngStream rng(11, 0);
  auto perm = StochasticMatrix::permutation({2, 0, 1});
  for (int k = 0; k < 20; ++k) {
    auto g = interior_prior(3, rng);
    auto inv = bayes_inverse(perm, g);
    CHECK((inv.mat() - perm.mat().transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  ProbVector tau(Eigen::Vector3d(0.2, 0.5, 0.3));
  auto er = StochasticMatrix::erasure(tau);
  auto g = interior_prior(3, rng);
  auto inv = bayes_inverse(er, g);
  for (int j = 0; j < 3; ++j) {
    CHECK((inv.mat().col(j) - g.vec()).cwiseAbs().maxCoeff() < 1e-12);
  }

  auto z = from_cols({{1.0, 0.0}, {0.5, 0.5}});
  auto zi = bayes_inverse(z, ProbVector::uniform(2));
  CHECK(zi(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(zi(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(zi(0, 1) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(zi(1, 1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("bayes_inverse: singular pushforward rejected") {
  auto er = StochasticMatrix::erasure(ProbVector::pure(2, 0));
  CHECK_THROWS_AS(bayes_inverse(er, ProbVector::uniform(2)), SingularPushforward);
}

TEST_CASE("abs_determinant anchors") {
  CHECK(abs_determinant(StochasticMatrix::permutation({1, 2, 0})) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(abs_determinant(StochasticMatrix::erasure(ProbVector::uniform(3))) ==
        doctest::Approx(0.0).epsilon(1e-13));
  auto m = from_cols({{0.9, 0.1}, {0.2, 0.8}});
  CHECK(abs_determinant(m) == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("fixed_centroid: bijection, deterministic absorber, bit channel") {
  auto fc = fixed_centroid(StochasticMatrix::permutation({1, 2, 0}));
  CHECK((fc.centroid.vec() - Eigen::Vector3d::Constant(1.0 / 3)).cwiseAbs().maxCoeff() <
        1e-12);

  // All mass drains to state 0.
  auto abs1 = from_cols({{1.0, 0.0, 0.0}, {0.7, 0.3, 0.0}, {0.2, 0.3, 0.5}});
  auto fc2 = fixed_centroid(abs1);
  CHECK(fc2.centroid(0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(cfd(abs1) == doctest::Approx(1.0).epsilon(1e-10));

  auto m = from_cols({{0.9, 0.1}, {0.2, 0.8}});
  auto fc3 = fixed_centroid(m);
  CHECK(fc3.centroid(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(fc3.period == 1);
}

TEST_CASE("fixed_centroid: alternating absorber cycles and averages to cfd 0.5") {
  // States 0 and 1 swap forever; the transient leaks into the pair.
  const double p = 0.25, q = 0.45;
  Eigen::MatrixXd m(3, 3);
  m << 0, 1, p, 1, 0, q, 0, 0, 1 - p - q;
  StochasticMatrix alt{std::move(m)};
  auto fc = fixed_centroid(alt);
  CHECK(fc.period > 1);
  CHECK(cfd(alt) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cfd of bijections is 0") {
  CHECK(cfd(StochasticMatrix::permutation({2, 0, 1, 3})) == doctest::Approx(0.0));
  CHECK(cfd(StochasticMatrix::identity(5)) == doctest::Approx(0.0));
}

TEST_CASE("relaxation_time anchors") {
  auto with_det = [](double det) {
    Eigen::MatrixXd m(2, 2);
    const double a = (1.0 + det) / 2.0;
    m << a, 1 - a, 1 - a, a;
    return StochasticMatrix(std::move(m));
  };
  CHECK(relaxation_time(with_det(0.1), 1.0).steps == 1);
  CHECK(relaxation_time(with_det(0.5), 2.0).steps == 7);
  CHECK(relaxation_time(StochasticMatrix::identity(2), 1.0).is_infinite);
  CHECK(relaxation_time(StochasticMatrix::erasure(ProbVector::uniform(2)), 3.0).steps == 1);
}

TEST_CASE("skew: equilateral, near-degenerate, undefined") {
  CHECK(skew(StochasticMatrix::identity(3)).value() == doctest::Approx(0.0).epsilon(1e-12));

  // Middle vertex nudged barely off the segment between the outer two:
  // its interior angle approaches 180 degrees, skew approaches 1.
  const double eps = 1e-4;
  auto flat = from_cols({{0.8, 0.1, 0.1},
                         {0.5, 0.25 + eps, 0.25 - eps},
                         {0.2, 0.4, 0.4}});
  auto s = skew(flat);
  REQUIRE(s.has_value());
  CHECK(*s > 0.99);
  CHECK(*s < 1.0);

  CHECK(!skew(StochasticMatrix::erasure(ProbVector::uniform(3))).has_value());
  CHECK_THROWS_AS(skew(StochasticMatrix::identity(2)), DimensionMismatch);
}

TEST_CASE("classify: spec anchors") {
  CHECK(classify(StochasticMatrix::permutation({1, 2, 0})).tag == ChannelTag::Bijection);
  auto er = classify(StochasticMatrix::erasure(ProbVector(Eigen::Vector3d(0.2, 0.3, 0.5))));
  CHECK(er.tag == ChannelTag::Erasure);

  auto ups = construct_absorbing(3, 2, Eigen::MatrixXd::Constant(2, 1, 0.3),
                                 Eigen::MatrixXd::Constant(1, 1, 0.4), {0, 1, 2}, {0, 1});
  auto c = classify(ups);
  CHECK(c.tag == ChannelTag::Absorbing);
  CHECK(c.absorbing_dim == 2);

  auto spiral = construct_spiral(0.3, 0.3, {0, 1, 2});
  CHECK(classify(spiral).tag == ChannelTag::PseudoAbsorbing);

  RngStream rng(3, 0);
  CHECK(classify(random_channel(3, rng)).tag == ChannelTag::Generic);
}

TEST_CASE("compose: identity, erasure pushthrough, hand product") {
  RngStream rng(5, 0);
  auto phi = random_channel(3, rng);
  CHECK(compose(phi, StochasticMatrix::identity(3)).mat().isApprox(phi.mat(), 1e-13));

  ProbVector tau(Eigen::Vector3d(0.1, 0.6, 0.3));
  auto after = compose(phi, StochasticMatrix::erasure(tau));
  auto expect = StochasticMatrix::erasure(apply(phi, tau));
  CHECK((after.mat() - expect.mat()).cwiseAbs().maxCoeff() < 1e-12);

  auto a = from_cols({{0.9, 0.1}, {0.2, 0.8}});
  auto b = from_cols({{0.5, 0.5}, {0.3, 0.7}});
  auto ab = compose(a, b);
  CHECK(ab(0, 0) == doctest::Approx(0.9 * 0.5 + 0.2 * 0.5).epsilon(1e-13));
  CHECK(ab(0, 1) == doctest::Approx(0.9 * 0.3 + 0.2 * 0.7).epsilon(1e-13));
}

TEST_CASE("spectral_norm_distance anchors") {
  auto a = from_cols({{0.9, 0.1}, {0.2, 0.8}});
  CHECK(spectral_norm_distance(a, a) == doctest::Approx(0.0));
  auto e0 = StochasticMatrix::erasure(ProbVector::pure(2, 0));
  auto e1 = StochasticMatrix::erasure(ProbVector::pure(2, 1));
  CHECK(spectral_norm_distance(e0, e1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("property: recoverability and composability of the inverse") {
  RngStream rng(17, 0);
  for (int k = 0; k < 40; ++k) {
    const int d = 2 + static_cast<int>(rng.uniform_index(3));
    auto phi = random_channel(d, rng);
    auto psi = random_channel(d, rng);
    auto g = interior_prior(d, rng);
    StochasticMatrix inv = bayes_inverse(phi, g);
    auto recovered = apply(inv, apply(phi, g));
    CHECK((recovered.vec() - g.vec()).cwiseAbs().maxCoeff() < 1e-10);

    auto lhs = bayes_inverse(compose(psi, phi), g);
    auto rhs = compose(bayes_inverse(phi, g), bayes_inverse(psi, apply(phi, g)));
    CHECK((lhs.mat() - rhs.mat()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("property: prior independence iff bijection") {
  RngStream rng(23, 0);
  auto perm = StochasticMatrix::permutation({1, 0, 2});
  for (int k = 0; k < 100; ++k) {
    auto g = interior_prior(3, rng);
    CHECK((bayes_inverse(perm, g).mat() - perm.mat().transpose()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  auto phi = random_channel(3, rng);
  bool found_distinct = false;
  auto base = bayes_inverse(phi, interior_prior(3, rng));
  for (int k = 0; k < 50 && !found_distinct; ++k) {
    auto other = bayes_inverse(phi, interior_prior(3, rng));
    found_distinct = (other.mat() - base.mat()).cwiseAbs().maxCoeff() > 1e-6;
  }
  CHECK(found_distinct);
}

TEST_CASE("property: determinant multiplicative under compose") {
  RngStream rng(29, 0);
  for (int k = 0; k < 30; ++k) {
    const int d = 2 + static_cast<int>(rng.uniform_index(3));
    auto a = random_channel(d, rng);
    auto b = random_channel(d, rng);
    CHECK(abs_determinant(compose(a, b)) ==
          doctest::Approx(abs_determinant(a) * abs_determinant(b)).epsilon(1e-9));
  }
}
