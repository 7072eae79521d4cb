// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "retrodict/errors.hpp"

namespace retrodict {

// Coordinates of a bit channel: absolute determinant D and normalized
// fixed-centroid distance F, both in [0,1]. Every pair in the unit
// square is realizable by some bit channel.
struct BitCoords {
  double D = 0.0;
  double F = 0.0;
};

// Closed-form subjectivity of a bit channel at the given coordinates:
// the integral over prior pairs of the squared spectral distance
// between retrodiction maps. Evaluates f(z+) + f(z-) with
// z(+/-) = D / (1 +/- F (1 - D)) and
// f(z) = (z^-2 - 1) [1 - (z^-2 - 1) arctanh^2 z],
// series-stabilized near z = 0 and z = 1.
double bit_subjectivity_analytic(const BitCoords& c);

// Closed-form average change in divergence:
// (D/4) [g(z+) + g(z-)] with g(z) = (z^-2 - 1) arctanh z and the same
// arguments; exact for the KL-contraction integral over flat priors.
double bit_divchange_analytic(const BitCoords& c);

}  // namespace retrodict
