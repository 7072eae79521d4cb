// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/bit_analytic.hpp"

#include <cmath>

namespace retrodict {

namespace {

// f(z) = (z^-2 - 1) [1 - (z^-2 - 1) arctanh^2 z].
// The bracket collapses to z^2/3 + O(z^4) near zero, a catastrophic
// cancellation in the direct form; switch to its series there.
double f_subjectivity(double z) {
  if (z >= 1.0 - 1e-12) return 0.0;
  if (z < 1e-2) {
    const double z2 = z * z;
    // 1/3 - (8/45) z^2 - (2/35) z^4 + O(z^6)
    return 1.0 / 3.0 - (8.0 / 45.0) * z2 - (2.0 / 35.0) * z2 * z2;
  }
  const double a = 1.0 / (z * z) - 1.0;
  const double w = std::atanh(z);
  return a * (1.0 - a * w * w);
}

// g(z) = (z^-2 - 1) arctanh z. Harmless ~1/z growth near zero; the
// caller's D/4 prefactor cancels it.
double g_divchange(double z) {
  if (z >= 1.0 - 1e-12) return 0.0;
  return (1.0 / (z * z) - 1.0) * std::atanh(z);
}

void check_coords(const BitCoords& c) {
  if (!(c.D >= 0.0 && c.D <= 1.0 && c.F >= 0.0 && c.F <= 1.0)) {
    throw DomainError("bit coordinates outside the unit square");
  }
}

}  // namespace

double bit_subjectivity_analytic(const BitCoords& c) {
  check_coords(c);
  const double zp = c.D / (1.0 + c.F * (1.0 - c.D));
  const double zm_den = 1.0 - c.F * (1.0 - c.D);
  // F = 1, D = 0 degenerates; approach along D with the erasure limit.
  const double zm = zm_den <= 1e-14 ? 0.0 : c.D / zm_den;
  if (zm > 1.0 + 1e-12) throw DomainError("bit coordinates give z outside (0,1]");
  return f_subjectivity(zp) + f_subjectivity(std::min(1.0, zm));
}

double bit_divchange_analytic(const BitCoords& c) {
  check_coords(c);
  if (c.D < 1e-12) {
    // Limit D -> 0: (D/4)(1/z+ + 1/z-) -> ((1+F) + (1-F))/4.
    return 0.5;
  }
  const double zp = c.D / (1.0 + c.F * (1.0 - c.D));
  const double zm_den = 1.0 - c.F * (1.0 - c.D);
  const double zm = zm_den <= 1e-14 ? 1e-14 : c.D / zm_den;
  if (zm > 1.0 + 1e-12) throw DomainError("bit coordinates give z outside (0,1]");
  return (c.D / 4.0) * (g_divchange(zp) + g_divchange(std::min(1.0, zm)));
}

}  // namespace retrodict
