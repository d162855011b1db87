#pragma once

#include "padlab/matrix.hpp"
#include "padlab/padic.hpp"

#include <vector>

namespace padlab {

// Polynomial over Q_p, coefficients stored lowest degree first.
struct Polynomial {
  std::vector<PadicScalar> coeffs;

  static Polynomial from_rationals(const std::vector<Rational>& low_to_high, PadicContext ctx);

  int degree() const;
  const PadicContext& context() const { return coeffs.front().context(); }
  PadicScalar operator()(const PadicScalar& x) const;
  Polynomial derivative() const;
  // Coefficients of t -> f(c + t).
  Polynomial taylor_shift(const PadicScalar& c) const;
};

// det(xI - M), via the division-free Berkowitz recursion.
Polynomial char_poly(const PadicMatrix& m);

struct PolynomialRoot {
  PadicScalar value;
  int multiplicity = 1;
};

// Roots in Q_p with multiplicities, ordered by increasing valuation and then
// by digits. Root valuations come from the Newton polygon; each slope segment
// is rescaled to unit roots and split digit by digit. A cluster that stays
// together until the certified digits run out is reported once with the
// cluster size as multiplicity, and snapped to a small rational when one
// verifies. Throws NotSplitAtPrecision if some root lies outside Q_p.
std::vector<PolynomialRoot> hensel_roots(const Polynomial& f);

}  // namespace padlab
