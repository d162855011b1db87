#include "padlab/dynamics.hpp"
#include "padlab/error.hpp"

#include <algorithm>

namespace padlab {

Factorization horospherical_factor(const PadicMatrix& g, int k, const HorosphericalDecomposition& dec) {
  if (k < 2) fail(ErrorCode::level_too_small, "factorization needs k >= 2");
  if (!ball_membership(g, dec.group, k)) fail(ErrorCode::domain_error, "g is not in K^G_k");
  const PadicContext& ctx = g.context();
  const PadicMatrix e = PadicMatrix::identity(ctx, g.rows());
  const int goal = ctx.precision();

  // Invariant: g = F r H. Each round writes log r = v + w with v unstable and
  // w thickened stable, and replaces r by exp(-v) r exp(-w), whose distance to
  // e is at least squared.
  PadicMatrix r = g, f = e, h = e;
  int dist = norm_valuation_bound(r - e);
  int rounds = 0;
  while (dist < goal) {
    if (rounds == 64) fail(ErrorCode::no_convergence, "factorization did not converge in 64 rounds");
    const auto c = dec.eigen_coordinates(log(r));
    std::vector<PadicScalar> cv(c.size(), PadicScalar::zero(ctx)), cw = cv;
    for (std::size_t i = 0; i < c.size(); ++i)
      (dec.classes[i] == EigenClass::unstable ? cv : cw)[i] = c[i];
    const PadicMatrix v = dec.from_eigen_coordinates(cv);
    const PadicMatrix w = dec.from_eigen_coordinates(cw);
    // Projections larger than log r mean the eigenbasis is not adapted to the lattice.
    if (std::min(norm_valuation_bound(v), norm_valuation_bound(w)) < dist)
      fail(ErrorCode::no_convergence, "eigen projections of log r exceed its norm; decomposition is not adapted");
    r =exp(-v) * r * exp(-w);
    f = f * exp(v);
    h = exp(w) * h;
    ++rounds;
    const int next = norm_valuation_bound(r - e);
    if (next <= dist)
      fail(ErrorCode::no_convergence, "residual stopped shrinking at p^-" + std::to_string(next));
    dist = next;
  }
  return {f, h, rounds};
}

}  // namespace padlab
