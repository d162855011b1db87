#include "padlab/polynomial.hpp"

#include "padlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace padlab {

Polynomial Polynomial::from_rationals(const std::vector<Rational>& low_to_high, PadicContext ctx) {
  Polynomial f;
  for (const auto& q : low_to_high) f.coeffs.push_back(PadicScalar::from_rational(q, ctx));
  if (f.coeffs.empty()) f.coeffs.push_back(PadicScalar::zero(ctx));
  return f;
}

int Polynomial::degree() const { return static_cast<int>(coeffs.size()) - 1; }

PadicScalar Polynomial::operator()(const PadicScalar& x) const {
  PadicScalar acc = PadicScalar::zero(x.context());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    d.coeffs.push_back(PadicScalar::from_integer(static_cast<std::int64_t>(i), context()) * coeffs[i]);
  if (d.coeffs.empty()) d.coeffs.push_back(PadicScalar::zero(context()));
  return d;
}

Polynomial Polynomial::taylor_shift(const PadicScalar& c) const {
  Polynomial g = *this;
  if (c.is_exact_zero()) return g;
  const std::size_t n = g.coeffs.size() - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n; j-- > i;) g.coeffs[j] += c * g.coeffs[j + 1];
  return g;
}

Polynomial char_poly(const PadicMatrix& a) {
  if (!a.is_square()) fail(ErrorCode::dimension_mismatch, "char_poly needs a square matrix");
  const PadicContext& ctx = a.context();
  const std::size_t n = a.rows();
  // vect holds coefficients highest degree first.
  std::vector<PadicScalar> vect{PadicScalar::one(ctx), -a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // Toeplitz column [1, -a_rr, -R C, -R A C, ..., -R A^(r-1) C].
    std::vector<PadicScalar> col{PadicScalar::one(ctx), -a(r, r)};
    std::vector<PadicScalar> v(r, PadicScalar::zero(ctx));  // A^j C
    for (std::size_t i = 0; i < r; ++i) v[i] = a(i, r);
    for (std::size_t j = 0; j < r; ++j) {
      PadicScalar dot = PadicScalar::zero(ctx);
      for (std::size_t i = 0; i < r; ++i) dot += a(r, i) * v[i];
      col.push_back(-dot);
      std::vector<PadicScalar> next(r, PadicScalar::zero(ctx));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < r; ++k) next[i] += a(i, k) * v[k];
      v = std::move(next);
    }
    std::vector<PadicScalar> out(r + 2, PadicScalar::zero(ctx));
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) out[i] += col[i - j] * vect[j];
    vect = std::move(out);
  }
  Polynomial f;
  f.coeffs.assign(vect.rbegin(), vect.rend());
  return f;
}

namespace {

struct RawRoot {
  PadicScalar center;  // unit-disk coordinate y
  int depth;           // digits of y that are determined
  int multiplicity;
  bool exact;
};

// Number of roots of sum c_j u^j with v(u) >= 0: the largest index where the
// coefficient valuation is minimal. nullopt when an uncertified coefficient
// could change the answer.
std::optional<int> count_integral_roots(const Polynomial& h) {
  int best = kInfiniteValuation;
  int idx = -1;
  for (std::size_t j = 0; j < h.coeffs.size(); ++j) {
    const PadicScalar& c = h.coeffs[j];
    if (c.is_value() && c.valuation() <= best) {
      best = c.valuation();
      idx = static_cast<int>(j);
    }
  }
  if (idx < 0) return std::nullopt;
  for (const auto& c : h.coeffs)
    if (c.is_approx_zero() && c.valuation_lower_bound() <= best) return std::nullopt;
  return idx;
}

Polynomial rescale(const Polynomial& h, int step) {
  Polynomial g = h;
  for (std::size_t j = 0; j < g.coeffs.size(); ++j)
    g.coeffs[j] = g.coeffs[j] * PadicScalar::power_of_p(static_cast<int>(j) * step, h.context());
  return g;
}

class Splitter {
 public:
  explicit Splitter(PadicContext ctx) : ctx_(ctx) {}

  // h(t) describes y = center + p^s t; exactly m roots have v(t) >= 0.
  void split(Polynomial h, const PadicScalar& center, int s, int m, bool top) {
    int z = 0;
    while (z < m && h.coeffs[static_cast<std::size_t>(z)].is_exact_zero()) ++z;
    if (z > 0) {
      out_.push_back({center, s, z, true});
      h.coeffs.erase(h.coeffs.begin(), h.coeffs.begin() + z);
      m -= z;
      if (m == 0) return;
    }
    if (s >= 2 * ctx_.precision()) {
      out_.push_back({center, s, m, false});
      return;
    }
    const auto p = static_cast<std::int64_t>(ctx_.prime());
    std::vector<std::pair<Polynomial, int>> children;
    int found = 0;
    for (std::int64_t r = top ? 1 : 0; r < p; ++r) {
      Polynomial child = rescale(h.taylor_shift(PadicScalar::from_integer(r, ctx_)), 1);
      const auto cnt = count_integral_roots(child);
      if (!cnt) {
        out_.push_back({center, s, m, false});
        return;
      }
      found += *cnt;
      children.emplace_back(std::move(child), *cnt);
    }
    if (found < m)
      fail(ErrorCode::not_split_at_precision, "polynomial has roots outside Q_" + std::to_string(p));
    for (std::int64_t r = top ? 1 : 0; r < p; ++r) {
      auto& [child, cnt] = children[static_cast<std::size_t>(r - (top ? 1 : 0))];
      if (cnt == 0) continue;
      const PadicScalar next = center + PadicScalar::from_integer(r, ctx_) * PadicScalar::power_of_p(s, ctx_);
      split(std::move(child), next, s + 1, cnt, false);
    }
  }

  std::vector<RawRoot>& roots() { return out_; }

 private:
  PadicContext ctx_;
  std::vector<RawRoot> out_;
};

// Wang reconstruction of u mod m as a/b with |a|, b <= sqrt(m/2).
std::optional<std::pair<std::int64_t, std::int64_t>> small_fraction(std::uint64_t u, std::uint64_t m) {
  using i128 = __int128;
  i128 bound = static_cast<i128>(std::sqrt(static_cast<long double>(m) / 2));
  while (bound > 0 && bound * bound * 2 > static_cast<i128>(m)) --bound;
  i128 r0 = m, r1 = u, s0 = 0, s1 = 1;
  while (r1 > bound) {
    i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  i128 a = r1, b = s1;
  if (b < 0) { a = -a; b = -b; }
  if (b == 0 || b > bound || a == 0) return std::nullopt;
  return std::pair{static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)};
}

// f vanishes to order exactly m at x, as far as the precision can tell.
bool verifies_root(const Polynomial& f, const PadicScalar& x, int m) {
  const Polynomial g = f.taylor_shift(x);
  for (int j = 0; j < m; ++j)
    if (!g.coeffs[static_cast<std::size_t>(j)].is_zero_at_precision()) return false;
  return g.coeffs[static_cast<std::size_t>(m)].is_value();
}

PolynomialRoot finish_root(const Polynomial& f, const RawRoot& raw, int v) {
  const PadicContext& ctx = f.context();
  const PadicScalar scale = PadicScalar::power_of_p(v, ctx);
  if (raw.exact) return {scale * raw.center, raw.multiplicity};
  const int d = std::min(raw.depth, ctx.precision());
  if (d >= 1) {
    if (auto q = small_fraction(raw.center.residue_mod(d), ctx.power(d))) {
      if (std::gcd(q->second, static_cast<std::int64_t>(ctx.prime())) == 1) {
        const PadicScalar x = scale * PadicScalar::from_rational(q->first, q->second, ctx);
        if (verifies_root(f, x, raw.multiplicity)) return {x, raw.multiplicity};
      }
    }
  }
  return {scale * raw.center.truncated(raw.depth), raw.multiplicity};
}

}  // namespace

std::vector<PolynomialRoot> hensel_roots(const Polynomial& input) {
  Polynomial f = input;
  while (f.coeffs.size() > 1 && f.coeffs.back().is_exact_zero()) f.coeffs.pop_back();
  if (!f.coeffs.back().is_value())
    fail(ErrorCode::precision_exhausted, "leading coefficient is not certified");
  const PadicContext ctx = f.context();
  std::vector<PolynomialRoot> roots;
  if (f.degree() <= 0) return roots;

  std::size_t zeros = 0;
  while (f.coeffs[zeros].is_exact_zero()) ++zeros;
  if (zeros > 0) roots.push_back({PadicScalar::zero(ctx), static_cast<int>(zeros)});
  Polynomial g;
  g.coeffs.assign(f.coeffs.begin() + static_cast<std::ptrdiff_t>(zeros), f.coeffs.end());
  if (!g.coeffs.front().is_value())
    fail(ErrorCode::precision_exhausted, "constant coefficient is not certified");

  // Lower convex hull of the points (i, v(g_i)).
  const int n = g.degree();
  std::vector<int> hull{0};
  for (int i = 1; i <= n; ++i) {
    if (!g.coeffs[static_cast<std::size_t>(i)].is_value()) continue;
    hull.push_back(i);
    auto val = [&](int k) { return static_cast<long long>(g.coeffs[static_cast<std::size_t>(k)].valuation()); };
    while (hull.size() >= 3) {
      const int a = hull[hull.size() - 3], b = hull[hull.size() - 2], c = hull.back();
      // Drop b unless it lies strictly below the chord a-c.
      if ((val(b) - val(a)) * (c - a) >= (val(c) - val(a)) * (b - a))
        hull.erase(hull.end() - 2);
      else
        break;
    }
  }
  for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
    const int i = hull[seg], j = hull[seg + 1];
    const long long vi = g.coeffs[static_cast<std::size_t>(i)].valuation();
    const long long vj = g.coeffs[static_cast<std::size_t>(j)].valuation();
    for (int k = i + 1; k < j; ++k) {
      const PadicScalar& c = g.coeffs[static_cast<std::size_t>(k)];
      // An uncertified coefficient may not dip under the segment.
      if (c.is_approx_zero() && static_cast<long long>(c.valuation_lower_bound()) * (j - i) < vi * (j - i) + (vj - vi) * (k - i))
        fail(ErrorCode::precision_exhausted, "Newton polygon is not certified at this precision");
    }
    if ((vi - vj) % (j - i) != 0)
      fail(ErrorCode::not_split_at_precision, "Newton polygon has a non-integral slope (ramified roots)");
    const int v = static_cast<int>((vi - vj) / (j - i));
    Splitter splitter(ctx);
    splitter.split(rescale(g, v), PadicScalar::zero(ctx), 0, j - i, true);
    int total = 0;
    for (const auto& raw : splitter.roots()) {
      roots.push_back(finish_root(f, raw, v));
      total += raw.multiplicity;
    }
    if (total != j - i) fail(ErrorCode::not_split_at_precision, "root count mismatch on a Newton segment");
  }
  std::stable_sort(roots.begin(), roots.end(), [](const PolynomialRoot& a, const PolynomialRoot& b) {
    return a.value.valuation_lower_bound() < b.value.valuation_lower_bound();
  });
  return roots;
}

}  // namespace padlab
