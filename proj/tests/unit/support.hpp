#pragma once

// Independent oracles and random generators for the tests. The oracles use
// exact rational arithmetic (boost cpp_rational) and never call into the
// p-adic elimination or series code they are checking.

#include "padlab/liegroup.hpp"
#include "padlab/matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <climits>
#include <random>
#include <vector>

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;
using QMat = std::vector<std::vector<Q>>;

inline int vp(Z n, std::uint64_t p) {
  if (n == 0) return INT_MAX;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline int vp(const Q& q, std::uint64_t p) {
  if (q == 0) return INT_MAX;
  return vp(boost::multiprecision::numerator(q), p) - vp(boost::multiprecision::denominator(q), p);
}

inline Q power(std::uint64_t p, int e) {
  Z acc = 1;
  for (int i = 0; i < (e < 0 ? -e : e); ++i) acc *= p;
  return e >= 0 ? Q(acc) : Q(1) / Q(acc);
}

// The rational p^v u represented by a value; zero for either kind of zero.
inline Q exact(const padlab::PadicScalar& x) {
  if (!x.is_value()) return 0;
  return Q(Z(x.unit())) * power(x.context().prime(), x.valuation());
}

// x carries at least `prec` absolute digits and matches q to that precision.
inline bool close(const Q& q, const padlab::PadicScalar& x, int prec) {
  if (x.absolute_precision() < prec) return false;
  const Q diff = q - exact(x);
  return diff == 0 || vp(diff, x.context().prime()) >= prec;
}

inline QMat zeros(std::size_t d) { return QMat(d, std::vector<Q>(d, 0)); }

inline QMat identity(std::size_t d) {
  QMat m = zeros(d);
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline QMat mul(const QMat& a, const QMat& b) {
  const std::size_t d = a.size();
  QMat c = zeros(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

inline QMat add(QMat a, const QMat& b, const Q& s = 1) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) a[i][j] += s * b[i][j];
  return a;
}

inline QMat scale(QMat a, const Q& s) {
  for (auto& row : a)
    for (auto& x : row) x *= s;
  return a;
}

inline QMat from_padic(const padlab::PadicMatrix& m) {
  QMat q = zeros(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q[i][j] = exact(m(i, j));
  return q;
}

inline padlab::PadicMatrix to_padic(const QMat& q, padlab::PadicContext ctx) {
  std::vector<std::vector<padlab::Rational>> rows;
  for (const auto& r : q) {
    auto& out = rows.emplace_back();
    for (const auto& x : r)
      out.emplace_back(static_cast<std::int64_t>(boost::multiprecision::numerator(x)),
                       static_cast<std::int64_t>(boost::multiprecision::denominator(x)));
  }
  return padlab::PadicMatrix::from_rationals(ctx, rows);
}

inline int vp(const QMat& m, std::uint64_t p) {
  int v = INT_MAX;
  for (const auto& r : m)
    for (const auto& x : r) v = std::min(v, vp(x, p));
  return v;
}

inline bool close(const QMat& q, const padlab::PadicMatrix& m, int prec) {
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      if (!close(q[i][j], m(i, j), prec)) return false;
  return true;
}

// Every digit m carries is correct, and each entry carries at least `floor`
// absolute digits.
inline bool faithful(const QMat& q, const padlab::PadicMatrix& m, int floor) {
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      const auto& x = m(i, j);
      if (x.absolute_precision() < floor) return false;
      if (!close(q[i][j], x, x.absolute_precision())) return false;
    }
  return true;
}

inline int factorial_valuation(int n, std::uint64_t p) {
  int v = 0;
  for (Z q = n / p; q > 0; q /= p) v += static_cast<int>(q);
  return v;
}

// Partial sum of the exponential series, long enough that every omitted term
// vanishes modulo p^target. Requires v(X) >= 1.
inline QMat exp_series(const QMat& x, std::uint64_t p, int target) {
  const int w = vp(x, p);
  QMat sum = identity(x.size()), term = identity(x.size());
  if (w == INT_MAX) return sum;
  for (int n = 1;; ++n) {
    // Terms from degree n on have valuation >= n w - v(n!) >= n w - (n - 1)/(p - 1).
    if (n * w - (n - 1) / static_cast<int>(p - 1) >= target + 1) break;
    term = scale(mul(term, x), Q(1) / n);
    sum = add(sum, term);
  }
  return sum;
}

// log(e + Y) summed until the omitted terms vanish modulo p^target.
inline QMat log_series(const QMat& g, std::uint64_t p, int target) {
  const QMat y = add(g, identity(g.size()), -1);
  const int w = vp(y, p);
  QMat sum = zeros(g.size()), power_y = identity(g.size());
  if (w == INT_MAX) return sum;
  for (int n = 1;; ++n) {
    int log_n = 0;
    for (int m = n; m >= static_cast<int>(p); m /= static_cast<int>(p)) ++log_n;
    if (n * w - log_n >= target + 1) {
      // Every later term has an even larger lower bound.
      bool done = true;
      for (int m = n; m < n + 64; ++m) {
        int lm = 0;
        for (int t = m; t >= static_cast<int>(p); t /= static_cast<int>(p)) ++lm;
        if (m * w - lm < target + 1) done = false;
      }
      if (done) break;
    }
    power_y = mul(power_y, y);
    sum = add(sum, power_y, Q(n % 2 ? 1 : -1) / n);
  }
  return sum;
}

inline Q det(const QMat& m) {
  // Leibniz expansion; fine for the small sizes used here.
  const std::size_t d = m.size();
  std::vector<std::size_t> perm(d);
  for (std::size_t i = 0; i < d; ++i) perm[i] = i;
  Q total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Q prod = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < d; ++i) prod *= m[i][perm[i]];
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline QMat commutator(const QMat& a, const QMat& b) { return add(mul(a, b), mul(b, a), -1); }

}  // namespace oracle

namespace gen {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng);
  }
  double real() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }
  bool coin() { return integer(0, 1) == 1; }
};

inline std::int64_t ipow(std::uint64_t p, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::int64_t>(p);
  return r;
}

// Random integer c p^v with v >= k and c of up to `digits` base-p digits.
inline std::int64_t entry(Rng& rng, std::uint64_t p, int k, int digits) {
  const int extra = static_cast<int>(rng.integer(0, 2));
  const std::int64_t bound = ipow(p, digits);
  return rng.integer(-bound + 1, bound - 1) * ipow(p, k + extra);
}

// Random element of K^m_k with small integer entries; `traceless` forces sl.
inline oracle::QMat lie_matrix(Rng& rng, std::uint64_t p, std::size_t d, int k, bool traceless, int digits = 3) {
  oracle::QMat m = oracle::zeros(d);
  for (auto& row : m)
    for (auto& x : row) x = entry(rng, p, k, digits);
  if (traceless) {
    oracle::Q t = 0;
    for (std::size_t i = 0; i + 1 < d; ++i) t += m[i][i];
    m[d - 1][d - 1] = -t;
  }
  // Make sure the matrix is not accidentally zero.
  if (oracle::vp(m, p) == INT_MAX) m[0][d - 1] = oracle::power(p, k);
  return m;
}

// Random unimodular integer matrix: a product of elementary row operations.
inline oracle::QMat unimodular(Rng& rng, std::size_t d, int steps = 6) {
  oracle::QMat m = oracle::identity(d);
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(d) - 1));
    auto j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(d) - 2));
    if (j >= i) ++j;
    const auto c = rng.integer(-2, 2);
    for (std::size_t col = 0; col < d; ++col) m[i][col] += c * m[j][col];
  }
  return m;
}

inline std::vector<double> probability_vector(Rng& rng, std::size_t n, bool allow_zero = false) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (auto& x : v) {
    x = (allow_zero && rng.integer(0, 4) == 0) ? 0.0 : 0.05 + rng.real();
    sum += x;
  }
  if (sum == 0.0) {
    v[0] = 1.0;
    sum = 1.0;
  }
  for (auto& x : v) x /= sum;
  // Push the rounding residue into the largest entry so the sum is 1 to 1e-15.
  double rest = 1.0;
  std::size_t big = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rest -= v[i];
    if (v[i] > v[big]) big = i;
  }
  v[big] += rest;
  return v;
}

inline std::vector<std::vector<double>> stochastic_matrix(Rng& rng, std::size_t s) {
  std::vector<std::vector<double>> t;
  for (std::size_t i = 0; i < s; ++i) t.push_back(probability_vector(rng, s));
  return t;
}

}  // namespace gen
