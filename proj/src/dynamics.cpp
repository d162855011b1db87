#include "padlab/dynamics.hpp"

#include "padlab/error.hpp"
#include "padlab/polynomial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace padlab {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

std::string_view eigen_class_name(EigenClass c) {
  switch (c) {
    case EigenClass::stable: return "STABLE";
    case EigenClass::neutral: return "NEUTRAL";
    case EigenClass::unstable: return "UNSTABLE";
  }
  return "?";
}

int HorosphericalDecomposition::max_nu() const {
  return nu.empty() ? 0 : *std::max_element(nu.begin(), nu.end());
}

int HorosphericalDecomposition::max_nu_unstable() const {
  int m = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (classes[i] == EigenClass::unstable) m = std::max(m, -valuations[i]);
  return m;
}

std::vector<PadicScalar> HorosphericalDecomposition::eigen_coordinates(const PadicMatrix& x) const {
  const auto lie = group.coordinates(x);
  std::vector<PadicScalar> c(dim(), PadicScalar::zero(x.context()));
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j)
      if (!lie[j].is_exact_zero() && !to_eigen(i, j).is_exact_zero()) c[i] += to_eigen(i, j) * lie[j];
  return c;
}

PadicMatrix HorosphericalDecomposition::from_eigen_coordinates(const std::vector<PadicScalar>& c) const {
  if (c.size() != dim()) fail(ErrorCode::dimension_mismatch, "eigen coordinate vector has the wrong length");
  PadicMatrix x(a.context(), a.rows());
  for (std::size_t i = 0; i < dim(); ++i)
    if (!c[i].is_exact_zero()) x += c[i] * basis[i];
  return x;
}

HorosphericalDecomposition decompose(const PadicMatrix& a, const GroupSpec& group) {
  if (!a.is_square() || a.rows() != group.dim_ambient())
    fail(ErrorCode::dimension_mismatch, "element does not match the group dimension");
  const PadicContext& ctx = a.context();
  const PadicMatrix a_inv = inverse(a);
  const std::size_t dim = group.dim();

  PadicMatrix ad(ctx, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const auto c = group.coordinates(a * group.lie_basis()[j] * a_inv);
    for (std::size_t i = 0; i < dim; ++i) ad(i, j) = c[i];
  }

  std::vector<PolynomialRoot> roots;
  try {
    roots = hensel_roots(char_poly(ad));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::not_split_at_precision)
      fail(ErrorCode::not_diagonalizable, std::string("Ad_a has eigenvalues outside Q_p (") + e.what() + ")");
    throw;
  }

  HorosphericalDecomposition dec{a, group, ad, {}, {}, {}, {}, {}, 0, 0, max_norm(a), PadicMatrix(ctx, dim)};
  for (const auto& root : roots) {
    if (!root.value.is_value()) fail(ErrorCode::not_diagonalizable, "eigenvalue is not certified");
    PadicMatrix shifted = ad;
    for (std::size_t i = 0; i < dim; ++i) shifted(i, i) -= root.value;
    const auto kernel = kernel_basis(shifted.truncated(root.value.absolute_precision()));
    if (static_cast<int>(kernel.size()) != root.multiplicity)
      fail(ErrorCode::not_diagonalizable, "Ad_a has a nontrivial Jordan block");
    std::vector<PadicMatrix> vectors;
    for (const auto& v : kernel) vectors.push_back(group.from_coordinates(v));
    Eigenspace space{root.value, root.value.valuation(), EigenClass::neutral, zp_module_basis(vectors)};
    if (space.valuation > 0) space.cls = EigenClass::stable;
    if (space.valuation < 0) space.cls = EigenClass::unstable;
    for (const auto& b : space.basis) {
      dec.basis.push_back(b);
      dec.classes.push_back(space.cls);
      dec.valuations.push_back(space.valuation);
      if (space.cls == EigenClass::stable) {
        dec.nu.push_back(space.valuation);
        dec.nu_total += space.valuation;
      } else if (space.cls == EigenClass::unstable) {
        dec.nu_unstable_total -= space.valuation;
      }
    }
    dec.eigenspaces.push_back(std::move(space));
  }
  if (dec.basis.size() != dim) fail(ErrorCode::not_diagonalizable, "eigenvectors do not span the Lie algebra");
  if (dec.nu_total == 0 && dec.nu_unstable_total == 0)
    fail(ErrorCode::no_hyperbolicity, "every eigenvalue of Ad_a has norm one");

  PadicMatrix change(ctx, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const auto c = group.coordinates(dec.basis[j]);
    for (std::size_t i = 0; i < dim; ++i) change(i, j) = c[i];
  }
  dec.to_eigen = inverse(change);
  return dec;
}

Entropy entropy(const HorosphericalDecomposition& dec) {
  const double lp = std::log(static_cast<double>(dec.a.context().prime()));
  return {dec.nu_total, dec.nu_total * lp};
}

Rational mod_character(const HorosphericalDecomposition& dec) {
  return rational_power(dec.a.context().prime(), dec.nu_total);
}

int min_partition_level(const HorosphericalDecomposition& dec) { return dec.nu_total + 2; }

int adapted_smoothness_level(const HorosphericalDecomposition& dec, int l_f, bool apply_shift) {
  return apply_shift ? l_f + dec.nu_total : l_f;
}

bool AdaptedBall::contains(const HorosphericalDecomposition& dec, const PadicMatrix& x) const {
  if (!dec.group.contains_algebra_element(x)) return false;
  const auto c = dec.eigen_coordinates(x);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].valuation_lower_bound() < levels[i]) return false;
  return true;
}

AdaptedBall adapted_ball(const HorosphericalDecomposition& dec, int k) {
  return AdaptedBall{std::vector<int>(dec.dim(), k)};
}

AdaptedBall bowen_ball(const HorosphericalDecomposition& dec, int k, int n) {
  if (n < 0) fail(ErrorCode::invalid_input, "window length must be nonnegative");
  if (k < std::max(2, dec.max_nu() + 2))
    fail(ErrorCode::level_too_small, "Bowen balls need k >= max(2, max nu + 2)");
  AdaptedBall ball = adapted_ball(dec, k);
  for (std::size_t i = 0; i < dec.dim(); ++i)
    if (dec.classes[i] == EigenClass::unstable) ball.levels[i] = k - n * dec.valuations[i];
  return ball;
}

Rational bowen_volume_ratio(const HorosphericalDecomposition& dec, int k, int n) {
  if (n < 1) fail(ErrorCode::invalid_input, "window length must be at least 1");
  if (k < std::max(2, dec.max_nu() + 2))
    fail(ErrorCode::level_too_small, "Bowen balls need k >= max(2, max nu + 2)");
  return rational_power(dec.a.context().prime(), -(n - 1) * dec.nu_total);
}

namespace {

Rational to_rational(const cpp_rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  const cpp_int lim = std::numeric_limits<std::int64_t>::max();
  if (abs(num) > lim || den > lim) fail(ErrorCode::invalid_input, "ratio does not fit a 64-bit rational");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

unsigned worker_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PADLAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

// One linear congruence system per window step l: sum_j S[i][j] t_j == 0 mod m.
struct Congruences {
  std::uint64_t modulus = 1;
  std::vector<std::vector<std::uint64_t>> s;  // rows x dim
};

// Histogram over the first failing step (n for points that never fail).
std::vector<std::uint64_t> enumerate_range(const std::vector<Congruences>& steps, std::size_t dim,
                                           std::uint64_t range, std::uint64_t first_lo, std::uint64_t first_hi,
                                           int n) {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(n) + 1, 0);
  if (first_lo >= first_hi) return hist;
  std::vector<std::uint64_t> t(dim, 0);
  t[0] = first_lo;
  // forms[l][i] = sum_j S_l[i][j] t_j mod m_l, maintained incrementally.
  std::vector<std::vector<std::uint64_t>> forms(steps.size());
  std::vector<std::vector<std::vector<std::uint64_t>>> wrap(steps.size());
  for (std::size_t l = 0; l < steps.size(); ++l) {
    const auto& st = steps[l];
    const std::uint64_t m = st.modulus;
    forms[l].assign(st.s.size(), 0);
    wrap[l].assign(st.s.size(), std::vector<std::uint64_t>(dim, 0));
    for (std::size_t i = 0; i < st.s.size(); ++i) {
      forms[l][i] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(st.s[i][0]) * (first_lo % m) % m);
      for (std::size_t j = 0; j < dim; ++j)
        wrap[l][i][j] = static_cast<std::uint64_t>(static_cast<unsigned __int128>(st.s[i][j]) * (range % m) % m);
    }
  }
  for (;;) {
    int first_fail = n;
    for (std::size_t l = 0; l < steps.size() && first_fail == n; ++l)
      for (std::uint64_t f : forms[l])
        if (f != 0) {
          first_fail = static_cast<int>(l) + 1;
          break;
        }
    ++hist[static_cast<std::size_t>(first_fail)];
    std::size_t j = dim;
    for (;;) {
      if (j == 0) return hist;
      --j;
      ++t[j];
      for (std::size_t l = 0; l < steps.size(); ++l) {
        const std::uint64_t m = steps[l].modulus;
        for (std::size_t i = 0; i < forms[l].size(); ++i) {
          std::uint64_t f = forms[l][i] + steps[l].s[i][j];
          if (f >= m) f -= m;
          forms[l][i] = f;
        }
      }
      const std::uint64_t limit = j == 0 ? first_hi : range;
      if (t[j] < limit) break;
      if (j == 0) return hist;
      t[j] = 0;
      for (std::size_t l = 0; l < steps.size(); ++l) {
        const std::uint64_t m = steps[l].modulus;
        for (std::size_t i = 0; i < forms[l].size(); ++i) forms[l][i] = (forms[l][i] + m - wrap[l][i][j]) % m;
      }
    }
  }
}

}  // namespace

OracleResult bowen_count_oracle(const HorosphericalDecomposition& dec, int k, int n, int level, OracleMode mode,
                                std::uint64_t budget, unsigned workers) {
  const PadicContext& ctx = dec.a.context();
  const std::uint64_t p = ctx.prime();
  if (n < 1) fail(ErrorCode::invalid_input, "window length must be at least 1");
  if (k < 2) fail(ErrorCode::level_too_small, "oracle needs k >= 2");
  if (level <= k + (n - 1) * dec.max_nu_unstable())
    fail(ErrorCode::level_too_small, "truncation level L must exceed k + (n - 1) max nu");
  const int width = level - k;  // digits per coordinate
  const std::size_t dim = dec.dim();

  OracleResult res{mode, k, n, level, {}, {}};
  if (mode == OracleMode::factored) {
    for (int w = 1; w <= n; ++w) {
      int exponent = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        const int lost = dec.classes[i] == EigenClass::unstable ? (w - 1) * -dec.valuations[i] : 0;
        exponent += width - std::min(width, lost);
      }
      res.counts.push_back(boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(exponent)));
    }
  } else {
    cpp_int total = boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(width * static_cast<int>(dim)));
    if (total > budget)
      fail(ErrorCode::budget_exceeded, "FULL enumeration needs " + total.str() + " lattice points (budget " +
                                           std::to_string(budget) + ")");
    if (width > ctx.precision()) fail(ErrorCode::precision_exhausted, "truncation level exceeds the precision");
    const std::uint64_t range = ctx.power(width);
    // Ad_a^l X in K^g_k  <=>  p^e Ad_a^l t == 0 mod p^e for X = p^k t, with
    // p^e clearing the denominators of Ad_a^l.
    std::vector<Congruences> steps;
    PadicMatrix power = PadicMatrix::identity(ctx, dim);
    for (int l = 1; l < n; ++l) {
      power = power * dec.ad;
      const int e = std::max(0, -norm_valuation_bound(power));
      Congruences st;
      if (e > ctx.precision()) fail(ErrorCode::precision_exhausted, "conjugation denominators exceed the precision");
      st.modulus = ctx.power(e);
      const PadicScalar scale = PadicScalar::power_of_p(e, ctx);
      for (std::size_t i = 0; i < dim; ++i) {
        std::vector<std::uint64_t> row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = (scale * power(i, j)).residue_mod(e);
        st.s.push_back(std::move(row));
      }
      steps.push_back(std::move(st));
    }
    const unsigned nw = std::max(1u, std::min<unsigned>(worker_count(workers), static_cast<unsigned>(range)));
    std::vector<std::vector<std::uint64_t>> parts(nw);
    auto job = [&](unsigned w) {
      const std::uint64_t lo = range * w / nw, hi = range * (w + 1) / nw;
      parts[w] = enumerate_range(steps, dim, range, lo, hi, n);
    };
    if (nw == 1) {
      job(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < nw; ++w) pool.emplace_back(job, w);
      for (auto& th : pool) th.join();
    }
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& part : parts)
      for (std::size_t i = 0; i < part.size(); ++i) hist[i] += part[i];
    // A point whose first failing step is f survives windows 1..f.
    for (int w = 1; w <= n; ++w) {
      std::uint64_t c = 0;
      for (int f = w; f <= n; ++f) c += hist[static_cast<std::size_t>(f)];
      res.counts.emplace_back(c);
    }
  }
  for (const auto& c : res.counts) res.ratios.push_back(to_rational(cpp_rational(c, res.counts.front())));
  return res;
}

std::vector<PadicMatrix> atom_representatives(const HorosphericalDecomposition& dec, int k) {
  if (k < min_partition_level(dec)) fail(ErrorCode::level_too_small, "atoms need k >= |nu| + 2");
  const PadicContext& ctx = dec.a.context();
  const std::uint64_t p = ctx.prime();
  std::vector<std::size_t> stable;
  for (std::size_t i = 0; i < dec.dim(); ++i)
    if (dec.classes[i] == EigenClass::stable) stable.push_back(i);
  cpp_int count = boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(dec.nu_total));
  if (count > 1'000'000) fail(ErrorCode::budget_exceeded, "p^|nu| = " + count.str() + " atoms is too many");

  std::vector<std::uint64_t> digits(stable.size(), 0);
  std::vector<std::uint64_t> limits;
  for (int v : dec.nu) limits.push_back(ctx.power(v));
  std::vector<PadicMatrix> out;
  for (;;) {
    std::vector<PadicScalar> c(dec.dim(), PadicScalar::zero(ctx));
    for (std::size_t s = 0; s < stable.size(); ++s)
      if (digits[s] != 0)
        c[stable[s]] = PadicScalar::from_integer(static_cast<std::int64_t>(digits[s]), ctx) *
                       PadicScalar::power_of_p(k - dec.nu[s], ctx);
    out.push_back(exp(dec.from_eigen_coordinates(c)));
    std::size_t s = stable.size();
    for (;;) {
      if (s == 0) return out;
      --s;
      if (++digits[s] < limits[s]) break;
      digits[s] = 0;
    }
  }
}

namespace {

bool coordinates_in(const HorosphericalDecomposition& dec, const PadicMatrix& g, int unstable_level,
                    int neutral_level, int stable_level) {
  const int k = std::min({unstable_level, neutral_level, stable_level});
  if (k < 2) fail(ErrorCode::level_too_small, "ball levels must be at least 2");
  if (!ball_membership(g, dec.group, k)) return false;
  const auto c = dec.eigen_coordinates(log(g));
  for (std::size_t i = 0; i < c.size(); ++i) {
    const int lvl = dec.classes[i] == EigenClass::unstable ? unstable_level
                    : dec.classes[i] == EigenClass::neutral ? neutral_level
                                                            : stable_level;
    if (lvl == kInfiniteValuation) {
      if (!c[i].is_zero_at_precision()) return false;
    } else if (c[i].valuation_lower_bound() < lvl) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool in_unstable_ball(const HorosphericalDecomposition& dec, const PadicMatrix& g, int k) {
  return coordinates_in(dec, g, k, kInfiniteValuation, kInfiniteValuation);
}

bool in_thickened_stable_ball(const HorosphericalDecomposition& dec, const PadicMatrix& g, int k, int l) {
  return coordinates_in(dec, g, kInfiniteValuation, k, l);
}

}  // namespace padlab
