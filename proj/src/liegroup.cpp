#include "padlab/liegroup.hpp"

#include "padlab/error.hpp"

#include <algorithm>

namespace padlab {

namespace {

bool is_exact_zero(const PadicMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(), [](const PadicScalar& x) { return x.is_exact_zero(); });
}

// Certified valuation of ||x||, which must be at least 2.
int domain_valuation(const PadicMatrix& x, const char* what) {
  if (!x.is_square()) fail(ErrorCode::dimension_mismatch, std::string(what) + " needs a square matrix");
  const auto w = certified_norm_valuation(x);
  if (!w) {
    // Only uncertified entries: fine as long as they sit inside the domain.
    if (norm_valuation_bound(x) >= 2) return norm_valuation_bound(x);
    fail(ErrorCode::precision_exhausted, std::string(what) + ": argument norm is not certified");
  }
  if (*w < 2)
    fail(ErrorCode::domain_error,
         std::string(what) + ": argument has norm p^" + std::to_string(-*w) + " > p^-2");
  return *w;
}

int floor_log(std::int64_t n, std::uint64_t p) {
  int e = 0;
  for (std::int64_t q = static_cast<std::int64_t>(p); q <= n; q *= static_cast<std::int64_t>(p)) ++e;
  return e;
}

PadicScalar reciprocal(std::int64_t n, const PadicContext& ctx) {
  return inv(PadicScalar::from_integer(n, ctx));
}

// Largest s such that some right-nested bracket of length s in x, y is nonzero,
// when every bracket of length s + 1 vanishes exactly and s <= cap.
std::optional<int> nilpotency_step(const PadicMatrix& x, const PadicMatrix& y, int cap) {
  std::vector<PadicMatrix> level{x, y};
  for (int len = 1; len <= cap; ++len) {
    std::vector<PadicMatrix> next;
    for (const auto& b : level)
      if (!is_exact_zero(b)) {
        next.push_back(commutator(x, b));
        next.push_back(commutator(y, b));
      }
    if (std::all_of(next.begin(), next.end(), is_exact_zero)) return len;
    level = std::move(next);
  }
  return std::nullopt;
}

PadicMatrix dynkin(const PadicMatrix& x, const PadicMatrix& y, int w) {
  const PadicContext& ctx = x.context();
  int degree = bch_truncation_degree(w, ctx);
  bool exact = false;
  if (auto step = nilpotency_step(x, y, std::min(degree, 6))) {
    degree = std::min(degree, *step);
    exact = true;
  }
  const auto D = static_cast<std::size_t>(degree);
  const PadicMatrix zero(ctx, x.rows());
  // A[m][d]: sum over m-block words of total degree d of the nested bracket
  // divided by the product of the block factorials.
  std::vector<std::vector<PadicMatrix>> a(D + 1, std::vector<PadicMatrix>(D + 1, zero));
  a[1][1] = x + y;
  {
    PadicMatrix t = y;
    for (std::size_t d = 2; d <= D; ++d) {
      t = reciprocal(static_cast<std::int64_t>(d - 1), ctx) * commutator(x, t);
      a[1][d] = t;
    }
  }
  for (std::size_t m = 1; m < D; ++m)
    for (std::size_t d = m; d < D; ++d) {
      if (is_exact_zero(a[m][d])) continue;
      PadicMatrix ys = a[m][d];
      for (std::size_t s = 0; d + s <= D; ++s) {
        if (s > 0) ys = reciprocal(static_cast<std::int64_t>(s), ctx) * commutator(y, ys);
        if (is_exact_zero(ys)) break;
        PadicMatrix z = ys;
        for (std::size_t r = 0; d + s + r <= D; ++r) {
          if (r > 0) z = reciprocal(static_cast<std::int64_t>(r), ctx) * commutator(x, z);
          if (is_exact_zero(z)) break;
          if (r + s >= 1) a[m + 1][d + r + s] += z;
        }
      }
    }
  PadicMatrix sum = zero;
  for (std::size_t m = 1; m <= D; ++m)
    for (std::size_t d = m; d <= D; ++d) {
      if (is_exact_zero(a[m][d])) continue;
      PadicScalar c = reciprocal(static_cast<std::int64_t>(m * d), ctx);
      if (m % 2 == 0) c = -c;
      sum += c * a[m][d];
    }
  return exact ? sum : sum.truncated(series_target(w, ctx));
}

}  // namespace

PadicScalar GroupEquation::evaluate(const PadicMatrix& g) const {
  const PadicContext& ctx = g.context();
  PadicScalar total = PadicScalar::zero(ctx);
  for (const auto& term : terms) {
    if (term.exponents.size() != g.rows() * g.cols())
      fail(ErrorCode::dimension_mismatch, "group equation has the wrong number of variables");
    PadicScalar mono = PadicScalar::from_rational(term.coefficient, ctx);
    for (std::size_t e = 0; e < term.exponents.size(); ++e)
      for (int k = 0; k < term.exponents[e]; ++k) mono = mono * g.entries()[e];
    total += mono;
  }
  return total;
}

GroupSpec GroupSpec::sl(std::size_t d, PadicContext ctx) {
  if (d < 2) fail(ErrorCode::invalid_input, "sl(d) needs d >= 2");
  std::vector<PadicMatrix> basis;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) basis.push_back(PadicMatrix::unit(ctx, d, i, j));
  for (std::size_t i = 0; i + 1 < d; ++i)
    basis.push_back(PadicMatrix::unit(ctx, d, i, i) - PadicMatrix::unit(ctx, d, i + 1, i + 1));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) basis.push_back(PadicMatrix::unit(ctx, d, i, j));
  return GroupSpec(Family::sl, d, std::move(basis), {});
}

GroupSpec GroupSpec::gl(std::size_t d, PadicContext ctx) {
  if (d < 1) fail(ErrorCode::invalid_input, "gl(d) needs d >= 1");
  std::vector<PadicMatrix> basis;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) basis.push_back(PadicMatrix::unit(ctx, d, i, j));
  return GroupSpec(Family::gl, d, std::move(basis), {});
}

GroupSpec GroupSpec::custom(std::vector<PadicMatrix> lie_basis, std::vector<GroupEquation> equations) {
  if (lie_basis.empty()) fail(ErrorCode::invalid_input, "custom group needs a Lie algebra basis");
  const std::size_t d = lie_basis.front().rows();
  for (const auto& b : lie_basis)
    if (!b.is_square() || b.rows() != d) fail(ErrorCode::dimension_mismatch, "Lie basis matrices must be d x d");
  auto basis = zp_module_basis(lie_basis);
  return GroupSpec(Family::custom, d, std::move(basis), std::move(equations));
}

std::string GroupSpec::name() const {
  switch (family_) {
    case Family::sl: return "SL(" + std::to_string(d_) + ")";
    case Family::gl: return "GL(" + std::to_string(d_) + ")";
    case Family::custom: break;
  }
  return "custom(" + std::to_string(d_) + ")";
}

std::vector<PadicScalar> GroupSpec::coordinates(const PadicMatrix& x) const {
  if (!x.is_square() || x.rows() != d_) fail(ErrorCode::dimension_mismatch, "element has the wrong size");
  std::vector<PadicScalar> c;
  c.reserve(basis_.size());
  switch (family_) {
    case Family::gl:
      c.assign(x.entries().begin(), x.entries().end());
      return c;
    case Family::sl: {
      if (!trace(x).is_zero_at_precision()) fail(ErrorCode::invalid_input, "matrix is not trace-free");
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i + 1; j < d_; ++j) c.push_back(x(i, j));
      PadicScalar partial = PadicScalar::zero(x.context());
      for (std::size_t i = 0; i + 1 < d_; ++i) {
        partial += x(i, i);
        c.push_back(partial);
      }
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < i; ++j) c.push_back(x(i, j));
      return c;
    }
    case Family::custom: break;
  }
  return solve_in_span(basis_, x);
}

PadicMatrix GroupSpec::from_coordinates(const std::vector<PadicScalar>& c) const {
  if (c.size() != basis_.size()) fail(ErrorCode::dimension_mismatch, "coordinate vector has the wrong length");
  const PadicContext& ctx = context();
  PadicMatrix x(ctx, d_);
  std::size_t idx = 0;
  switch (family_) {
    case Family::gl:
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < d_; ++j) x(i, j) = c[idx++];
      return x;
    case Family::sl:
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i + 1; j < d_; ++j) x(i, j) = c[idx++];
      for (std::size_t i = 0; i + 1 < d_; ++i, ++idx) {
        x(i, i) += c[idx];
        x(i + 1, i + 1) -= c[idx];
      }
      for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = 0; j < i; ++j) x(i, j) = c[idx++];
      return x;
    case Family::custom: break;
  }
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_exact_zero()) x += c[i] * basis_[i];
  return x;
}

bool GroupSpec::contains_algebra_element(const PadicMatrix& x) const {
  if (!x.is_square() || x.rows() != d_) return false;
  switch (family_) {
    case Family::gl: return true;
    case Family::sl: return trace(x).is_zero_at_precision();
    case Family::custom: break;
  }
  try {
    solve_in_span(basis_, x);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool GroupSpec::satisfies_equations(const PadicMatrix& g) const {
  if (!g.is_square() || g.rows() != d_) return false;
  switch (family_) {
    case Family::gl: return det(g).is_value();
    case Family::sl: return (det(g) - PadicScalar::one(g.context())).is_zero_at_precision();
    case Family::custom: break;
  }
  return std::all_of(equations_.begin(), equations_.end(),
                     [&](const GroupEquation& eq) { return eq.evaluate(g).is_zero_at_precision(); });
}

int series_target(int w, const PadicContext& ctx) { return w + ctx.precision(); }

PadicMatrix exp(const PadicMatrix& x) {
  const int w = domain_valuation(x, "exp");
  const PadicContext& ctx = x.context();
  PadicMatrix result = PadicMatrix::identity(ctx, x.rows());
  if (w == kInfiniteValuation) return result;
  const int target = series_target(w, ctx);
  const auto p = static_cast<std::int64_t>(ctx.prime());
  PadicMatrix term = result;
  for (std::int64_t n = 1;; ++n) {
    term = reciprocal(n, ctx) * (term * x);
    if (is_exact_zero(term)) return result;
    result += term;
    // v(X^m / m!) >= m w - (m - 1)/(p - 1), increasing in m.
    const std::int64_t m = n + 1;
    if (m * w - (m - 1) / (p - 1) >= target) break;
  }
  return result.truncated(target);
}

PadicMatrix log(const PadicMatrix& g) {
  if (!g.is_square()) fail(ErrorCode::dimension_mismatch, "log needs a square matrix");
  const PadicContext& ctx = g.context();
  const PadicMatrix y = g - PadicMatrix::identity(ctx, g.rows());
  const int w = domain_valuation(y, "log");
  PadicMatrix result(ctx, g.rows());
  if (w == kInfiniteValuation) return result;
  const int target = series_target(w, ctx);
  PadicMatrix power = y;
  for (std::int64_t n = 1;; ++n) {
    if (n > 1) power = power * y;
    if (is_exact_zero(power)) return result;
    PadicScalar c = reciprocal(n, ctx);
    result += (n % 2 ? c : -c) * power;
    // v(Y^m / m) >= m w - floor(log_p m), increasing in m.
    const std::int64_t m = n + 1;
    if (m * w - floor_log(m, ctx.prime()) >= target) break;
  }
  return result.truncated(target);
}

int bch_truncation_degree(int w, const PadicContext& ctx) {
  const int target = series_target(w, ctx);
  const auto p = static_cast<std::int64_t>(ctx.prime());
  // A degree-n word carries 1/(m n prod r! s!), whose valuation is at most
  // (n - 1)/(p - 1) + 2 log_p n.
  int degree = 1;
  for (std::int64_t n = 1; n <= 4 * static_cast<std::int64_t>(target) + 16; ++n)
    if (n * w - (n - 1) / (p - 1) - 2 * floor_log(n, ctx.prime()) < target) degree = static_cast<int>(n);
  return degree;
}

PadicMatrix bch(const PadicMatrix& x, const PadicMatrix& y, BchMode mode) {
  if (x.rows() != y.rows() || !(x.context() == y.context()))
    fail(ErrorCode::dimension_mismatch, "bch arguments differ in size");
  const int wx = domain_valuation(x, "bch");
  const int wy = domain_valuation(y, "bch");
  if (mode == BchMode::direct) return log(exp(x) * exp(y));
  const int w = std::min(wx, wy);
  if (w == kInfiniteValuation) return PadicMatrix(x.context(), x.rows());
  return dynkin(x, y, w);
}

bool ball_membership(const PadicMatrix& g, const GroupSpec& group, int k) {
  if (k < 0) fail(ErrorCode::invalid_input, "ball level must be nonnegative");
  if (!g.is_square() || g.rows() != group.dim_ambient()) return false;
  const PadicMatrix diff = g - PadicMatrix::identity(g.context(), g.rows());
  if (norm_valuation_bound(diff) < k) return false;
  return group.satisfies_equations(g);
}

bool lie_ball_membership(const PadicMatrix& x, const GroupSpec& group, int k) {
  if (k < 0) fail(ErrorCode::invalid_input, "ball level must be nonnegative");
  if (!x.is_square() || x.rows() != group.dim_ambient()) return false;
  return norm_valuation_bound(x) >= k && group.contains_algebra_element(x);
}

}  // namespace padlab
