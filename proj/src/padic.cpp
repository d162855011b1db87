#include "padlab/padic.hpp"

#include "padlab/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

namespace padlab {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t s = a + b;  // both < m < 2^62, no overflow
  return s >= m ? s - m : s;
}

// Inverse of a unit modulo m via extended Euclid.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  i128 r0 = m, r1 = a % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    i128 t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) fail(ErrorCode::division_by_zero, "element is not a unit");
  i128 res = s0 % static_cast<i128>(m);
  if (res < 0) res += m;
  return static_cast<std::uint64_t>(res);
}

std::uint64_t reduce_signed(i128 a, std::uint64_t m) {
  i128 r = a % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int integer_valuation(std::int64_t a, std::uint64_t p) noexcept {
  if (a == 0) return kInfiniteValuation;
  i128 x = a;
  int v = 0;
  while (x % static_cast<i128>(p) == 0) {
    x /= static_cast<i128>(p);
    ++v;
  }
  return v;
}

PadicContext::PadicContext(std::uint64_t p, int precision) : p_(p), n_(precision) {
  if (!is_prime(p)) fail(ErrorCode::invalid_input, "p = " + std::to_string(p) + " is not prime");
  if (precision < 1) fail(ErrorCode::invalid_input, "precision must be at least 1");
  u128 acc = 1;
  for (int i = 0; i < precision; ++i) {
    acc *= p;
    if (acc >= (static_cast<u128>(1) << 62))
      fail(ErrorCode::invalid_input, "p^precision must stay below 2^62");
  }
}

std::uint64_t PadicContext::power(int e) const noexcept {
  std::uint64_t result = 1, base = p_;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

PadicScalar PadicScalar::from_rational(std::int64_t a, std::int64_t b, PadicContext ctx) {
  if (b == 0) fail(ErrorCode::division_by_zero, "rational with zero denominator");
  if (a == 0) return zero(ctx);
  const std::uint64_t p = ctx.prime();
  i128 na = a, nb = b;
  int v = 0;
  while (na % static_cast<i128>(p) == 0) { na /= static_cast<i128>(p); ++v; }
  while (nb % static_cast<i128>(p) == 0) { nb /= static_cast<i128>(p); --v; }
  const int n = ctx.precision();
  const std::uint64_t m = ctx.power(n);
  std::uint64_t u = mulmod(reduce_signed(na, m), invmod(reduce_signed(nb, m), m), m);
  PadicScalar x(ctx);
  x.kind_ = Kind::value;
  x.val_ = v;
  x.digits_ = n;
  x.modulus_ = m;
  x.unit_ = u;
  return x;
}

PadicScalar PadicScalar::from_unit(int valuation, std::uint64_t unit, int digits, PadicContext ctx) {
  digits = std::clamp(digits, 1, ctx.precision());
  const std::uint64_t p = ctx.prime();
  unit %= ctx.power(digits);
  // Pull any factors of p out of the unit; each one costs a known digit.
  while (unit % p == 0) {
    if (unit == 0 || digits == 1) return approx_zero(valuation + digits, ctx);
    unit /= p;
    ++valuation;
    --digits;
  }
  PadicScalar x(ctx);
  x.kind_ = Kind::value;
  x.val_ = valuation;
  x.digits_ = digits;
  x.modulus_ = ctx.power(digits);
  x.unit_ = unit % x.modulus_;
  return x;
}

PadicScalar PadicScalar::approx_zero(int bound, PadicContext ctx) {
  PadicScalar x(ctx);
  x.kind_ = Kind::approx_zero;
  x.val_ = bound;
  return x;
}

PadicScalar PadicScalar::parse(std::string_view text, PadicContext ctx) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      fail(ErrorCode::invalid_input, "malformed rational '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return from_integer(parse_int(text), ctx);
  const std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::invalid_input, "zero denominator in '" + std::string(text) + "'");
  return from_rational(parse_int(text.substr(0, slash)), den, ctx);
}

int PadicScalar::valuation() const {
  switch (kind_) {
    case Kind::exact_zero: return kInfiniteValuation;
    case Kind::value: return val_;
    case Kind::approx_zero: break;
  }
  fail(ErrorCode::precision_exhausted, "valuation of O(p^" + std::to_string(val_) + ") is not certified");
}

int PadicScalar::valuation_lower_bound() const noexcept {
  return kind_ == Kind::exact_zero ? kInfiniteValuation : val_;
}

int PadicScalar::absolute_precision() const noexcept {
  switch (kind_) {
    case Kind::exact_zero: return kInfiniteValuation;
    case Kind::value: return val_ + digits_;
    case Kind::approx_zero: return val_;
  }
  return val_;
}

std::uint64_t PadicScalar::residue() const noexcept {
  return (kind_ == Kind::value && val_ == 0) ? unit_ % ctx_.prime() : 0;
}

std::uint64_t PadicScalar::residue_mod(int prec) const {
  if (prec <= 0) return 0;
  if (prec > ctx_.precision())
    fail(ErrorCode::invalid_input, "residue modulus exceeds p^N");
  if (kind_ == Kind::exact_zero) return 0;
  if (absolute_precision() < prec)
    fail(ErrorCode::precision_exhausted, "element not known modulo p^" + std::to_string(prec));
  if (kind_ == Kind::approx_zero) return 0;
  if (val_ < 0) fail(ErrorCode::domain_error, "element is not integral");
  if (val_ >= prec) return 0;
  const std::uint64_t m = ctx_.power(prec);
  return mulmod(unit_ % ctx_.power(prec - val_), ctx_.power(val_), m);
}

Rational rational_power(std::uint64_t p, int e) {
  std::int64_t acc = 1;
  const int mag = e < 0 ? -e : e;
  for (int i = 0; i < mag; ++i) {
    if (acc > std::numeric_limits<std::int64_t>::max() / static_cast<std::int64_t>(p))
      fail(ErrorCode::invalid_input, "p^" + std::to_string(e) + " overflows a 64-bit rational");
    acc *= static_cast<std::int64_t>(p);
  }
  return e >= 0 ? Rational(acc) : Rational(1, acc);
}

Rational PadicScalar::norm() const {
  switch (kind_) {
    case Kind::exact_zero: return Rational(0);
    case Kind::value: return rational_power(ctx_.prime(), -val_);
    case Kind::approx_zero: break;
  }
  fail(ErrorCode::precision_exhausted, "norm of O(p^" + std::to_string(val_) + ") is not certified");
}

PadicScalar PadicScalar::truncated(int bound) const {
  return *this + approx_zero(bound, ctx_);
}

PadicScalar PadicScalar::operator-() const {
  if (kind_ != Kind::value) return *this;
  PadicScalar x = *this;
  x.unit_ = unit_ == 0 ? 0 : modulus_ - unit_;
  return x;
}

PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) {
  using Kind = PadicScalar::Kind;
  if (x.kind_ == Kind::exact_zero) return y;
  if (y.kind_ == Kind::exact_zero) return x;
  const PadicContext& ctx = x.ctx_;
  const int prec = std::min(x.absolute_precision(), y.absolute_precision());
  if (x.kind_ == Kind::approx_zero && y.kind_ == Kind::approx_zero)
    return PadicScalar::approx_zero(prec, ctx);
  if (x.kind_ == Kind::approx_zero || y.kind_ == Kind::approx_zero) {
    const PadicScalar& v = x.kind_ == Kind::value ? x : y;
    if (v.val_ >= prec) return PadicScalar::approx_zero(prec, ctx);
    return PadicScalar::from_unit(v.val_, v.unit_, prec - v.val_, ctx);
  }
  const int vmin = std::min(x.val_, y.val_);
  const int width = prec - vmin;  // 1 <= width <= N
  const std::uint64_t m = ctx.power(width);
  auto shifted = [&](const PadicScalar& s) -> std::uint64_t {
    const int shift = s.val_ - vmin;
    if (shift >= width) return 0;
    return mulmod(s.unit_ % m, ctx.power(shift), m);
  };
  const std::uint64_t sum = addmod(shifted(x), shifted(y), m);
  if (sum == 0) {
    if (x.val_ == y.val_ && x.digits_ == y.digits_) return PadicScalar::zero(ctx);
    return PadicScalar::approx_zero(prec, ctx);
  }
  return PadicScalar::from_unit(vmin, sum, width, ctx);
}

PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) {
  using Kind = PadicScalar::Kind;
  const PadicContext& ctx = x.ctx_;
  if (x.kind_ == Kind::exact_zero || y.kind_ == Kind::exact_zero) return PadicScalar::zero(ctx);
  // O(p^A) * p^v u = O(p^(A+v)); O(p^A) * O(p^B) = O(p^(A+B)).
  if (x.kind_ == Kind::approx_zero || y.kind_ == Kind::approx_zero)
    return PadicScalar::approx_zero(x.val_ + y.val_, ctx);
  PadicScalar r(ctx);
  r.kind_ = Kind::value;
  r.val_ = x.val_ + y.val_;
  r.digits_ = std::min(x.digits_, y.digits_);
  r.modulus_ = ctx.power(r.digits_);
  r.unit_ = mulmod(x.unit_ % r.modulus_, y.unit_ % r.modulus_, r.modulus_);
  return r;
}

PadicScalar operator/(const PadicScalar& x, const PadicScalar& y) { return x * inv(y); }

bool operator==(const PadicScalar& x, const PadicScalar& y) noexcept {
  if (x.kind_ != y.kind_) return false;
  switch (x.kind_) {
    case PadicScalar::Kind::exact_zero: return true;
    case PadicScalar::Kind::approx_zero: return x.val_ == y.val_;
    case PadicScalar::Kind::value:
      return x.val_ == y.val_ && x.digits_ == y.digits_ && x.unit_ == y.unit_;
  }
  return false;
}

PadicScalar add(const PadicScalar& x, const PadicScalar& y) {
  PadicScalar s = x + y;
  if (s.is_approx_zero())
    fail(ErrorCode::precision_exhausted,
         "addition cancelled every known digit (result O(p^" + std::to_string(s.valuation_lower_bound()) + "))");
  return s;
}

PadicScalar neg(const PadicScalar& x) { return -x; }

PadicScalar mul(const PadicScalar& x, const PadicScalar& y) {
  if (x.is_approx_zero() || y.is_approx_zero())
    fail(ErrorCode::precision_exhausted, "product with an uncertified zero");
  return x * y;
}

PadicScalar inv(const PadicScalar& x) {
  if (x.is_exact_zero()) fail(ErrorCode::division_by_zero, "inverse of zero");
  if (x.is_approx_zero()) fail(ErrorCode::precision_exhausted, "inverse of an uncertified zero");
  return PadicScalar::from_unit(-x.valuation(), invmod(x.unit(), x.context().power(x.known_digits())),
                                x.known_digits(), x.context());
}

bool agree_to(const PadicScalar& x, const PadicScalar& y, int prec) {
  return (x - y).valuation_lower_bound() >= prec;
}

std::optional<Rational> PadicScalar::rational_reconstruction() const {
  if (kind_ == Kind::exact_zero) return Rational(0);
  if (kind_ == Kind::approx_zero) return std::nullopt;
  if (digits_ < std::max(1, ctx_.precision() - 2)) return std::nullopt;
  // Wang's lattice reduction: a/b == unit mod p^r with |a|, b <= sqrt(p^r / 2).
  const i128 m = modulus_;
  i128 bound = static_cast<i128>(std::sqrt(static_cast<long double>(m) / 2));
  while (bound * bound * 2 > m) --bound;
  while ((bound + 1) * (bound + 1) * 2 <= m) ++bound;
  i128 r0 = m, r1 = unit_, s0 = 0, s1 = 1;
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
  if (b == 0 || b > bound) return std::nullopt;
  // Wang's bound alone accepts about half of all residues. Asking for a small
  // height |a| b <= sqrt(p^r) keeps chance fits rare.
  {
    const i128 abs_a = a < 0 ? -a : a;
    i128 root = static_cast<i128>(std::sqrt(static_cast<long double>(m)));
    while (root * root > m) --root;
    if (abs_a * b > root) return std::nullopt;
  }
  if (std::gcd(static_cast<std::int64_t>(b), static_cast<std::int64_t>(ctx_.prime())) != 1) return std::nullopt;
  try {
    return Rational(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)) * rational_power(ctx_.prime(), val_);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string PadicScalar::to_digit_string() const {
  switch (kind_) {
    case Kind::exact_zero: return "0";
    case Kind::approx_zero: return "O(" + std::to_string(ctx_.prime()) + "^" + std::to_string(val_) + ")";
    case Kind::value: break;
  }
  std::ostringstream os;
  os << ctx_.prime() << '^' << val_ << " * " << unit_ << " (" << digits_ << " digits)";
  return os.str();
}

std::string PadicScalar::to_string() const {
  if (auto q = rational_reconstruction()) {
    std::ostringstream os;
    os << q->numerator();
    if (q->denominator() != 1) os << '/' << q->denominator();
    return os.str();
  }
  return to_digit_string();
}

std::ostream& operator<<(std::ostream& os, const PadicScalar& x) { return os << x.to_string(); }

}  // namespace padlab
