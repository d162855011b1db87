#pragma once

/*
 * Elements of Q_p at bounded relative precision.
 *
 * A nonzero scalar is stored as p^v * u where u is a unit known modulo p^r
 * (r "known digits", 1 <= r <= N). The element is therefore certified to
 * absolute precision v + r. Two further states exist:
 *
 *   exact zero   - produced from the rational 0 or by exact cancellation of
 *                  identical representations; valuation +infinity.
 *   approx zero  - O(p^A): every certified digit cancelled. Only a lower
 *                  bound A on the valuation is known.
 *
 * The operators (+, -, *, /) are lenient: cancellation past the certified
 * digits yields an approx zero so that matrix kernels keep running. The
 * checked field operations add/mul/inv raise PrecisionExhausted instead.
 */

#include <boost/rational.hpp>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace padlab {

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

using Rational = boost::rational<std::int64_t>;

class PadicContext {
 public:
  static constexpr int kDefaultPrecision = 12;

  // Throws InvalidInput unless p is prime, precision >= 1 and p^precision < 2^62.
  explicit PadicContext(std::uint64_t p, int precision = kDefaultPrecision);

  std::uint64_t prime() const noexcept { return p_; }
  int precision() const noexcept { return n_; }

  // p^e for 0 <= e <= precision.
  std::uint64_t power(int e) const noexcept;

  bool operator==(const PadicContext&) const = default;

 private:
  std::uint64_t p_;
  int n_;
};

bool is_prime(std::uint64_t n) noexcept;

// p-adic valuation of a nonzero integer.
int integer_valuation(std::int64_t a, std::uint64_t p) noexcept;

class PadicScalar {
 public:
  enum class Kind : std::uint8_t { exact_zero, value, approx_zero };

  explicit PadicScalar(PadicContext ctx) : ctx_(ctx) {}

  static PadicScalar zero(PadicContext ctx) { return PadicScalar(ctx); }
  static PadicScalar one(PadicContext ctx) { return from_integer(1, ctx); }
  static PadicScalar from_integer(std::int64_t a, PadicContext ctx) { return from_rational(a, 1, ctx); }
  // a/b at full relative precision N. Throws DivisionByZero for b == 0.
  static PadicScalar from_rational(std::int64_t a, std::int64_t b, PadicContext ctx);
  static PadicScalar from_rational(const Rational& q, PadicContext ctx) {
    return from_rational(q.numerator(), q.denominator(), ctx);
  }
  // p^valuation * unit with `digits` known digits; unit is reduced mod p^digits.
  static PadicScalar from_unit(int valuation, std::uint64_t unit, int digits, PadicContext ctx);
  // O(p^bound).
  static PadicScalar approx_zero(int bound, PadicContext ctx);
  // p^e exactly (full precision).
  static PadicScalar power_of_p(int e, PadicContext ctx) { return from_unit(e, 1, ctx.precision(), ctx); }
  // Parses "a/b" or "a" (decimal integers, optional sign).
  static PadicScalar parse(std::string_view text, PadicContext ctx);

  const PadicContext& context() const noexcept { return ctx_; }
  Kind kind() const noexcept { return kind_; }
  bool is_exact_zero() const noexcept { return kind_ == Kind::exact_zero; }
  bool is_approx_zero() const noexcept { return kind_ == Kind::approx_zero; }
  bool is_value() const noexcept { return kind_ == Kind::value; }
  // Exact zero or approx zero: no certified nonzero digit.
  bool is_zero_at_precision() const noexcept { return kind_ != Kind::value; }

  // Certified valuation; +infinity for exact zero. Throws PrecisionExhausted on approx zero.
  int valuation() const;
  // v for values, A for O(p^A), +infinity for exact zero.
  int valuation_lower_bound() const noexcept;
  // v + r for values, A for O(p^A), +infinity for exact zero.
  int absolute_precision() const noexcept;
  int known_digits() const noexcept { return digits_; }
  std::uint64_t unit() const noexcept { return unit_; }
  // The unit digit u mod p; 0 unless this is a value of valuation 0.
  std::uint64_t residue() const noexcept;
  // Representative in [0, p^prec) of this integral element modulo p^prec.
  // Throws PrecisionExhausted if prec exceeds the absolute precision and
  // DomainError if the element is not integral.
  std::uint64_t residue_mod(int prec) const;

  // |x|_p = p^-v as an exact rational; 0 for exact zero.
  Rational norm() const;

  // Caps absolute precision at `bound` (adds O(p^bound)).
  PadicScalar truncated(int bound) const;

  // Small rational a/b congruent to this element at its known digits, if one
  // exists with |a| b <= sqrt(p^digits) (and at least N - 2 digits are known).
  std::optional<Rational> rational_reconstruction() const;
  // "a/b" when reconstruction succeeds, otherwise the digit form.
  std::string to_string() const;
  // "p^v * u (r digits)", "0" or "O(p^A)".
  std::string to_digit_string() const;

  PadicScalar operator-() const;
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

  friend PadicScalar operator+(const PadicScalar& x, const PadicScalar& y);
  friend PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return x + (-y); }
  friend PadicScalar operator*(const PadicScalar& x, const PadicScalar& y);
  friend PadicScalar operator/(const PadicScalar& x, const PadicScalar& y);

  // Representation equality (same state, valuation, digits and unit).
  friend bool operator==(const PadicScalar& x, const PadicScalar& y) noexcept;

 private:
  PadicContext ctx_;
  std::uint64_t unit_ = 0;
  std::uint64_t modulus_ = 1;  // p^digits_
  std::int32_t val_ = 0;       // valuation, or the bound A of an approx zero
  std::int32_t digits_ = 0;
  Kind kind_ = Kind::exact_zero;
};

// Checked field operations.
PadicScalar add(const PadicScalar& x, const PadicScalar& y);
PadicScalar neg(const PadicScalar& x);
PadicScalar mul(const PadicScalar& x, const PadicScalar& y);
PadicScalar inv(const PadicScalar& x);

inline int valuation(const PadicScalar& x) { return x.valuation(); }
inline Rational norm(const PadicScalar& x) { return x.norm(); }

// True when x - y has no certified digit below p^prec.
bool agree_to(const PadicScalar& x, const PadicScalar& y, int prec);

std::ostream& operator<<(std::ostream& os, const PadicScalar& x);

// Rational p^e; throws InvalidInput on int64 overflow.
Rational rational_power(std::uint64_t p, int e);

}  // namespace padlab
