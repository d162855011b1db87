#pragma once

#include "padlab/padic.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace padlab {

// Dense matrix over Q_p. Most of the library works with square d x d
// matrices; elimination routines also accept rectangular systems.
class PadicMatrix {
 public:
  PadicMatrix(PadicContext ctx, std::size_t rows, std::size_t cols);
  PadicMatrix(PadicContext ctx, std::size_t dim) : PadicMatrix(ctx, dim, dim) {}

  static PadicMatrix identity(PadicContext ctx, std::size_t dim);
  static PadicMatrix diagonal(std::span<const PadicScalar> entries);
  // E_ij (0-based).
  static PadicMatrix unit(PadicContext ctx, std::size_t dim, std::size_t i, std::size_t j);
  static PadicMatrix from_rationals(PadicContext ctx, const std::vector<std::vector<Rational>>& rows);

  const PadicContext& context() const noexcept { return ctx_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::size_t dim() const noexcept { return rows_; }

  PadicScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const PadicScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const PadicScalar> entries() const noexcept { return data_; }

  PadicMatrix& operator+=(const PadicMatrix& o);
  PadicMatrix& operator-=(const PadicMatrix& o);

  // Caps every entry at absolute precision `bound`.
  PadicMatrix truncated(int bound) const;

  bool operator==(const PadicMatrix& o) const = default;

 private:
  PadicContext ctx_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<PadicScalar> data_;
};

PadicMatrix operator+(PadicMatrix a, const PadicMatrix& b);
PadicMatrix operator-(PadicMatrix a, const PadicMatrix& b);
PadicMatrix operator-(const PadicMatrix& a);
PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b);
PadicMatrix operator*(const PadicScalar& s, const PadicMatrix& a);

inline PadicMatrix mat_mul(const PadicMatrix& a, const PadicMatrix& b) { return a * b; }
inline PadicMatrix mat_add(const PadicMatrix& a, const PadicMatrix& b) { return a + b; }
inline PadicMatrix mat_scale(const PadicScalar& s, const PadicMatrix& a) { return s * a; }
PadicMatrix transpose(const PadicMatrix& a);
PadicMatrix commutator(const PadicMatrix& a, const PadicMatrix& b);
PadicScalar trace(const PadicMatrix& a);

// Lower bound on min_ij v(M_ij); kInfiniteValuation for the exact zero matrix.
int norm_valuation_bound(const PadicMatrix& m);
// min_ij v(M_ij) when it is certified (some entry attains it and no
// uncertified entry could be smaller); nullopt otherwise.
std::optional<int> certified_norm_valuation(const PadicMatrix& m);
// ||M|| = max |M_ij|_p as an exact rational. Throws PrecisionExhausted if not certified.
Rational max_norm(const PadicMatrix& m);
// Every entry of a - b is certified to vanish modulo p^prec.
bool agree_to(const PadicMatrix& a, const PadicMatrix& b, int prec);
// Smallest absolute precision among the entries.
int absolute_precision(const PadicMatrix& m);

// Full minimal-valuation pivoting (ties broken in row-major order).
PadicScalar det(const PadicMatrix& m);
PadicMatrix inverse(const PadicMatrix& m);
// Rank and pivot valuations (the elementary divisors, nondecreasing).
struct EliminationSummary {
  std::size_t rank = 0;
  std::vector<int> pivot_valuations;
};
EliminationSummary eliminate_summary(const PadicMatrix& m);

// Kernel basis; each vector has one entry per column of m.
std::vector<std::vector<PadicScalar>> kernel_basis(const PadicMatrix& m);

// Coordinates c with sum_j c_j * basis[j] == target (matrices compared entrywise).
// Throws InvalidInput if the target is not in the span at precision.
std::vector<PadicScalar> solve_in_span(std::span<const PadicMatrix> basis, const PadicMatrix& target);

// Z_p-basis of span(vectors) intersected with integral matrices. Each output
// vector is integral and has an entry of valuation exactly 0.
std::vector<PadicMatrix> zp_module_basis(std::span<const PadicMatrix> vectors);

std::ostream& operator<<(std::ostream& os, const PadicMatrix& m);

}  // namespace padlab
