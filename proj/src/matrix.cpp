#include "padlab/matrix.hpp"

#include "padlab/error.hpp"

#include <algorithm>
#include <ostream>

namespace padlab {

namespace {

void require_same_shape(const PadicMatrix& a, const PadicMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::dimension_mismatch, std::string(what) + ": shapes differ");
  if (!(a.context() == b.context())) fail(ErrorCode::dimension_mismatch, std::string(what) + ": contexts differ");
}

void require_square(const PadicMatrix& m, const char* what) {
  if (!m.is_square()) fail(ErrorCode::dimension_mismatch, std::string(what) + " needs a square matrix");
}

// Gauss-Jordan state over an augmented block [A | B]. Pivots are chosen among
// the first `ncols` columns only.
struct Reduction {
  PadicMatrix work;
  std::size_t ncols;
  std::vector<std::size_t> pivot_col;  // pivot column of row i, for i < rank
  std::vector<int> pivot_val;
  std::size_t rank = 0;
  int swaps = 0;
};

// Finds the value entry of least valuation in rows >= r, columns not yet used.
// Ties go to the first in row-major order.
bool find_pivot(const Reduction& red, const std::vector<bool>& used, std::size_t r, std::size_t& pi,
                std::size_t& pj) {
  int best = kInfiniteValuation;
  bool found = false;
  for (std::size_t i = r; i < red.work.rows(); ++i)
    for (std::size_t j = 0; j < red.ncols; ++j) {
      if (used[j]) continue;
      const PadicScalar& x = red.work(i, j);
      if (x.is_value() && x.valuation() < best) {
        best = x.valuation();
        pi = i;
        pj = j;
        found = true;
      }
    }
  return found;
}

// normalize: divide each pivot row by its pivot. jordan: clear the pivot
// column above the pivot as well.
Reduction reduce(PadicMatrix m, std::size_t ncols, bool jordan, bool normalize) {
  Reduction red{std::move(m), ncols, {}, {}, 0, 0};
  PadicMatrix& w = red.work;
  std::vector<bool> used(ncols, false);
  std::size_t r = 0;
  std::size_t pi = 0, pj = 0;
  while (r < w.rows() && find_pivot(red, used, r, pi, pj)) {
    if (pi != r) {
      for (std::size_t j = 0; j < w.cols(); ++j) std::swap(w(pi, j), w(r, j));
      ++red.swaps;
    }
    used[pj] = true;
    const PadicScalar pivot = w(r, pj);
    red.pivot_col.push_back(pj);
    red.pivot_val.push_back(pivot.valuation());
    const PadicScalar pinv = inv(pivot);
    if (normalize) {
      for (std::size_t j = 0; j < w.cols(); ++j) w(r, j) = w(r, j) * pinv;
      w(r, pj) = PadicScalar::one(w.context());
    }
    for (std::size_t i = jordan ? 0 : r + 1; i < w.rows(); ++i) {
      if (i == r || w(i, pj).is_exact_zero()) continue;
      const PadicScalar factor = normalize ? w(i, pj) : w(i, pj) * pinv;
      for (std::size_t j = 0; j < w.cols(); ++j) {
        if (j == pj) continue;
        if (!w(r, j).is_exact_zero()) w(i, j) = w(i, j) - factor * w(r, j);
      }
      w(i, pj) = PadicScalar::zero(w.context());
    }
    ++r;
  }
  red.rank = r;
  return red;
}

PadicMatrix flatten_columns(std::span<const PadicMatrix> vectors) {
  const PadicMatrix& first = vectors.front();
  const std::size_t len = first.rows() * first.cols();
  PadicMatrix a(first.context(), len, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_same_shape(first, vectors[j], "vector list");
    for (std::size_t i = 0; i < len; ++i) a(i, j) = vectors[j].entries()[i];
  }
  return a;
}

}  // namespace

PadicMatrix::PadicMatrix(PadicContext ctx, std::size_t rows, std::size_t cols)
    : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols, PadicScalar::zero(ctx)) {
  if (rows == 0 || cols == 0) fail(ErrorCode::dimension_mismatch, "matrix dimensions must be positive");
}

PadicMatrix PadicMatrix::identity(PadicContext ctx, std::size_t dim) {
  PadicMatrix m(ctx, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = PadicScalar::one(ctx);
  return m;
}

PadicMatrix PadicMatrix::diagonal(std::span<const PadicScalar> entries) {
  if (entries.empty()) fail(ErrorCode::dimension_mismatch, "empty diagonal");
  PadicMatrix m(entries.front().context(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

PadicMatrix PadicMatrix::unit(PadicContext ctx, std::size_t dim, std::size_t i, std::size_t j) {
  PadicMatrix m(ctx, dim);
  m(i, j) = PadicScalar::one(ctx);
  return m;
}

PadicMatrix PadicMatrix::from_rationals(PadicContext ctx, const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty() || rows.front().empty()) fail(ErrorCode::invalid_input, "empty matrix literal");
  PadicMatrix m(ctx, rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) fail(ErrorCode::invalid_input, "ragged matrix literal");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = PadicScalar::from_rational(rows[i][j], ctx);
  }
  return m;
}

PadicMatrix& PadicMatrix::operator+=(const PadicMatrix& o) {
  require_same_shape(*this, o, "addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

PadicMatrix& PadicMatrix::operator-=(const PadicMatrix& o) {
  require_same_shape(*this, o, "subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

PadicMatrix PadicMatrix::truncated(int bound) const {
  PadicMatrix m = *this;
  for (auto& x : m.data_) x = x.truncated(bound);
  return m;
}

PadicMatrix operator+(PadicMatrix a, const PadicMatrix& b) { return a += b; }
PadicMatrix operator-(PadicMatrix a, const PadicMatrix& b) { return a -= b; }

PadicMatrix operator-(const PadicMatrix& a) {
  PadicMatrix m(a.context(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = -a(i, j);
  return m;
}

PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::dimension_mismatch, "product: inner dimensions differ");
  if (!(a.context() == b.context())) fail(ErrorCode::dimension_mismatch, "product: contexts differ");
  PadicMatrix m(a.context(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const PadicScalar& aik = a(i, k);
      if (aik.is_exact_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_exact_zero()) m(i, j) += aik * b(k, j);
    }
  return m;
}

PadicMatrix operator*(const PadicScalar& s, const PadicMatrix& a) {
  PadicMatrix m(a.context(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = s * a(i, j);
  return m;
}

PadicMatrix transpose(const PadicMatrix& a) {
  PadicMatrix m(a.context(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(j, i) = a(i, j);
  return m;
}

PadicMatrix commutator(const PadicMatrix& a, const PadicMatrix& b) { return a * b - b * a; }

PadicScalar trace(const PadicMatrix& a) {
  require_square(a, "trace");
  PadicScalar t = PadicScalar::zero(a.context());
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

int norm_valuation_bound(const PadicMatrix& m) {
  int v = kInfiniteValuation;
  for (const auto& x : m.entries()) v = std::min(v, x.valuation_lower_bound());
  return v;
}

std::optional<int> certified_norm_valuation(const PadicMatrix& m) {
  int certified = kInfiniteValuation;
  int uncertain = kInfiniteValuation;
  for (const auto& x : m.entries()) {
    if (x.is_value())
      certified = std::min(certified, x.valuation());
    else if (x.is_approx_zero())
      uncertain = std::min(uncertain, x.valuation_lower_bound());
  }
  if (uncertain < kInfiniteValuation && uncertain < certified) return std::nullopt;
  if (certified == kInfiniteValuation && uncertain < kInfiniteValuation) return std::nullopt;
  return certified;
}

Rational max_norm(const PadicMatrix& m) {
  const auto v = certified_norm_valuation(m);
  if (!v) fail(ErrorCode::precision_exhausted, "matrix norm is not certified at this precision");
  if (*v == kInfiniteValuation) return Rational(0);
  return rational_power(m.context().prime(), -*v);
}

bool agree_to(const PadicMatrix& a, const PadicMatrix& b, int prec) {
  require_same_shape(a, b, "comparison");
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    if (!agree_to(a.entries()[i], b.entries()[i], prec)) return false;
  return true;
}

int absolute_precision(const PadicMatrix& m) {
  int prec = kInfiniteValuation;
  for (const auto& x : m.entries()) prec = std::min(prec, x.absolute_precision());
  return prec;
}

PadicScalar det(const PadicMatrix& m) {
  require_square(m, "det");
  const Reduction red = reduce(m, m.cols(), false, false);
  if (red.rank < m.rows()) {
    // Remaining block carries no certified digit.
    int bound = 0;
    for (int v : red.pivot_val) bound += v;
    int rest = kInfiniteValuation;
    for (std::size_t i = red.rank; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) rest = std::min(rest, red.work(i, j).valuation_lower_bound());
    if (rest == kInfiniteValuation) return PadicScalar::zero(m.context());
    return PadicScalar::approx_zero(bound + rest, m.context());
  }
  // Column order of the pivots defines a permutation whose sign joins the row swaps.
  std::vector<std::size_t> cols = red.pivot_col;
  int parity = red.swaps;
  for (std::size_t i = 0; i < cols.size(); ++i)
    while (cols[i] != i) {
      std::swap(cols[i], cols[cols[i]]);
      ++parity;
    }
  PadicScalar d = PadicScalar::one(m.context());
  for (std::size_t i = 0; i < m.rows(); ++i) d = d * red.work(i, red.pivot_col[i]);
  return parity % 2 ? -d : d;
}

PadicMatrix inverse(const PadicMatrix& m) {
  require_square(m, "inverse");
  const std::size_t n = m.rows();
  PadicMatrix aug(m.context(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = PadicScalar::one(m.context());
  }
  const Reduction red = reduce(std::move(aug), n, true, true);
  if (red.rank < n) fail(ErrorCode::singular_at_precision, "matrix is singular at this precision");
  PadicMatrix result(m.context(), n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) result(red.pivot_col[i], j) = red.work(i, n + j);
  return result;
}

EliminationSummary eliminate_summary(const PadicMatrix& m) {
  const Reduction red = reduce(m, m.cols(), false, false);
  return {red.rank, red.pivot_val};
}

std::vector<std::vector<PadicScalar>> kernel_basis(const PadicMatrix& m) {
  const Reduction red = reduce(m, m.cols(), true, true);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : red.pivot_col) is_pivot[c] = true;
  std::vector<std::vector<PadicScalar>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<PadicScalar> v(m.cols(), PadicScalar::zero(m.context()));
    v[f] = PadicScalar::one(m.context());
    for (std::size_t i = 0; i < red.rank; ++i) v[red.pivot_col[i]] = -red.work(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<PadicScalar> solve_in_span(std::span<const PadicMatrix> basis, const PadicMatrix& target) {
  if (basis.empty()) fail(ErrorCode::invalid_input, "empty basis");
  require_same_shape(basis.front(), target, "solve_in_span");
  PadicMatrix a = flatten_columns(basis);
  PadicMatrix aug(a.context(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = target.entries()[i];
  }
  const Reduction red = reduce(std::move(aug), a.cols(), true, true);
  for (std::size_t i = red.rank; i < a.rows(); ++i)
    if (red.work(i, a.cols()).is_value())
      fail(ErrorCode::invalid_input, "target is not in the span at this precision");
  std::vector<PadicScalar> coords(a.cols(), PadicScalar::zero(a.context()));
  for (std::size_t i = 0; i < red.rank; ++i) coords[red.pivot_col[i]] = red.work(i, a.cols());
  return coords;
}

std::vector<PadicMatrix> zp_module_basis(std::span<const PadicMatrix> vectors) {
  if (vectors.empty()) return {};
  // Rows are the input vectors. With least-valuation pivots every pivot row is
  // integral after normalization, and the reduced rows have a unit in the
  // pivot column, so integral combinations have integral coefficients.
  const PadicMatrix cols = flatten_columns(vectors);
  const Reduction red = reduce(transpose(cols), cols.rows(), true, true);
  std::vector<PadicMatrix> out;
  const PadicMatrix& shape = vectors.front();
  for (std::size_t i = 0; i < red.rank; ++i) {
    PadicMatrix v(shape.context(), shape.rows(), shape.cols());
    for (std::size_t e = 0; e < cols.rows(); ++e) {
      const PadicScalar& x = red.work(i, e);
      if (x.is_value() && x.valuation() < 0)
        fail(ErrorCode::precision_exhausted, "reduced basis vector is not integral at this precision");
      v(e / shape.cols(), e % shape.cols()) = x;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const PadicMatrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << '"' << m(i, j) << '"';
    os << ']';
  }
  return os << ']';
}

}  // namespace padlab
