#include "padlab/entropy_lab.hpp"

#include "padlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace padlab {

void validate_probability_vector(const std::vector<double>& w, const char* what) {
  if (w.empty()) fail(ErrorCode::invalid_input, std::string(what) + " is empty");
  double sum = 0.0;
  for (double x : w) {
    if (!std::isfinite(x) || x < 0.0) fail(ErrorCode::invalid_input, std::string(what) + " has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbTolerance)
    fail(ErrorCode::invalid_input, std::string(what) + " does not sum to 1");
}

double phi(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) fail(ErrorCode::dimension_mismatch, "phi: vectors differ in length");
  validate_probability_vector(p, "p");
  validate_probability_vector(q, "q");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (p[i] == 0.0) fail(ErrorCode::support_mismatch, "q has mass where p vanishes");
    acc += q[i] * std::log(q[i] / p[i]);
  }
  return std::max(acc, 0.0);
}

PinskerReport pinsker_check(const std::vector<double>& p, const std::vector<double>& q) {
  PinskerReport r;
  r.bound = 2.0 * phi(p, q);
  for (std::size_t i = 0; i < p.size(); ++i) r.l1 += std::abs(p[i] - q[i]);
  r.holds = r.l1 * r.l1 <= r.bound + 1e-12;
  return r;
}

double shannon_entropy(const std::vector<double>& q) {
  double h = 0.0;
  for (double x : q)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

MarkovMeasure::MarkovMeasure(std::vector<std::vector<double>> transition) : t_(std::move(transition)) {
  const std::size_t s = t_.size();
  if (s == 0) fail(ErrorCode::invalid_input, "transition matrix is empty");
  for (const auto& row : t_) {
    if (row.size() != s) fail(ErrorCode::invalid_input, "transition matrix is not square");
    validate_probability_vector(row, "transition row");
  }
  // Solve pi (T - I) = 0 with the last equation replaced by sum pi = 1.
  std::vector<std::vector<double>> a(s, std::vector<double>(s + 1, 0.0));
  for (std::size_t j = 0; j < s; ++j)
    for (std::size_t i = 0; i < s; ++i) a[j][i] = t_[i][j] - (i == j ? 1.0 : 0.0);
  for (std::size_t i = 0; i < s; ++i) a[s - 1][i] = 1.0;
  a[s - 1][s] = 1.0;
  for (std::size_t c = 0; c < s; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < s; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) fail(ErrorCode::invalid_input, "stationary distribution is not unique");
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < s; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= s; ++k) a[r][k] -= f * a[c][k];
    }
  }
  pi_.resize(s);
  for (std::size_t i = 0; i < s; ++i) pi_[i] = std::max(0.0, a[i][s] / a[i][i]);
  const double total = std::accumulate(pi_.begin(), pi_.end(), 0.0);
  for (double& x : pi_) x /= total;
  if (stationarity_residual() > 1e-12) fail(ErrorCode::invalid_input, "stationary distribution is ill-conditioned");
}

MarkovMeasure MarkovMeasure::uniform(int s) {
  if (s < 1) fail(ErrorCode::invalid_input, "symbol count must be positive");
  return MarkovMeasure(std::vector<std::vector<double>>(static_cast<std::size_t>(s),
                                                        std::vector<double>(static_cast<std::size_t>(s), 1.0 / s)));
}

MarkovMeasure MarkovMeasure::bernoulli(const std::vector<double>& q) {
  return MarkovMeasure(std::vector<std::vector<double>>(q.size(), q));
}

double MarkovMeasure::stationarity_residual() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < t_.size(); ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) v += pi_[i] * t_[i][j];
    worst = std::max(worst, std::abs(v - pi_[j]));
  }
  return worst;
}

double MarkovMeasure::word_measure(const std::vector<int>& word) const {
  if (word.empty()) return 1.0;
  double m = pi_[static_cast<std::size_t>(word.back())];
  for (std::size_t i = word.size() - 1; i-- > 0;)
    m *= t_[static_cast<std::size_t>(word[i + 1])][static_cast<std::size_t>(word[i])];
  return m;
}

double entropy_rate(const MarkovMeasure& m) {
  double h = 0.0;
  for (int s = 0; s < m.symbols(); ++s)
    h += m.stationary()[static_cast<std::size_t>(s)] * shannon_entropy(m.transition()[static_cast<std::size_t>(s)]);
  return h;
}

double gap_integral(const MarkovMeasure& m) {
  const std::vector<double> uniform(static_cast<std::size_t>(m.symbols()), 1.0 / m.symbols());
  double b = 0.0;
  for (int s = 0; s < m.symbols(); ++s)
    b += m.stationary()[static_cast<std::size_t>(s)] * phi(uniform, m.transition()[static_cast<std::size_t>(s)]);
  return b;
}

GapReport entropy_gap(const MarkovMeasure& m, int nu_total, std::uint64_t p) {
  if (nu_total < 0) fail(ErrorCode::invalid_input, "|nu| must be nonnegative");
  std::uint64_t expected = 1;
  for (int i = 0; i < nu_total && expected <= 1'000'000; ++i) expected *= p;
  if (expected != static_cast<std::uint64_t>(m.symbols()))
    fail(ErrorCode::symbol_count_mismatch, "chain has " + std::to_string(m.symbols()) + " symbols but p^|nu| = " +
                                               std::to_string(expected));
  GapReport r;
  r.side_a = nu_total * std::log(static_cast<double>(p)) - entropy_rate(m);
  r.side_b = gap_integral(m);
  r.agree = std::abs(r.side_a - r.side_b) <= 1e-10;
  return r;
}

CylinderFunction CylinderFunction::make(int s, int depth, std::vector<double> values) {
  if (s < 1) fail(ErrorCode::invalid_input, "symbol count must be positive");
  if (depth < 0) fail(ErrorCode::invalid_input, "depth must be nonnegative");
  std::size_t words = 1;
  for (int i = 0; i < depth; ++i) {
    words *= static_cast<std::size_t>(s);
    if (words > (std::size_t{1} << 24)) fail(ErrorCode::invalid_input, "cylinder function is too large");
  }
  if (values.size() != words)
    fail(ErrorCode::invalid_input, "cylinder function needs s^depth = " + std::to_string(words) + " values");
  for (double v : values)
    if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "cylinder function values must be finite");
  return CylinderFunction{s, depth, std::move(values)};
}

double CylinderFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double CylinderFunction::mean() const {
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double CylinderFunction::integrate(const MarkovMeasure& m) const {
  if (m.symbols() != s) fail(ErrorCode::symbol_count_mismatch, "function and measure use different alphabets");
  std::vector<int> word(static_cast<std::size_t>(depth), 0);
  double acc = 0.0;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    std::size_t rest = idx;
    for (int i = depth; i-- > 0;) {
      word[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(s));
      rest /= static_cast<std::size_t>(s);
    }
    acc += values[idx] * m.word_measure(word);
  }
  return acc;
}

namespace {

// Average over symbol position `pos` (0 = most significant digit).
CylinderFunction average_position(const CylinderFunction& f, int pos) {
  CylinderFunction g = f;
  std::size_t stride = 1;
  for (int i = pos + 1; i < f.depth; ++i) stride *= static_cast<std::size_t>(f.s);
  const std::size_t block = stride * static_cast<std::size_t>(f.s);
  for (std::size_t base = 0; base < f.values.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off) {
      double sum = 0.0;
      for (int c = 0; c < f.s; ++c) sum += f.values[base + off + static_cast<std::size_t>(c) * stride];
      for (int c = 0; c < f.s; ++c) g.values[base + off + static_cast<std::size_t>(c) * stride] = sum / f.s;
    }
  return g;
}

}  // namespace

CylinderFunction haar_average(const CylinderFunction& f, int n) {
  CylinderFunction g = f;
  if (n <= 0) return g;
  // Direct average over all s^n prefixes.
  const int k = std::min(n, f.depth);
  std::size_t prefixes = 1;
  for (int i = 0; i < k; ++i) prefixes *= static_cast<std::size_t>(f.s);
  const std::size_t tail = f.values.size() / prefixes;
  for (std::size_t t = 0; t < tail; ++t) {
    double sum = 0.0;
    for (std::size_t pre = 0; pre < prefixes; ++pre) sum += f.values[pre * tail + t];
    for (std::size_t pre = 0; pre < prefixes; ++pre) g.values[pre * tail + t] = sum / static_cast<double>(prefixes);
  }
  return g;
}

std::vector<CylinderFunction> f_sequence(const CylinderFunction& f, int n_max) {
  if (n_max < 0) fail(ErrorCode::invalid_input, "n_max must be nonnegative");
  std::vector<CylinderFunction> seq{f};
  for (int n = 0; n < n_max; ++n)
    seq.push_back(n < f.depth ? average_position(seq.back(), n) : seq.back());
  return seq;
}

TelescopeReport telescope_bound_check(const CylinderFunction& f, const MarkovMeasure& m) {
  if (m.symbols() != f.s) fail(ErrorCode::symbol_count_mismatch, "function and measure use different alphabets");
  TelescopeReport r;
  r.gap = gap_integral(m);
  const auto seq = f_sequence(f, f.depth);
  std::vector<double> integrals;
  for (const auto& fn : seq) integrals.push_back(fn.integrate(m));
  r.steps_hold = true;
  for (int n = 0; n < f.depth; ++n) {
    const double d = std::abs(integrals[static_cast<std::size_t>(n) + 1] - integrals[static_cast<std::size_t>(n)]);
    const double b = std::sqrt(2.0) * seq[static_cast<std::size_t>(n)].sup_norm() * std::sqrt(r.gap);
    r.delta.push_back(d);
    r.step_bound.push_back(b);
    r.delta_sum += d;
    if (d > b + 1e-12) r.steps_hold = false;
  }
  r.haar_mean = f.mean();
  r.mu_integral = integrals.front();
  r.total = std::abs(r.haar_mean - r.mu_integral);
  r.total_holds = r.total <= r.delta_sum + 1e-12;
  return r;
}

}  // namespace padlab
