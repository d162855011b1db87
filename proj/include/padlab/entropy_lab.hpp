#pragma once

// Symbolic model of the conditional-measure argument. Words are read
// coarse-to-fine: a measure on words w_0 ... w_{m-1} picks the last symbol from
// the stationary vector and then each earlier (finer) symbol from the row of
// the transition matrix indexed by the symbol after it. Haar corresponds to
// uniform rows.

#include <cstdint>
#include <vector>

namespace padlab {

inline constexpr double kProbTolerance = 1e-12;

// Throws InvalidInput unless the weights are nonnegative and sum to 1.
void validate_probability_vector(const std::vector<double>& w, const char* what = "probability vector");

// phi_p(q) = sum q_i log(q_i / p_i), natural log, 0 log 0 = 0.
// SupportMismatch if q_i > 0 where p_i = 0.
double phi(const std::vector<double>& p, const std::vector<double>& q);

struct PinskerReport {
  double l1 = 0.0;
  double bound = 0.0;  // 2 phi
  bool holds = false;  // l1^2 <= bound + 1e-12
};
PinskerReport pinsker_check(const std::vector<double>& p, const std::vector<double>& q);

// Shannon entropy in nats.
double shannon_entropy(const std::vector<double>& q);

class MarkovMeasure {
 public:
  // Row-stochastic s x s matrix; the stationary vector is solved for.
  explicit MarkovMeasure(std::vector<std::vector<double>> transition);
  static MarkovMeasure uniform(int s);
  // Every row equal to q.
  static MarkovMeasure bernoulli(const std::vector<double>& q);

  int symbols() const noexcept { return static_cast<int>(t_.size()); }
  const std::vector<std::vector<double>>& transition() const noexcept { return t_; }
  const std::vector<double>& stationary() const noexcept { return pi_; }
  // max_j |(pi T)_j - pi_j|.
  double stationarity_residual() const;
  // Measure of the cylinder w_0 ... w_{m-1}.
  double word_measure(const std::vector<int>& word) const;

 private:
  std::vector<std::vector<double>> t_;
  std::vector<double> pi_;
};

// sum_s' pi_s' H(T[s', .]).
double entropy_rate(const MarkovMeasure& m);

struct GapReport {
  double side_a = 0.0;  // |nu| ln p - h
  double side_b = 0.0;  // sum_s' pi_s' phi(uniform, T[s', .])
  bool agree = false;   // |A - B| <= 1e-10
};
// SymbolCountMismatch unless s = p^nu_total.
GapReport entropy_gap(const MarkovMeasure& m, int nu_total, std::uint64_t p);
// The gap side B alone (any symbol count).
double gap_integral(const MarkovMeasure& m);

// Function of the first `depth` symbols; values indexed by the word read as a
// base-s number with w_0 most significant.
struct CylinderFunction {
  int s = 2;
  int depth = 0;
  std::vector<double> values;

  static CylinderFunction make(int s, int depth, std::vector<double> values);
  std::size_t word_count() const { return values.size(); }
  double sup_norm() const;
  double mean() const;
  double integrate(const MarkovMeasure& m) const;
};

// f averaged uniformly over its first n symbols (same depth, constant in those symbols).
CylinderFunction haar_average(const CylinderFunction& f, int n);
// f_0 ... f_{n_max} through the one-step recursion f_{n+1} = average of f_n over symbol n.
std::vector<CylinderFunction> f_sequence(const CylinderFunction& f, int n_max);

struct TelescopeReport {
  double gap = 0.0;
  std::vector<double> delta;       // |mu(f_{n+1}) - mu(f_n)|
  std::vector<double> step_bound;  // sqrt(2) ||f_n|| sqrt(gap)
  double haar_mean = 0.0;
  double mu_integral = 0.0;
  double total = 0.0;      // |mean(f) - mu(f)|
  double delta_sum = 0.0;  // sum_n delta_n
  bool steps_hold = false;
  bool total_holds = false;
};
TelescopeReport telescope_bound_check(const CylinderFunction& f, const MarkovMeasure& m);

}  // namespace padlab
