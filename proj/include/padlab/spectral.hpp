#pragma once

// Closed-form spectral constants. Everything here is double precision except
// cartan_valuations, which reads valuations off a p-adic elimination.

#include "padlab/matrix.hpp"

#include <cstdint>
#include <vector>

namespace padlab {

// Harish-Chandra function of PGL_2(Q_p) at diag(p^k, 1):
// p^(-k/2) (k(p - 1) + p + 1) / (p + 1). InvalidInput for k < 0.
double xi_pgl2(std::uint64_t p, int k);

// Valuations k_1 >= ... >= k_m of the diagonal Cartan factor of g, read from
// the elementary divisors. SingularAtPrecision if g is not invertible.
std::vector<int> cartan_valuations(const PadicMatrix& g);

// sqrt(dimKv dimKw) prod_{i <= m/2} xi(k_i - k_{m+1-i}). NegativeExponent if
// the list is not descending.
double oh_bound(std::uint64_t p, int m, const std::vector<int>& cartan, int dim_kv, int dim_kw);

struct MixingParams {
  double c = 1.0;
  double alpha = 1.0;
  double delta = 1.0;

  // InvalidInput unless all three are strictly positive and finite.
  void validate() const;
};

// c p^((l_f + l_h) alpha) ||a||^(-delta n).
double mixing_bound(const MixingParams& params, std::uint64_t p, int l_f, int l_h, double a_norm, int n);

// base p^(-d(k - 2)), k >= 2.
double ball_measure_at(int k, double base_ball_measure, int d, std::uint64_t p);

struct ConstantsBundle {
  MixingParams mixing;
  std::uint64_t p = 2;
  int d = 1;
  double entropy_nats = 0.0;
  double base_ball_measure = 1.0;
  double a_norm = 2.0;
  int nu_total = 0;
  bool lf_shift_applied = false;

  void validate() const;
};

// (c / sqrt(base)) p^((alpha + d/2)|nu| + 2 alpha) p^(l_f (2 alpha + d/2)) ||a||^(-delta n),
// per unit L^2 norm of f.
double equidistribution_bound(const ConstantsBundle& b, int l_f, int n);

// ||h_x - 1|| <= p^(d (l_f + |nu|) / 2) / sqrt(base).
double test_vector_norm_bound(const ConstantsBundle& b, int l_f);

// sqrt(2) c p^(2 alpha) base^(-1/2) (1 - ||a||^(-delta))^(-1) exp((3 alpha + d) h).
// DivergentSeries if ||a|| <= 1.
double kappa(const ConstantsBundle& b);

// kappa p^((2 alpha + d/2) l_f) ||f|| sqrt(gap). NegativeGap if gap < 0.
double theorem1_rhs(double kappa_value, std::uint64_t p, double alpha, int d, int l_f, double f_l2_norm, double gap);

}  // namespace padlab
