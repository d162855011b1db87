#include "padlab/spectral.hpp"

#include "padlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace padlab {

double xi_pgl2(std::uint64_t p, int k) {
  if (p < 2) fail(ErrorCode::invalid_input, "p must be at least 2");
  if (k < 0) fail(ErrorCode::invalid_input, "xi needs k >= 0");
  if (k == 0) return 1.0;
  const double pd = static_cast<double>(p);
  return std::pow(pd, -0.5 * k) * (k * (pd - 1.0) + pd + 1.0) / (pd + 1.0);
}

std::vector<int> cartan_valuations(const PadicMatrix& g) {
  if (g.rows() != g.cols()) fail(ErrorCode::dimension_mismatch, "Cartan data needs a square matrix");
  const auto s = eliminate_summary(g);
  if (s.rank != g.rows()) fail(ErrorCode::singular_at_precision, "matrix is singular at working precision");
  std::vector<int> k = s.pivot_valuations;
  std::sort(k.begin(), k.end(), std::greater<>());
  return k;
}

double oh_bound(std::uint64_t p, int m, const std::vector<int>& cartan, int dim_kv, int dim_kw) {
  if (m < 2) fail(ErrorCode::invalid_input, "oh bound needs m >= 2");
  if (static_cast<int>(cartan.size()) != m) fail(ErrorCode::dimension_mismatch, "Cartan list must have length m");
  if (dim_kv < 1 || dim_kw < 1) fail(ErrorCode::invalid_input, "K-orbit dimensions must be positive");
  double b = std::sqrt(static_cast<double>(dim_kv) * static_cast<double>(dim_kw));
  for (int i = 0; i < m / 2; ++i) {
    const int e = cartan[static_cast<std::size_t>(i)] - cartan[static_cast<std::size_t>(m - 1 - i)];
    if (e < 0) fail(ErrorCode::negative_exponent, "Cartan list is not descending");
    b *= xi_pgl2(p, e);
  }
  return b;
}

void MixingParams::validate() const {
  for (double v : {c, alpha, delta})
    if (!std::isfinite(v) || v <= 0.0) fail(ErrorCode::invalid_input, "mixing parameters must be positive");
}

double mixing_bound(const MixingParams& params, std::uint64_t p, int l_f, int l_h, double a_norm, int n) {
  params.validate();
  if (n < 0) fail(ErrorCode::invalid_input, "n must be nonnegative");
  if (!(a_norm > 1.0)) fail(ErrorCode::invalid_input, "||a|| must exceed 1");
  return params.c * std::pow(static_cast<double>(p), (l_f + l_h) * params.alpha) *
         std::pow(a_norm, -params.delta * n);
}

double ball_measure_at(int k, double base_ball_measure, int d, std::uint64_t p) {
  if (k < 2) fail(ErrorCode::level_too_small, "ball measure needs k >= 2");
  return base_ball_measure * std::pow(static_cast<double>(p), -static_cast<double>(d) * (k - 2));
}

void ConstantsBundle::validate() const {
  mixing.validate();
  if (p < 2) fail(ErrorCode::invalid_input, "p must be at least 2");
  if (d < 1) fail(ErrorCode::invalid_input, "d must be positive");
  if (!(base_ball_measure > 0.0 && base_ball_measure <= 1.0))
    fail(ErrorCode::invalid_input, "base ball measure must lie in (0, 1]");
  if (!std::isfinite(entropy_nats) || entropy_nats < 0.0) fail(ErrorCode::invalid_input, "entropy must be nonnegative");
  if (nu_total < 0) fail(ErrorCode::invalid_input, "|nu| must be nonnegative");
  if (!std::isfinite(a_norm)) fail(ErrorCode::invalid_input, "||a|| must be finite");
}

double equidistribution_bound(const ConstantsBundle& b, int l_f, int n) {
  b.validate();
  if (n < 0) fail(ErrorCode::invalid_input, "n must be nonnegative");
  if (!(b.a_norm > 1.0)) fail(ErrorCode::divergent_series, "||a|| must exceed 1");
  const double pd = static_cast<double>(b.p);
  const double a = b.mixing.alpha, half_d = 0.5 * b.d;
  return b.mixing.c / std::sqrt(b.base_ball_measure) * std::pow(pd, (a + half_d) * b.nu_total + 2.0 * a) *
         std::pow(pd, l_f * (2.0 * a + half_d)) * std::pow(b.a_norm, -b.mixing.delta * n);
}

double test_vector_norm_bound(const ConstantsBundle& b, int l_f) {
  b.validate();
  return std::pow(static_cast<double>(b.p), 0.5 * b.d * (l_f + b.nu_total)) / std::sqrt(b.base_ball_measure);
}

double kappa(const ConstantsBundle& b) {
  b.validate();
  if (!(b.a_norm > 1.0)) fail(ErrorCode::divergent_series, "geometric series diverges for ||a|| <= 1");
  const double a = b.mixing.alpha;
  return std::sqrt(2.0) * b.mixing.c * std::pow(static_cast<double>(b.p), 2.0 * a) / std::sqrt(b.base_ball_measure) /
         (1.0 - std::pow(b.a_norm, -b.mixing.delta)) * std::exp((3.0 * a + b.d) * b.entropy_nats);
}

double theorem1_rhs(double kappa_value, std::uint64_t p, double alpha, int d, int l_f, double f_l2_norm, double gap) {
  if (gap < 0.0) fail(ErrorCode::negative_gap, "entropy gap is negative");
  if (f_l2_norm < 0.0) fail(ErrorCode::invalid_input, "L2 norm must be nonnegative");
  return kappa_value * std::pow(static_cast<double>(p), (2.0 * alpha + 0.5 * d) * l_f) * f_l2_norm * std::sqrt(gap);
}

}  // namespace padlab
