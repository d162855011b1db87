#include "padlab/error.hpp"
#include "padlab/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace padlab;

TEST_CASE("xi closed form values") {
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) CHECK(xi_pgl2(p, 0) == 1.0);
  CHECK(xi_pgl2(3, 1) == doctest::Approx(6.0 / 4.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(xi_pgl2(2, 2) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(xi_pgl2(3, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull})
    for (int k = 1; k < 40; ++k) CHECK(xi_pgl2(p, k + 1) < xi_pgl2(p, k));
  CHECK_THROWS_AS(xi_pgl2(3, -1), Error);
}

TEST_CASE("Cartan valuations") {
  const PadicContext ctx(3, 12);
  CHECK(cartan_valuations(PadicMatrix::from_rationals(ctx, {{3, 0}, {0, Rational(1, 3)}})) == std::vector<int>{1, -1});
  CHECK(cartan_valuations(PadicMatrix::identity(ctx, 3)) == std::vector<int>{0, 0, 0});
  CHECK_THROWS_AS(cartan_valuations(PadicMatrix::from_rationals(ctx, {{1, 2}, {2, 4}})), Error);
  gen::Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = static_cast<std::size_t>(rng.integer(2, 4));
    oracle::QMat diag = oracle::zeros(d);
    std::vector<int> k;
    for (std::size_t i = 0; i < d; ++i) {
      k.push_back(static_cast<int>(rng.integer(-3, 3)));
      diag[i][i] = oracle::power(3, k.back());
    }
    const auto g = oracle::mul(oracle::mul(gen::unimodular(rng, d), diag), gen::unimodular(rng, d));
    std::sort(k.rbegin(), k.rend());
    CHECK(cartan_valuations(oracle::to_padic(g, ctx)) == k);
  }
}

TEST_CASE("Oh bound") {
  CHECK(oh_bound(3, 2, {0, 0}, 4, 9) == 6.0);
  CHECK(oh_bound(5, 4, {0, 0, 0, 0}, 2, 3) == std::sqrt(6.0));
  CHECK(oh_bound(3, 2, {1, -1}, 1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(oh_bound(3, 3, {1, 0, -1}, 1, 1) == doctest::Approx(xi_pgl2(3, 2)).epsilon(1e-15));
  CHECK(oh_bound(2, 4, {3, 1, 0, -4}, 2, 2) == doctest::Approx(2 * xi_pgl2(2, 7) * xi_pgl2(2, 1)).epsilon(1e-15));
  try {
    oh_bound(3, 2, {-1, 1}, 1, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_exponent);
  }
}

TEST_CASE("mixing and ball measure examples") {
  const MixingParams mp{1.0, 1.0, 0.5};
  CHECK(mixing_bound(mp, 3, 0, 0, 3.0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mixing_bound(mp, 3, 1, 1, 3.0, 0) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(mixing_bound(mp, 3, 0, 0, 3.0, 200) < 1e-40);
  for (int n = 0; n < 20; ++n) CHECK(mixing_bound(mp, 3, 1, 0, 3.0, n + 1) < mixing_bound(mp, 3, 1, 0, 3.0, n));
  CHECK(ball_measure_at(2, 0.25, 3, 3) == 0.25);
  CHECK(ball_measure_at(3, 0.25, 3, 3) == doctest::Approx(0.25 / 27).epsilon(1e-15));
  // k = l_f + |nu| + 2 with l_f = 1, |nu| = 2, d = 3: base p^-9.
  CHECK(ball_measure_at(5, 0.5, 3, 3) == doctest::Approx(0.5 * std::pow(3.0, -9)).epsilon(1e-15));
  CHECK_THROWS_AS(ball_measure_at(1, 0.5, 3, 3), Error);
  CHECK_THROWS_AS(mixing_bound(MixingParams{0.0, 1.0, 1.0}, 3, 0, 0, 3.0, 0), Error);
}

TEST_CASE("equidistribution bound: geometric in n and degenerate plug-in") {
  ConstantsBundle b;
  b.mixing = {1.3, 0.7, 0.4};
  b.p = 3;
  b.d = 3;
  b.base_ball_measure = 0.2;
  b.a_norm = 3.0;
  b.nu_total = 2;
  b.entropy_nats = 2 * std::log(3.0);
  for (int n = 0; n < 10; ++n)
    CHECK(equidistribution_bound(b, 1, n + 1) / equidistribution_bound(b, 1, n) ==
          doctest::Approx(std::pow(3.0, -0.4)).epsilon(1e-12));
  ConstantsBundle z = b;
  z.nu_total = 0;
  CHECK(equidistribution_bound(z, 0, 2) ==
        doctest::Approx(1.3 / std::sqrt(0.2) * std::pow(3.0, 1.4) * std::pow(3.0, -0.8)).epsilon(1e-12));
  CHECK(test_vector_norm_bound(b, 1) == doctest::Approx(std::pow(3.0, 4.5) / std::sqrt(0.2)).epsilon(1e-12));
}

TEST_CASE("kappa hand evaluation, functional form and divergence") {
  ConstantsBundle b;
  b.mixing = {1.0, 1.0, 1.0};
  b.p = 2;
  b.d = 1;
  b.entropy_nats = 0.0;
  b.base_ball_measure = 1.0;
  b.a_norm = 2.0;
  CHECK(kappa(b) == doctest::Approx(8 * std::sqrt(2.0)).epsilon(1e-14));
  ConstantsBundle h = b;
  h.entropy_nats = 0.3;
  ConstantsBundle h2 = b;
  h2.entropy_nats = 0.6;
  CHECK(kappa(h2) / kappa(h) == doctest::Approx(std::exp(4 * 0.3)).epsilon(1e-12));
  ConstantsBundle bad = b;
  bad.a_norm = 1.0;
  try {
    kappa(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::divergent_series);
  }
}

TEST_CASE("kappa and theorem1_rhs are monotone in c, alpha, h, l_f and gap") {
  ConstantsBundle base;
  base.mixing = {1.0, 0.5, 0.5};
  base.p = 3;
  base.d = 3;
  base.entropy_nats = 1.0;
  base.base_ball_measure = 0.5;
  base.a_norm = 3.0;
  for (double c : {0.5, 1.0, 2.0})
    for (double alpha : {0.25, 0.5, 1.0})
      for (double h : {0.0, 0.5, 1.0}) {
        ConstantsBundle b = base;
        b.mixing.c = c;
        b.mixing.alpha = alpha;
        b.entropy_nats = h;
        const double k = kappa(b);
        ConstantsBundle bc = b, ba = b, bh = b;
        bc.mixing.c *= 1.5;
        ba.mixing.alpha *= 1.5;
        bh.entropy_nats += 0.5;
        CHECK(kappa(bc) > k);
        CHECK(kappa(ba) > k);
        CHECK(kappa(bh) > k);
        for (int lf : {0, 1, 2})
          for (double gap : {0.01, 0.1, 1.0}) {
            const double r = theorem1_rhs(k, 3, alpha, 3, lf, 1.0, gap);
            CHECK(theorem1_rhs(k, 3, alpha, 3, lf + 1, 1.0, gap) > r);
            CHECK(theorem1_rhs(k, 3, alpha, 3, lf, 1.0, gap * 2) > r);
            CHECK(theorem1_rhs(k, 3, alpha, 3, lf, 1.0, gap * 4) == doctest::Approx(2 * r).epsilon(1e-12));
          }
      }
  CHECK(theorem1_rhs(5.0, 3, 1.0, 3, 2, 1.0, 0.0) == 0.0);
  try {
    theorem1_rhs(5.0, 3, 1.0, 3, 2, 1.0, -0.1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::negative_gap);
  }
}
