#pragma once

#include "padlab/liegroup.hpp"
#include "padlab/matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string_view>
#include <vector>

namespace padlab {

enum class EigenClass { stable, neutral, unstable };

std::string_view eigen_class_name(EigenClass c);

struct Eigenspace {
  PadicScalar eigenvalue;
  int valuation = 0;  // v_p of the eigenvalue
  EigenClass cls = EigenClass::neutral;
  std::vector<PadicMatrix> basis;  // Z_p-basis of the eigenspace within Mat_d(Z_p)
};

// Ad_a eigendata. The flattened basis lists the eigenspace bases in order of
// increasing eigenvalue valuation (unstable first).
struct HorosphericalDecomposition {
  PadicMatrix a;
  GroupSpec group;
  PadicMatrix ad;  // Ad_a in lie_basis coordinates
  std::vector<Eigenspace> eigenspaces;
  std::vector<PadicMatrix> basis;
  std::vector<EigenClass> classes;
  std::vector<int> valuations;  // eigenvalue valuation per basis vector
  std::vector<int> nu;          // one entry per stable basis vector
  int nu_total = 0;             // from the contracting eigenvalues
  int nu_unstable_total = 0;    // from the expanding eigenvalues
  Rational a_norm;
  PadicMatrix to_eigen;  // lie coordinates -> eigen coordinates

  std::size_t dim() const { return basis.size(); }
  int max_nu() const;
  // Largest expansion valuation -v(lambda) over unstable vectors (0 if none).
  int max_nu_unstable() const;
  std::vector<PadicScalar> eigen_coordinates(const PadicMatrix& x) const;
  PadicMatrix from_eigen_coordinates(const std::vector<PadicScalar>& c) const;
};

// NotDiagonalizable if Ad_a does not split over Q_p with a full eigenbasis;
// NoHyperbolicity if every eigenvalue has norm one.
HorosphericalDecomposition decompose(const PadicMatrix& a, const GroupSpec& group);

struct Entropy {
  int log_p_units = 0;  // |nu|
  double nats = 0.0;    // |nu| ln p
};
Entropy entropy(const HorosphericalDecomposition& dec);

// p^|nu|, so that log mod equals the entropy.
Rational mod_character(const HorosphericalDecomposition& dec);

// |nu| + 2.
int min_partition_level(const HorosphericalDecomposition& dec);

// Smoothness level of a function after passing to the adapted balls: l_f, or
// l_f + |nu| when the shift is applied.
int adapted_smoothness_level(const HorosphericalDecomposition& dec, int l_f, bool apply_shift);

// Box in eigen coordinates: X belongs iff coordinate i has valuation >= levels[i].
struct AdaptedBall {
  std::vector<int> levels;

  bool contains(const HorosphericalDecomposition& dec, const PadicMatrix& x) const;
};

AdaptedBall adapted_ball(const HorosphericalDecomposition& dec, int k);
// Unstable levels k + n nu_i^+, all others k: the intersection of
// a^-l K a^l over 0 <= l <= n. LevelTooSmall unless k >= max(2, max nu_i + 2).
AdaptedBall bowen_ball(const HorosphericalDecomposition& dec, int k, int n);
// m(D_n) / m(D_1) = p^-((n - 1)|nu|) for D_n the intersection over
// 0 <= l < n, so D_n has the shape of bowen_ball(k, n - 1). n >= 1.
Rational bowen_volume_ratio(const HorosphericalDecomposition& dec, int k, int n);

enum class OracleMode { full, factored };

inline constexpr std::uint64_t kOracleBudget = std::uint64_t{1} << 25;

struct OracleResult {
  OracleMode mode = OracleMode::full;
  int k = 0;
  int n = 0;
  int level = 0;
  std::vector<boost::multiprecision::cpp_int> counts;  // counts[w - 1]: points surviving windows 0..w-1
  std::vector<Rational> ratios;                         // counts[w - 1] / counts[0]
};

// Counts points of the level-L truncation of K^g_k whose conjugates
// Ad_a^l X, 0 <= l < w, stay in K^g_k, for every window w <= n.
// FULL enumerates lie_basis coordinates and conjugates; FACTORED multiplies
// per-eigenline digit counts. workers = 0 reads PADLAB_THREADS.
OracleResult bowen_count_oracle(const HorosphericalDecomposition& dec, int k, int n, int level, OracleMode mode,
                                std::uint64_t budget = kOracleBudget, unsigned workers = 0);

// exp(sum_i c_i p^(k - nu_i) u_i^-), 0 <= c_i < p^nu_i, in odometer order with
// the first stable vector varying slowest.
std::vector<PadicMatrix> atom_representatives(const HorosphericalDecomposition& dec, int k);

struct Factorization {
  PadicMatrix f;  // in K^{G+}_k
  PadicMatrix h;  // in K^P_{k,k}
  int iterations = 0;
};

// g = f h with f unstable and h thickened stable, by peeling BCH corrections.
Factorization horospherical_factor(const PadicMatrix& g, int k, const HorosphericalDecomposition& dec);

// K^{G+}_k: log g lies in g+ with coordinates of valuation >= k.
bool in_unstable_ball(const HorosphericalDecomposition& dec, const PadicMatrix& g, int k);
// K^P_{k,l}: log g lies in g0 + g- with neutral coordinates >= k, stable >= l.
bool in_thickened_stable_ball(const HorosphericalDecomposition& dec, const PadicMatrix& g, int k, int l);

}  // namespace padlab
