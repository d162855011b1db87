#pragma once

#include "padlab/matrix.hpp"

#include <string>
#include <vector>

namespace padlab {

// One polynomial equation in the d*d matrix entries (row-major), as a list of
// monomials coefficient * prod_e x_e^exponent[e].
struct GroupEquation {
  struct Monomial {
    Rational coefficient;
    std::vector<int> exponents;
  };
  std::vector<Monomial> terms;

  PadicScalar evaluate(const PadicMatrix& g) const;
};

class GroupSpec {
 public:
  enum class Family { sl, gl, custom };

  static GroupSpec sl(std::size_t d, PadicContext ctx);
  static GroupSpec gl(std::size_t d, PadicContext ctx);
  // The basis is replaced by a Z_p-basis of its span intersected with the
  // integral matrices; the equations cut out the group.
  static GroupSpec custom(std::vector<PadicMatrix> lie_basis, std::vector<GroupEquation> equations);

  Family family() const noexcept { return family_; }
  std::string name() const;
  std::size_t dim_ambient() const noexcept { return d_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const PadicContext& context() const noexcept { return basis_.front().context(); }
  const std::vector<PadicMatrix>& lie_basis() const noexcept { return basis_; }
  const std::vector<GroupEquation>& equations() const noexcept { return equations_; }

  // Coordinates of X in lie_basis; InvalidInput if X is not in the algebra.
  std::vector<PadicScalar> coordinates(const PadicMatrix& x) const;
  PadicMatrix from_coordinates(const std::vector<PadicScalar>& c) const;
  bool contains_algebra_element(const PadicMatrix& x) const;
  // Group equations vanish at the certified precision.
  bool satisfies_equations(const PadicMatrix& g) const;

 private:
  GroupSpec(Family f, std::size_t d, std::vector<PadicMatrix> basis, std::vector<GroupEquation> eqs)
      : family_(f), d_(d), basis_(std::move(basis)), equations_(std::move(eqs)) {}

  Family family_;
  std::size_t d_;
  std::vector<PadicMatrix> basis_;
  std::vector<GroupEquation> equations_;
};

// Absolute precision to which the series below are summed for an argument of
// valuation w: the full relative precision N of the context on top of w.
int series_target(int w, const PadicContext& ctx);

// Matrix exponential on K^m_2. DomainError if ||X|| > p^-2.
PadicMatrix exp(const PadicMatrix& x);
// Matrix logarithm on e + K^m_2. DomainError if ||g - e|| > p^-2.
PadicMatrix log(const PadicMatrix& g);

enum class BchMode { dynkin_series, direct };

// log(exp x exp y). DomainError unless both arguments lie in K^m_2.
PadicMatrix bch(const PadicMatrix& x, const PadicMatrix& y, BchMode mode);
// Highest degree summed by the Dynkin series for arguments of valuation >= w.
int bch_truncation_degree(int w, const PadicContext& ctx);

// ||g - e|| <= p^-k and g satisfies the group equations at precision.
bool ball_membership(const PadicMatrix& g, const GroupSpec& group, int k);
// X in K^g_k.
bool lie_ball_membership(const PadicMatrix& x, const GroupSpec& group, int k);

}  // namespace padlab
