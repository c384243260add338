#pragma once

// Two-body matrix elements in the truncated oscillator basis.
//
// All values are dimensionless (xi units). The Coulomb-form elements carry
// one power of sqrt(mu omega/hbar) and the contact elements (mu omega/hbar)^{3/2};
// the Hamiltonian builders restore them.
//
// Element convention: <i1 i2| V |j1 j2> = int psi*_{i1}(r1) psi*_{i2}(r2) V psi_{j1}(r1) psi_{j2}(r2).

#include "nng/basis.hpp"
#include "nng/specfun.hpp"

#include <iosfwd>
#include <map>
#include <tuple>
#include <vector>

namespace nng {

struct IntegralOptions {
  /// Highest multipole order kept in 1/|r1 - r2|. For l <= 1 orbitals only
  /// l = 0, 1, 2 survive the 3j parity/triangle rules.
  int max_multipole = 2;
  double cutoff = 10.0;      // xi range [0, cutoff]
  int order = 20;            // Gauss-Legendre points per panel
  double rel_tol = 1e-12;    // successive-refinement agreement
  int max_levels = 7;        // panel doublings, starting from 4 panels
};

/// int_0^inf dr1 R_i R_i' [ r1^{1-l} int_0^{r1} r2^{l+2} R_j R_j' + r1^{l+2} int_{r1}^inf r2^{1-l} R_j R_j' ],
/// i.e. the r_<^l / r_>^{l+1} kernel with both r^2 Jacobians. (i, i') live on r1, (j, j') on r2.
double radial_multipole_integral(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                                 const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime,
                                 const IntegralOptions& options = {});

/// Angular part of the order-l multipole term:
///   int dOmega1 dOmega2 Y*_i Y_i' Y*_j Y_j' P_l(cos gamma)
/// = sqrt((2li+1)(2lj+1)(2li'+1)(2lj'+1)) (lj lj' l;000)(li li' l;000)
///   sum_m (-1)^{m+mi+mj} (li li' l; -mi mi' -m)(lj lj' l; -mj mj' m).
double angular_coulomb_factor(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                              const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime);
/// Binary128 evaluation; keeps rotational multiplets degenerate far below the
/// gravitational couplings.
Real angular_coulomb_factor_q(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                              const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime);

/// Single radial overlap int_0^inf R_a R_b R_c R_d xi^2 dxi.
double radial_quartic_overlap(const QuantumNumbers& a, const QuantumNumbers& b,
                              const QuantumNumbers& c, const QuantumNumbers& d,
                              const IntegralOptions& options = {});

/// <i1 i2| 1/|r1 - r2| |j1 j2> in units of sqrt(mu omega/hbar).
double coulomb_element(const QuantumNumbers& qi1, const QuantumNumbers& qi2,
                       const QuantumNumbers& qj1, const QuantumNumbers& qj2,
                       const IntegralOptions& options = {});

/// <i1 i2| delta(r1 - r2) |j1 j2> in units of (mu omega/hbar)^{3/2}.
double contact_element(const QuantumNumbers& qi1, const QuantumNumbers& qi2,
                       const QuantumNumbers& qj1, const QuantumNumbers& qj2,
                       const IntegralOptions& options = {});

/// Dense rank-4 table V[i1, i2; j1, j2] over a single-particle basis, binary128.
class TwoBodyTable {
 public:
  TwoBodyTable() = default;
  explicit TwoBodyTable(size_t dim) : dim_(dim), data_(dim * dim * dim * dim, Real(0)) {}

  size_t dim() const { return dim_; }
  Real& at(size_t i1, size_t i2, size_t j1, size_t j2) { return data_[offset(i1, i2, j1, j2)]; }
  const Real& operator()(size_t i1, size_t i2, size_t j1, size_t j2) const {
    return data_[offset(i1, i2, j1, j2)];
  }
  double value(size_t i1, size_t i2, size_t j1, size_t j2) const {
    return static_cast<double>((*this)(i1, i2, j1, j2));
  }
  double max_abs() const;
  /// max |V[i1 i2; j1 j2] - V[j1 j2; i1 i2]|
  double hermiticity_defect() const;

  const std::vector<Real>& raw() const { return data_; }

 private:
  size_t offset(size_t i1, size_t i2, size_t j1, size_t j2) const {
    return ((i1 * dim_ + i2) * dim_ + j1) * dim_ + j2;
  }
  size_t dim_ = 0;
  std::vector<Real> data_;
};

/// Memoized radial double integrals keyed by multipole order and the (n, l)
/// labels of the four orbitals; m never enters the radial part.
class RadialIntegralTable {
 public:
  RadialIntegralTable(const SingleParticleBasis& basis, const IntegralOptions& options);

  double operator()(int l, size_t i, size_t j, size_t i_prime, size_t j_prime) const;
  int max_multipole() const { return max_multipole_; }

 private:
  using Key = std::tuple<int, int, int, int, int, int, int, int, int>;
  static Key key(int l, const QuantumNumbers& a, const QuantumNumbers& b,
                 const QuantumNumbers& c, const QuantumNumbers& d);

  const SingleParticleBasis* basis_;
  int max_multipole_;
  std::map<Key, double> values_;
};

/// Coulomb (per multipole and summed) and contact element tables.
struct ElementTables {
  std::vector<TwoBodyTable> coulomb_multipoles;  // index = multipole order l
  TwoBodyTable coulomb;
  TwoBodyTable contact;

  size_t dim() const { return coulomb.dim(); }

  static ElementTables build(const SingleParticleBasis& basis, const IntegralOptions& options = {});

  /// Flat text, one line per element: `kind l i j i' j' value` with the value
  /// as a binary128 hexadecimal float (bit-exact round trip). Contact lines use l = 0.
  void save(std::ostream& out) const;
  static ElementTables load(std::istream& in);
};

/// Breaks the symmetry of one Coulomb element; used to exercise the
/// hermiticity guard in the verify path.
void inject_asymmetry(ElementTables& tables);

}  // namespace nng
