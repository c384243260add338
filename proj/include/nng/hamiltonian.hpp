#pragma once

#include "nng/basis.hpp"
#include "nng/integrals.hpp"
#include "nng/params.hpp"
#include "nng/precision.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>

namespace nng {

/// Thrown when an assembled operator fails its hermiticity guard.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense Hermitian operator in joules, stored in binary128.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(MatrixQ entries);

  size_t dim() const { return static_cast<size_t>(entries_.rows()); }
  const MatrixQ& entries() const { return entries_; }
  Complex operator()(size_t r, size_t c) const { return entries_(r, c); }

  Eigen::MatrixXcd to_double() const;
  Real max_abs() const;
  /// max |H - H^dagger|
  Real hermiticity_defect() const;
  bool is_hermitian(double rel_tol) const;

  /// One `row col re im` line per entry, 17 significant digits.
  void dump(std::ostream& out) const;

 private:
  MatrixQ entries_;
};

struct HamiltonianOptions {
  /// Couple only physical particle a to hidden particle b for a < b (the
  /// compact H_NNG notation taken literally) instead of every physical-hidden pair.
  bool literal_cross_term = false;
  size_t particles = 2;
};

/// Kinetic + trap diagonal, contact and Newtonian pair terms on the physical
/// n-particle space (dimension d^n).
HermitianOperator build_h_ph(const PhysicalParams& params, const SingleParticleBasis& basis,
                             const ElementTables& tables, const HamiltonianOptions& options = {});

/// G mu^2 [ -sum_{a,b} 1/|x_a - x~_b| + 1/2 sum_{a<b} 1/|x_a - x_b| + 1/2 sum_{a<b} 1/|x~_a - x~_b| ]
/// on the meta space (dimension d^{2n}).
HermitianOperator build_h_nng(const PhysicalParams& params, const SingleParticleBasis& basis,
                              const ElementTables& tables, const HamiltonianOptions& options = {});

/// H_Ph (x) I + I (x) H_Ph + H_NNG. Throws AssemblyError if any interaction
/// term, or the sum, is not Hermitian to 1e-10 of its own largest entry.
HermitianOperator build_h_tot(const PhysicalParams& params, const SingleParticleBasis& basis,
                              const ElementTables& tables, const HamiltonianOptions& options = {});

/// Same, building the default four-state basis and element tables.
HermitianOperator build_h_tot(const PhysicalParams& params, const HamiltonianOptions& options = {});

struct Hamiltonians {
  HermitianOperator h_ph;
  HermitianOperator h_nng;
  HermitianOperator h_tot;
};

Hamiltonians build_hamiltonians(const PhysicalParams& params, const SingleParticleBasis& basis,
                                const ElementTables& tables, const HamiltonianOptions& options = {});

/// max |H[a,b] - H[swap a, swap b]|, i.e. the entrywise norm of [H, SWAP].
Real swap_commutator_defect(const HermitianOperator& h, const MetaIndexer& indexer);

/// max |H[a,b]| over pairs with different total magnetic number.
Real m_block_leakage(const HermitianOperator& h, const SingleParticleBasis& basis,
                     const MetaIndexer& indexer);

/// A (x) I + I (x) A for a physical-space operator.
MatrixQ kronecker_sum(const MatrixQ& a);

}  // namespace nng
