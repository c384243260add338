#pragma once

#include "nng/basis.hpp"
#include "nng/hamiltonian.hpp"
#include "nng/precision.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace nng {

class DiagonalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for density matrices with eigenvalues below -1e-8.
class InvalidStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Relative spacing below which two eigenvalues count as one level. Rounding
/// in binary128 sits near 1e-33; physical splittings here are >= 1e-18.
inline constexpr double kTieTolerance = 1e-28;

struct EigenSystem {
  RealVectorQ values;  // ascending, joules
  MatrixQ vectors;     // orthonormal columns
  /// Rows on which each eigenvector is supported (its connected block of H).
  std::vector<std::vector<size_t>> support;

  size_t dim() const { return static_cast<size_t>(values.size()); }
  double eigenvalue(size_t k) const { return static_cast<double>(values(k)); }
  Eigen::VectorXd values_double() const;
  Eigen::MatrixXcd vectors_double() const;

  /// Half-open range [first, last) of indices degenerate with k.
  std::pair<size_t, size_t> level_range(size_t k, double rel_tol = kTieTolerance) const;
};

/// Connected components of the nonzero pattern of a square matrix, each
/// sorted, ordered by smallest member.
std::vector<std::vector<size_t>> connected_blocks(const MatrixQ& h);

/// Block-wise dense diagonalization. Eigenvalues ascend; inside a degenerate
/// level, vectors are ordered by leading index (first component whose modulus
/// is within 1e-9 of the largest), and every vector is phased so that this
/// component is real and positive.
EigenSystem diagonalize(const MatrixQ& h);
EigenSystem diagonalize(const HermitianOperator& h);

/// Amplitudes over the d^{2n} meta basis (physical labels most significant).
struct MetaState {
  VectorQ amplitudes;
  double time = 0.0;  // s

  size_t dim() const { return static_cast<size_t>(amplitudes.size()); }
  Eigen::VectorXcd to_double() const;
  double norm() const;
};

struct InitialState {
  MetaState state;
  size_t level_index = 0;    // position in the ascending physical spectrum
  double energy = 0.0;       // J
  size_t multiplicity = 1;   // size of the degenerate level containing it
  std::string note;          // human-readable tie-break record
};

/// |phi_k> (x) |phi~_k> where k counts physical eigenvalues from the top
/// (k = 1 is the highest). Throws std::out_of_range for k outside 1..dim.
InitialState initial_metastate(const EigenSystem& physical, size_t k);

/// Exact phase evolution in the eigenbasis of H_TOT. Overlaps and phases are
/// binary128; only eigenvectors with nonzero overlap are kept.
class Propagator {
 public:
  Propagator(const EigenSystem& eig, const MetaState& psi0, double hbar);

  /// State after an elapsed time t (s) from psi0.
  MetaState at(double t) const;
  size_t active_modes() const { return modes_.size(); }

 private:
  struct Mode {
    Real energy;
    Complex overlap;
    std::vector<size_t> rows;
    std::vector<Complex> coeffs;
  };
  std::vector<Mode> modes_;
  Real hbar_;
  size_t dim_;
  double t0_;
};

MetaState evolve_to(double t, const MetaState& psi0, const EigenSystem& eig, double hbar);

class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  size_t dim() const { return static_cast<size_t>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  double hermiticity_defect() const;
  double trace_defect() const;  // |Tr rho - 1|
  /// Ascending eigenvalues of the Hermitian part.
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXcd entries_;
};

/// Trace over the hidden labels.
DensityMatrix reduce_physical(const MetaState& psi, const MetaIndexer& indexer);
/// Trace over the physical labels.
DensityMatrix reduce_hidden(const MetaState& psi, const MetaIndexer& indexer);
/// Trace over every label but the first physical one.
DensityMatrix reduce_single(const MetaState& psi, const MetaIndexer& indexer);
/// Trace a (d^n)-dim physical density matrix down to its first particle.
DensityMatrix trace_to_first(const DensityMatrix& rho, const MetaIndexer& indexer);

/// -sum p ln p in units of k_B. Eigenvalues in [-1e-8, 0) are clamped to 0.
double von_neumann_entropy(const DensityMatrix& rho);

struct Expectation {
  double value;
  double imaginary;
};

/// Tr(rho H) for a physical-space operator.
Expectation expectation(const DensityMatrix& rho, const HermitianOperator& h);
/// <Psi| H_Ph (x) I |Psi>
Expectation energy_expectation(const MetaState& psi, const HermitianOperator& h_ph,
                               const MetaIndexer& indexer);

/// p_k = <E_k| rho |E_k> in the ascending physical eigenbasis.
Eigen::VectorXd eigenstate_populations(const DensityMatrix& rho, const EigenSystem& physical);

/// Squared weight of psi outside the given total magnetic number.
double weight_outside_m(const MetaState& psi, int m, const SingleParticleBasis& basis,
                        const MetaIndexer& indexer);
/// Total magnetic number of a meta basis index.
int meta_total_m(size_t alpha, const SingleParticleBasis& basis, const MetaIndexer& indexer);

}  // namespace nng
