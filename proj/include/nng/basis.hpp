#pragma once

#include "nng/params.hpp"
#include "nng/specfun.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace nng {

class BasisError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// E_nl = hbar omega (2n + l + 3/2), in joules.
double single_particle_energy(const QuantumNumbers& q, const PhysicalParams& params);

/// Truncated single-particle basis. The default is the ground state followed
/// by the degenerate l = 1 triplet: (0,0,0), (0,1,-1), (0,1,0), (0,1,1).
class SingleParticleBasis {
 public:
  SingleParticleBasis();
  explicit SingleParticleBasis(std::vector<QuantumNumbers> states);

  size_t size() const { return states_.size(); }
  const QuantumNumbers& operator[](size_t i) const { return states_.at(i); }
  const std::vector<QuantumNumbers>& states() const { return states_; }

  /// Energies in units of hbar omega.
  double energy_quanta(size_t i) const;

 private:
  std::vector<QuantumNumbers> states_;
};

/// Labels of a basis meta-state |i_1..i_n> (x) |j_1..j_n>.
struct MetaIndex {
  std::vector<size_t> physical;
  std::vector<size_t> hidden;
  friend bool operator==(const MetaIndex&, const MetaIndex&) = default;
};

/// Base-d positional indexing of the 2n-label meta basis, physical labels most
/// significant: alpha = (((i1 d + i2) d + j1) d + j2) for n = 2.
class MetaIndexer {
 public:
  MetaIndexer(size_t particles, size_t single_dim);

  size_t particles() const { return particles_; }
  size_t single_dim() const { return single_dim_; }
  /// d^n
  size_t physical_dim() const { return physical_dim_; }
  /// d^{2n}
  size_t meta_dim() const { return physical_dim_ * physical_dim_; }

  size_t encode(std::span<const size_t> physical, std::span<const size_t> hidden) const;
  MetaIndex decode(size_t alpha) const;

  /// Index of a physical (or hidden) n-tuple within d^n.
  size_t encode_sector(std::span<const size_t> labels) const;
  std::vector<size_t> decode_sector(size_t index) const;

  /// Index with physical and hidden tuples exchanged.
  size_t swapped(size_t alpha) const;

 private:
  size_t particles_;
  size_t single_dim_;
  size_t physical_dim_;
};

/// Sum of m over all labels of a sector index.
int total_m(const SingleParticleBasis& basis, const MetaIndexer& indexer, size_t sector_index);

/// Dimension of the subspace symmetric under physical <-> hidden exchange.
size_t exchange_symmetric_dim(const MetaIndexer& indexer);

}  // namespace nng
