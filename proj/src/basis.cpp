#include "nng/basis.hpp"

#include <string>
#include <utility>

namespace nng {

double single_particle_energy(const QuantumNumbers& q, const PhysicalParams& params) {
  if (!q.valid()) throw DomainError("single_particle_energy: invalid labels " + to_string(q));
  return params.hbar_omega() * (2.0 * q.n + q.l + 1.5);
}

SingleParticleBasis::SingleParticleBasis()
    : SingleParticleBasis({{0, 0, 0}, {0, 1, -1}, {0, 1, 0}, {0, 1, 1}}) {}

SingleParticleBasis::SingleParticleBasis(std::vector<QuantumNumbers> states)
    : states_(std::move(states)) {
  if (states_.empty()) throw std::invalid_argument("SingleParticleBasis: empty basis");
  for (const auto& q : states_)
    if (!q.valid()) throw DomainError("SingleParticleBasis: invalid labels " + to_string(q));
}

double SingleParticleBasis::energy_quanta(size_t i) const {
  const auto& q = states_.at(i);
  return 2.0 * q.n + q.l + 1.5;
}

MetaIndexer::MetaIndexer(size_t particles, size_t single_dim)
    : particles_(particles), single_dim_(single_dim), physical_dim_(1) {
  if (particles == 0 || single_dim == 0)
    throw std::invalid_argument("MetaIndexer: need at least one particle and one state");
  for (size_t a = 0; a < particles; ++a) physical_dim_ *= single_dim;
}

size_t MetaIndexer::encode_sector(std::span<const size_t> labels) const {
  if (labels.size() != particles_)
    throw BasisError("MetaIndexer: expected " + std::to_string(particles_) + " labels");
  size_t index = 0;
  for (size_t label : labels) {
    if (label >= single_dim_)
      throw BasisError("MetaIndexer: basis label " + std::to_string(label) + " out of range");
    index = index * single_dim_ + label;
  }
  return index;
}

std::vector<size_t> MetaIndexer::decode_sector(size_t index) const {
  if (index >= physical_dim_) throw BasisError("MetaIndexer: sector index out of range");
  std::vector<size_t> labels(particles_);
  for (size_t a = particles_; a-- > 0;) {
    labels[a] = index % single_dim_;
    index /= single_dim_;
  }
  return labels;
}

size_t MetaIndexer::encode(std::span<const size_t> physical, std::span<const size_t> hidden) const {
  return encode_sector(physical) * physical_dim_ + encode_sector(hidden);
}

MetaIndex MetaIndexer::decode(size_t alpha) const {
  if (alpha >= meta_dim()) throw BasisError("MetaIndexer: meta index out of range");
  return {decode_sector(alpha / physical_dim_), decode_sector(alpha % physical_dim_)};
}

size_t MetaIndexer::swapped(size_t alpha) const {
  if (alpha >= meta_dim()) throw BasisError("MetaIndexer: meta index out of range");
  return (alpha % physical_dim_) * physical_dim_ + alpha / physical_dim_;
}

int total_m(const SingleParticleBasis& basis, const MetaIndexer& indexer, size_t sector_index) {
  int m = 0;
  for (size_t label : indexer.decode_sector(sector_index)) m += basis[label].m;
  return m;
}

size_t exchange_symmetric_dim(const MetaIndexer& indexer) {
  const size_t d = indexer.physical_dim();
  return d * (d + 1) / 2;
}

}  // namespace nng
