#include "nng/hamiltonian.hpp"

#include "nng/format.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace nng {

namespace {

struct Prefactors {
  Real hbar_omega;
  Real contact;  // 4 pi hbar^2 l_s / mu * (mu omega/hbar)^{3/2}
  Real gravity;  // G mu^2 sqrt(mu omega/hbar)
};

Prefactors prefactors(const PhysicalParams& p) {
  p.validate();
  const Real hbar(p.hbar), omega(p.omega), mu(p.mu), ls(p.l_s), G(p.G);
  const Real k = mu * omega / hbar;
  const Real sqrt_k = sqrt(k);
  const Real pi = boost::multiprecision::float128(
      "3.14159265358979323846264338327950288419716939937510582097494459");
  return {hbar * omega, 4 * pi * hbar * hbar * ls / mu * k * sqrt_k, G * mu * mu * sqrt_k};
}

// Sum over pairs a < b of table(s_a, s_b; t_a, t_b), provided every other
// label agrees between bra and ket.
Real pair_sum(const TwoBodyTable& table, const std::vector<size_t>& bra,
              const std::vector<size_t>& ket) {
  const size_t n = bra.size();
  Real sum = 0;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      bool spectators_match = true;
      for (size_t c = 0; c < n && spectators_match; ++c)
        if (c != a && c != b && bra[c] != ket[c]) spectators_match = false;
      if (spectators_match) sum += Real(table(bra[a], bra[b], ket[a], ket[b]));
    }
  return sum;
}

// Each interaction term is checked against its own scale: the gravitational
// pieces sit ~1e-17 below the trap energy and would pass any guard on the sum.
void guard_hermitian(const MatrixQ& m, const char* what) {
  const HermitianOperator op(m);
  const Real scale = op.max_abs();
  const Real defect = op.hermiticity_defect();
  if (defect > Real(1e-10) * scale)
    throw AssemblyError(std::string(what) + " is not Hermitian: defect " +
                        format_double(static_cast<double>(defect)) + " vs largest entry " +
                        format_double(static_cast<double>(scale)));
}

MatrixQ pair_operator(const TwoBodyTable& table, const MetaIndexer& indexer, const char* what) {
  const size_t dim = indexer.physical_dim();
  MatrixQ out = MatrixQ::Zero(dim, dim);
  for (size_t s = 0; s < dim; ++s) {
    const auto bra = indexer.decode_sector(s);
    for (size_t t = 0; t < dim; ++t) out(s, t) = Complex(pair_sum(table, bra, indexer.decode_sector(t)));
  }
  guard_hermitian(out, what);
  return out;
}

void check_tables(const SingleParticleBasis& basis, const ElementTables& tables) {
  if (tables.dim() != basis.size())
    throw std::invalid_argument("element tables do not match the single-particle basis");
}

}  // namespace

HermitianOperator::HermitianOperator(MatrixQ entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("HermitianOperator: matrix must be square");
}

Eigen::MatrixXcd HermitianOperator::to_double() const {
  Eigen::MatrixXcd out(entries_.rows(), entries_.cols());
  for (Eigen::Index r = 0; r < entries_.rows(); ++r)
    for (Eigen::Index c = 0; c < entries_.cols(); ++c) out(r, c) = nng::to_double(entries_(r, c));
  return out;
}

Real HermitianOperator::max_abs() const {
  Real m = 0;
  for (Eigen::Index r = 0; r < entries_.rows(); ++r)
    for (Eigen::Index c = 0; c < entries_.cols(); ++c) m = std::max(m, Real(abs(entries_(r, c))));
  return m;
}

Real HermitianOperator::hermiticity_defect() const {
  Real worst = 0;
  for (Eigen::Index r = 0; r < entries_.rows(); ++r)
    for (Eigen::Index c = r; c < entries_.cols(); ++c)
      worst = std::max(worst, Real(abs(entries_(r, c) - conj(entries_(c, r)))));
  return worst;
}

bool HermitianOperator::is_hermitian(double rel_tol) const {
  return hermiticity_defect() <= Real(rel_tol) * max_abs();
}

void HermitianOperator::dump(std::ostream& out) const {
  for (Eigen::Index r = 0; r < entries_.rows(); ++r)
    for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
      const auto z = nng::to_double(entries_(r, c));
      out << r << ' ' << c << ' ' << format_double(z.real()) << ' ' << format_double(z.imag())
          << '\n';
    }
}

MatrixQ kronecker_sum(const MatrixQ& a) {
  const Eigen::Index d = a.rows();
  MatrixQ out = MatrixQ::Zero(d * d, d * d);
  for (Eigen::Index p = 0; p < d; ++p)
    for (Eigen::Index q = 0; q < d; ++q) {
      const Complex v = a(p, q);
      if (v == Complex(0)) continue;
      for (Eigen::Index h = 0; h < d; ++h) {
        out(p * d + h, q * d + h) += v;  // A (x) I
        out(h * d + p, h * d + q) += v;  // I (x) A
      }
    }
  return out;
}

HermitianOperator build_h_ph(const PhysicalParams& params, const SingleParticleBasis& basis,
                             const ElementTables& tables, const HamiltonianOptions& options) {
  check_tables(basis, tables);
  const Prefactors pf = prefactors(params);
  const MetaIndexer indexer(options.particles, basis.size());
  const size_t dim = indexer.physical_dim();

  MatrixQ h = pf.contact * pair_operator(tables.contact, indexer, "contact term") -
              pf.gravity * pair_operator(tables.coulomb, indexer, "Newtonian pair term");
  for (size_t s = 0; s < dim; ++s) {
    Real quanta = 0;
    for (size_t label : indexer.decode_sector(s)) quanta += Real(basis.energy_quanta(label));
    h(s, s) += Complex(pf.hbar_omega * quanta);
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator build_h_nng(const PhysicalParams& params, const SingleParticleBasis& basis,
                              const ElementTables& tables, const HamiltonianOptions& options) {
  check_tables(basis, tables);
  const Prefactors pf = prefactors(params);
  const MetaIndexer indexer(options.particles, basis.size());
  const size_t n = options.particles;

  // Intra-copy halves: +G mu^2/2 (C (x) I + I (x) C).
  MatrixQ h = (pf.gravity / 2) *
              kronecker_sum(pair_operator(tables.coulomb, indexer, "Newtonian pair term"));

  // Physical-hidden cross couplings.
  for (size_t alpha = 0; alpha < indexer.meta_dim(); ++alpha) {
    const MetaIndex bra = indexer.decode(alpha);
    for (size_t beta = 0; beta < indexer.meta_dim(); ++beta) {
      const MetaIndex ket = indexer.decode(beta);
      Real sum = 0;
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
          if (options.literal_cross_term && !(a < b)) continue;
          bool spectators_match = true;
          for (size_t c = 0; c < n && spectators_match; ++c) {
            if (c != a && bra.physical[c] != ket.physical[c]) spectators_match = false;
            if (c != b && bra.hidden[c] != ket.hidden[c]) spectators_match = false;
          }
          if (!spectators_match) continue;
          sum += Real(tables.coulomb(bra.physical[a], bra.hidden[b], ket.physical[a], ket.hidden[b]));
        }
      if (sum != 0) h(alpha, beta) -= Complex(pf.gravity * sum);
    }
  }
  guard_hermitian(h, "H_NNG");
  return HermitianOperator(std::move(h));
}

Hamiltonians build_hamiltonians(const PhysicalParams& params, const SingleParticleBasis& basis,
                                const ElementTables& tables, const HamiltonianOptions& options) {
  Hamiltonians out;
  out.h_ph = build_h_ph(params, basis, tables, options);
  out.h_nng = build_h_nng(params, basis, tables, options);
  MatrixQ total = kronecker_sum(out.h_ph.entries()) + out.h_nng.entries();
  out.h_tot = HermitianOperator(std::move(total));
  const Real defect = out.h_tot.hermiticity_defect();
  const Real scale = out.h_tot.max_abs();
  if (defect > Real(1e-10) * scale)
    throw AssemblyError("H_TOT is not Hermitian: defect " +
                        format_double(static_cast<double>(defect)) + " J vs largest entry " +
                        format_double(static_cast<double>(scale)) + " J");
  return out;
}

HermitianOperator build_h_tot(const PhysicalParams& params, const SingleParticleBasis& basis,
                              const ElementTables& tables, const HamiltonianOptions& options) {
  return build_hamiltonians(params, basis, tables, options).h_tot;
}

HermitianOperator build_h_tot(const PhysicalParams& params, const HamiltonianOptions& options) {
  const SingleParticleBasis basis;
  const ElementTables tables = ElementTables::build(basis);
  return build_h_tot(params, basis, tables, options);
}

Real swap_commutator_defect(const HermitianOperator& h, const MetaIndexer& indexer) {
  if (h.dim() != indexer.meta_dim())
    throw std::invalid_argument("swap_commutator_defect: operator is not on the meta space");
  Real worst = 0;
  for (size_t a = 0; a < h.dim(); ++a)
    for (size_t b = 0; b < h.dim(); ++b)
      worst = std::max(worst, Real(abs(h(a, b) - h(indexer.swapped(a), indexer.swapped(b)))));
  return worst;
}

Real m_block_leakage(const HermitianOperator& h, const SingleParticleBasis& basis,
                     const MetaIndexer& indexer) {
  const size_t d = indexer.physical_dim();
  std::vector<int> m(h.dim());
  if (h.dim() == indexer.meta_dim()) {
    for (size_t a = 0; a < h.dim(); ++a)
      m[a] = total_m(basis, indexer, a / d) + total_m(basis, indexer, a % d);
  } else if (h.dim() == d) {
    for (size_t a = 0; a < d; ++a) m[a] = total_m(basis, indexer, a);
  } else {
    throw std::invalid_argument("m_block_leakage: operator dimension does not match the basis");
  }
  Real worst = 0;
  for (size_t a = 0; a < h.dim(); ++a)
    for (size_t b = 0; b < h.dim(); ++b)
      if (m[a] != m[b]) worst = std::max(worst, Real(abs(h(a, b))));
  return worst;
}

}  // namespace nng
