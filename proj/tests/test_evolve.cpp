#include "nng/evolve.hpp"
#include "nng/hamiltonian.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

using namespace nng;

namespace {

struct Fixture {
  PhysicalParams params;
  SingleParticleBasis basis;
  MetaIndexer indexer{2, 4};
  ElementTables tables = ElementTables::build(basis);
  Hamiltonians h = build_hamiltonians(params, basis, tables);
  EigenSystem physical = diagonalize(h.h_ph);
  EigenSystem total = diagonalize(h.h_tot);
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

double max_diff(const MetaState& a, const MetaState& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i)
    worst = std::max(worst, static_cast<double>(abs(a.amplitudes(i) - b.amplitudes(i))));
  return worst;
}

double direct_entropy(std::initializer_list<double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0) s -= x * std::log(x);
  return s;
}

}  // namespace

TEST_CASE("diagonalize: diagonal and Pauli-x") {
  MatrixQ d = MatrixQ::Zero(3, 3);
  d(0, 0) = Complex(3);
  d(1, 1) = Complex(-1);
  d(2, 2) = Complex(2);
  const EigenSystem e = diagonalize(d);
  CHECK(e.eigenvalue(0) == -1.0);
  CHECK(e.eigenvalue(1) == 2.0);
  CHECK(e.eigenvalue(2) == 3.0);
  CHECK(e.support.size() == 3);
  CHECK(e.support[0].size() == 1);

  MatrixQ x(2, 2);
  x << Complex(0), Complex(1), Complex(1), Complex(0);
  const EigenSystem px = diagonalize(x);
  CHECK(px.eigenvalue(0) == doctest::Approx(-1.0));
  CHECK(px.eigenvalue(1) == doctest::Approx(1.0));
  const Eigen::MatrixXcd v = px.vectors_double();
  CHECK(std::abs(std::abs(v(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  // Phase convention: the leading component is real and positive.
  CHECK(v(0, 1).real() > 0);
  CHECK(std::abs(v(0, 1).imag()) < 1e-30);

  CHECK_THROWS_AS(diagonalize(MatrixQ::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("connected blocks follow the nonzero pattern") {
  MatrixQ h = MatrixQ::Zero(4, 4);
  h(0, 2) = h(2, 0) = Complex(1);
  h(1, 1) = Complex(5);
  const auto blocks = connected_blocks(h);
  CHECK(blocks.size() == 3);
}

TEST_CASE("eigensystems are orthonormal and reconstruct the operator") {
  for (const HermitianOperator* op : {&fx().h.h_ph, &fx().h.h_tot}) {
    const EigenSystem eig = diagonalize(*op);
    const MatrixQ& v = eig.vectors;
    const MatrixQ gram = v.adjoint() * v;
    Real worst_gram = 0;
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
      for (Eigen::Index j = 0; j < gram.cols(); ++j)
        worst_gram = std::max(worst_gram, Real(abs(gram(i, j) - Complex(i == j ? 1 : 0))));
    CHECK(worst_gram < Real(1e-28));

    MatrixQ lambda = MatrixQ::Zero(eig.dim(), eig.dim());
    for (size_t k = 0; k < eig.dim(); ++k) lambda(k, k) = Complex(eig.values(k));
    const MatrixQ back = v * lambda * v.adjoint();
    Real worst = 0;
    for (Eigen::Index i = 0; i < back.rows(); ++i)
      for (Eigen::Index j = 0; j < back.cols(); ++j)
        worst = std::max(worst, Real(abs(back(i, j) - op->entries()(i, j))));
    CHECK(worst <= Real(1e-28) * op->max_abs());

    // Ascending, up to the tie window inside which members are ordered by leading index.
    const Real tie = Real(kTieTolerance) * op->max_abs();
    for (size_t k = 1; k < eig.dim(); ++k) CHECK(eig.values(k - 1) <= eig.values(k) + tie);
  }
}

TEST_CASE("physical levels: multiplicities 1, 3, 3, 3, 5, 1") {
  const EigenSystem& e = fx().physical;
  std::vector<size_t> mult;
  for (size_t k = 0; k < e.dim();) {
    const auto [first, last] = e.level_range(k);
    CHECK(first == k);
    mult.push_back(last - first);
    k = last;
  }
  CHECK(mult == std::vector<size_t>{1, 3, 3, 3, 5, 1});
}

TEST_CASE("initial meta-state") {
  const Fixture& f = fx();
  const InitialState top = initial_metastate(f.physical, 1);
  CHECK(top.level_index == 15);
  CHECK(top.multiplicity == 1);
  CHECK(top.state.norm() == doctest::Approx(1.0).epsilon(1e-15));
  // Product state: no entanglement.
  CHECK(von_neumann_entropy(reduce_physical(top.state, f.indexer)) < 1e-12);

  const InitialState k2 = initial_metastate(f.physical, 2);
  CHECK(k2.level_index == 14);
  CHECK(k2.multiplicity == 5);
  CHECK(k2.note.find("5-fold") != std::string::npos);
  for (size_t a = 0; a < f.indexer.meta_dim(); ++a)
    CHECK(abs(k2.state.amplitudes(a) - k2.state.amplitudes(f.indexer.swapped(a))) < Real(1e-30));
  const Expectation e = energy_expectation(k2.state, f.h.h_ph, f.indexer);
  CHECK(e.value == doctest::Approx(k2.energy).epsilon(1e-12));
  CHECK(std::abs(e.imaginary) < 1e-12 * std::abs(k2.energy));

  CHECK_THROWS_AS(initial_metastate(f.physical, 0), std::out_of_range);
  CHECK_THROWS_AS(initial_metastate(f.physical, 17), std::out_of_range);
}

TEST_CASE("propagation: identity, unitarity and the group law") {
  const Fixture& f = fx();
  const MetaState psi0 = initial_metastate(f.physical, 4).state;
  const Propagator prop(f.total, psi0, f.params.hbar);
  CHECK(prop.active_modes() > 1);
  CHECK(max_diff(prop.at(0.0), psi0) < 1e-30);

  const double t1 = 7.3e11, t2 = 1.9e12;
  const MetaState a = prop.at(t1 + t2);
  const MetaState b = evolve_to(t2, prop.at(t1), f.total, f.params.hbar);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_diff(a, b) < 1e-12);
  CHECK(b.time == doctest::Approx(t1 + t2));
}

TEST_CASE("an exact eigenstate only picks up a phase") {
  const Fixture& f = fx();
  MetaState psi;
  psi.amplitudes = f.total.vectors.col(100);
  const MetaState later = evolve_to(3e12, psi, f.total, f.params.hbar);
  Complex overlap = 0;
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    overlap += conj(psi.amplitudes(i)) * later.amplitudes(i);
  CHECK(static_cast<double>(abs(overlap)) == doctest::Approx(1.0).epsilon(1e-25));
}

TEST_CASE("reduced density matrices: product state and Bell toy") {
  const MetaIndexer toy(1, 2);
  MetaState bell;
  bell.amplitudes = VectorQ::Zero(4);
  bell.amplitudes(0) = bell.amplitudes(3) = Complex(1 / sqrt(Real(2)));
  const DensityMatrix rho = reduce_physical(bell, toy);
  CHECK(rho.trace_defect() < 1e-15);
  CHECK(von_neumann_entropy(rho) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(von_neumann_entropy(reduce_hidden(bell, toy)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  MetaState product;
  product.amplitudes = VectorQ::Zero(4);
  product.amplitudes(2) = Complex(1);
  CHECK(von_neumann_entropy(reduce_physical(product, toy)) == 0.0);
}

TEST_CASE("random meta-states: trace, positivity and Schmidt symmetry") {
  const MetaIndexer& ix = fx().indexer;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 5; ++rep) {
    MetaState psi;
    psi.amplitudes.resize(256);
    Real s = 0;
    for (Eigen::Index i = 0; i < 256; ++i) {
      psi.amplitudes(i) = Complex(Real(n01(rng)), Real(n01(rng)));
      s += Real(norm(to_double(psi.amplitudes(i))));
    }
    psi.amplitudes /= Complex(sqrt(s));
    const DensityMatrix ph = reduce_physical(psi, ix);
    const DensityMatrix hid = reduce_hidden(psi, ix);
    CHECK(ph.trace_defect() < 1e-13);
    CHECK(ph.hermiticity_defect() < 1e-15);
    CHECK(ph.eigenvalues().minCoeff() > -1e-14);
    CHECK(von_neumann_entropy(ph) == doctest::Approx(von_neumann_entropy(hid)).epsilon(1e-10));

    // Tracing the physical sector down to its first particle agrees with
    // the direct single-particle reduction.
    const DensityMatrix one = trace_to_first(ph, ix);
    const DensityMatrix direct = reduce_single(psi, ix);
    CHECK((one.entries() - direct.entries()).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("entropy against direct sums") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 0.5;
  m(1, 1) = 0.3;
  m(2, 2) = 0.2;
  CHECK(von_neumann_entropy(DensityMatrix(m)) ==
        doctest::Approx(direct_entropy({0.5, 0.3, 0.2})).epsilon(1e-14));
  CHECK(von_neumann_entropy(DensityMatrix(m)) == doctest::Approx(1.0296530140645737).epsilon(1e-14));

  // Rotating the basis leaves the entropy unchanged.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(4, 4);
  const double c = std::cos(0.4), s = std::sin(0.4);
  u(0, 0) = c;
  u(0, 1) = -s;
  u(1, 0) = s;
  u(1, 1) = c;
  CHECK(von_neumann_entropy(DensityMatrix(u * m * u.adjoint())) ==
        doctest::Approx(direct_entropy({0.5, 0.3, 0.2})).epsilon(1e-13));

  // Tiny negative round-off is ignored; a real negative eigenvalue is an error.
  m(3, 3) = -1e-12;
  CHECK_NOTHROW(von_neumann_entropy(DensityMatrix(m)));
  m(3, 3) = -1e-3;
  CHECK_THROWS_AS(von_neumann_entropy(DensityMatrix(m)), InvalidStateError);
}

TEST_CASE("observables") {
  const Fixture& f = fx();
  const InitialState k4 = initial_metastate(f.physical, 4);
  const DensityMatrix rho = reduce_physical(k4.state, f.indexer);
  const Eigen::VectorXd pop = eigenstate_populations(rho, f.physical);
  CHECK(pop.sum() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pop(k4.level_index) == doctest::Approx(1.0).epsilon(1e-13));

  // Physical and hidden energies agree along the exchange-symmetric evolution.
  const MetaState later = evolve_to(2e12, k4.state, f.total, f.params.hbar);
  const double e_ph = energy_expectation(later, f.h.h_ph, f.indexer).value;
  const double e_hid = expectation(reduce_hidden(later, f.indexer), f.h.h_ph).value;
  CHECK(e_ph == doctest::Approx(e_hid).epsilon(1e-13));

  CHECK(meta_total_m(0, f.basis, f.indexer) == 0);
  CHECK(meta_total_m(255, f.basis, f.indexer) == 4);
  Eigen::Index lead = 0;
  k4.state.to_double().cwiseAbs().maxCoeff(&lead);
  const int m = meta_total_m(static_cast<size_t>(lead), f.basis, f.indexer);
  CHECK(weight_outside_m(k4.state, m, f.basis, f.indexer) < 1e-28);
  CHECK(weight_outside_m(later, m, f.basis, f.indexer) < 1e-28);
  CHECK(weight_outside_m(later, m + 1, f.basis, f.indexer) == doctest::Approx(1.0));
  CHECK_THROWS_AS(expectation(rho, f.h.h_tot), std::invalid_argument);
}

TEST_CASE("without gravity nothing entangles") {
  PhysicalParams p;
  p.G = 0.0;
  const SingleParticleBasis basis;
  const MetaIndexer ix(2, 4);
  const Hamiltonians h = build_hamiltonians(p, basis, fx().tables);
  const EigenSystem physical = diagonalize(h.h_ph);
  const EigenSystem total = diagonalize(h.h_tot);
  const InitialState init = initial_metastate(physical, 4);
  const Propagator prop(total, init.state, p.hbar);
  for (double t : {1e11, 1e12, 4e12}) {
    const DensityMatrix rho = reduce_physical(prop.at(t), ix);
    CHECK(von_neumann_entropy(rho) < 1e-10);
    CHECK((rho.entries() * rho.entries()).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
