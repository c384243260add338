#include "nng/evolve.hpp"
#include "nng/hamiltonian.hpp"
#include "nng/integrals.hpp"
#include "nng/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nng;

namespace {

const QuantumNumbers kS{0, 0, 0}, kPm{0, 1, -1}, kPz{0, 1, 0}, kPp{0, 1, 1};

}  // namespace

TEST_CASE("racah 3j: known values") {
  CHECK(oracle::racah_3j(1, 1, 0, 1, -1, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(oracle::racah_3j(2, 2, 2, 0, 0, 0) == doctest::Approx(-std::sqrt(2.0 / 35.0)).epsilon(1e-15));
  CHECK(oracle::racah_3j(1, 1, 1, 0, 0, 0) == 0.0);
}

TEST_CASE("production 3j agrees with the exact Racah sum") {
  double worst = 0.0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 8; ++c)
        for (int x = -a; x <= a; ++x)
          for (int y = -b; y <= b; ++y)
            for (int z = -c; z <= c; ++z)
              worst = std::max(worst, std::abs(wigner_3j(a, b, c, x, y, z) - oracle::racah_3j(a, b, c, x, y, z)));
  CHECK(worst < 1e-15);
}

TEST_CASE("angular factors agree with direct sphere quadrature") {
  const QuantumNumbers states[] = {kS, kPm, kPz, kPp};
  double worst = 0.0;
  for (int l = 0; l <= 3; ++l)
    for (const auto& a : states)
      for (const auto& b : states)
        for (const auto& c : states)
          for (const auto& d : states)
            worst = std::max(worst, std::abs(angular_coulomb_factor(l, a, b, c, d) -
                                             oracle::angular_quadrature(l, a, b, c, d)));
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(oracle::angular_quadrature(9, kS, kS, kS, kS), DomainError);
  CHECK_THROWS_AS(oracle::angular_quadrature(0, QuantumNumbers{1, 0, 0}, kS, kS, kS), DomainError);
}

TEST_CASE("Monte-Carlo Coulomb: ground state and selection rule") {
  oracle::McOptions opts;
  opts.samples = 200'000;
  const oracle::McEstimate g = oracle::mc_coulomb(kS, kS, kS, kS, opts);
  CHECK(g.samples == opts.samples);
  const double exact = std::sqrt(2.0 / std::numbers::pi);
  CHECK(std::abs(g.value - exact) < 3.0 * g.std_error);
  CHECK(std::abs(g.value - coulomb_element(kS, kS, kS, kS)) < 3.0 * g.std_error);

  // Total m changes by +2: the element vanishes identically.
  const oracle::McEstimate v = oracle::mc_coulomb(kPp, kPp, kPm, kPm, opts);
  CHECK(std::abs(v.value) < 4.0 * v.std_error + 1e-12);
}

TEST_CASE("Monte-Carlo standard error scales as 1/sqrt(N)") {
  oracle::McOptions small, large;
  small.samples = 100'000;
  large.samples = 400'000;
  large.seed = small.seed + 1;
  const double se_small = oracle::mc_coulomb(kPz, kS, kPz, kS, small).std_error;
  const double se_large = oracle::mc_coulomb(kPz, kS, kPz, kS, large).std_error;
  CHECK(se_large / se_small == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("Monte-Carlo is deterministic in the seed") {
  oracle::McOptions opts;
  opts.samples = 20'000;
  const auto a = oracle::mc_coulomb(kPz, kPz, kPz, kPz, opts);
  const auto b = oracle::mc_coulomb(kPz, kPz, kPz, kPz, opts);
  CHECK(a.value == b.value);
  opts.seed += 1;
  CHECK(oracle::mc_coulomb(kPz, kPz, kPz, kPz, opts).value != a.value);
}

TEST_CASE("Monte-Carlo argument errors") {
  oracle::McOptions opts;
  opts.samples = 100;
  CHECK_THROWS_AS(oracle::mc_coulomb(kS, kS, kS, kS, opts), std::invalid_argument);
  opts.samples = 20'000;
  opts.batch_size = 0;
  CHECK_THROWS_AS(oracle::mc_coulomb(kS, kS, kS, kS, opts), std::invalid_argument);
  CHECK_THROWS_AS(oracle::mc_coulomb(QuantumNumbers{0, 2, 0}, kS, kS, kS), DomainError);
}

TEST_CASE("expm propagation") {
  const PhysicalParams p;
  const SingleParticleBasis basis;
  const ElementTables tables = ElementTables::build(basis);
  const Hamiltonians h = build_hamiltonians(p, basis, tables);
  const EigenSystem physical = diagonalize(h.h_ph);
  const EigenSystem total = diagonalize(h.h_tot);
  const MetaState psi0 = initial_metastate(physical, 4).state;

  const MetaState same = oracle::expm_evolve(h.h_tot.entries(), psi0, 0.0, p.hbar);
  double worst0 = 0.0;
  for (Eigen::Index i = 0; i < 256; ++i)
    worst0 = std::max(worst0, static_cast<double>(abs(same.amplitudes(i) - psi0.amplitudes(i))));
  CHECK(worst0 < 1e-30);

  const double t = 1e11;
  const MetaState a = oracle::expm_evolve(h.h_tot.entries(), psi0, t, p.hbar);
  const MetaState b = evolve_to(t, psi0, total, p.hbar);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 256; ++i)
    worst = std::max(worst, static_cast<double>(abs(a.amplitudes(i) - b.amplitudes(i))));
  CHECK(worst < 1e-8);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expm on a diagonal operator gives the exact phases") {
  MatrixQ h = MatrixQ::Zero(2, 2);
  h(0, 0) = Complex(1);
  h(1, 1) = Complex(3);
  MetaState psi;
  psi.amplitudes = VectorQ::Constant(2, Complex(1 / sqrt(Real(2))));
  const MetaState out = oracle::expm_evolve(h, psi, 0.7, 1.0);
  const auto c0 = to_double(out.amplitudes(0)) * std::sqrt(2.0);
  const auto c1 = to_double(out.amplitudes(1)) * std::sqrt(2.0);
  CHECK(std::abs(c0 - std::polar(1.0, -0.7)) < 1e-15);
  CHECK(std::abs(c1 - std::polar(1.0, -2.1)) < 1e-15);

  MatrixQ big = MatrixQ::Zero(2, 2);
  big(0, 1) = big(1, 0) = Complex(1);
  CHECK_THROWS_AS(oracle::expm_evolve(big, psi, 1e80, 1.0), oracle::ExpmError);
  CHECK_THROWS_AS(oracle::expm_evolve(MatrixQ::Zero(3, 3), psi, 1.0, 1.0), std::invalid_argument);
}
