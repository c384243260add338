#pragma once

// Brute-force verifiers, each on a code path separate from the module it
// checks: Monte-Carlo 6-D Coulomb integrals, exact-rational 3j symbols,
// direct angular quadrature, and Taylor scaling-and-squaring propagation.

#include "nng/basis.hpp"
#include "nng/evolve.hpp"
#include "nng/precision.hpp"
#include "nng/specfun.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nng::oracle {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  uint64_t samples = 0;
};

/// Options for the Monte-Carlo sampler. Random numbers come from
/// std::mt19937_64 seeded per batch with splitmix64(seed + batch index);
/// normal deviates use the Box-Muller transform on 53-bit uniforms.
struct McOptions {
  uint64_t samples = 1'000'000;
  uint64_t seed = 12345;
  uint64_t batch_size = 1 << 16;
};

/// Real part of <i1 i2| 1/|r1 - r2| |j1 j2> in units of sqrt(mu omega/hbar),
/// sampling r1, r2 from the ground-state density. Supports n = 0, l <= 1.
McEstimate mc_coulomb(const QuantumNumbers& qi1, const QuantumNumbers& qi2,
                      const QuantumNumbers& qj1, const QuantumNumbers& qj2,
                      const McOptions& options = {});

/// All d^4 elements from one shared sample stream, indexed as
/// ((i1 d + i2) d + j1) d + j2.
std::vector<McEstimate> mc_coulomb_table(const SingleParticleBasis& basis,
                                         const McOptions& options = {});

/// 3j symbol from the Racah Clebsch-Gordan sum in exact rational arithmetic.
double racah_3j(int j1, int j2, int j3, int m1, int m2, int m3);

/// int dOmega1 dOmega2 Y*_i Y_i' Y*_j Y_j' P_l(r1.r2) by product Gauss-Legendre
/// x trapezoid quadrature on both spheres. Orbitals limited to l <= 1.
double angular_quadrature(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                          const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime);

/// int dOmega Y*_a Y*_b Y_c Y_d by the same quadrature.
double quartic_angular_quadrature(const QuantumNumbers& a, const QuantumNumbers& b,
                                  const QuantumNumbers& c, const QuantumNumbers& d);

class ExpmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp(-i H t / hbar) psi0 by Taylor scaling and squaring in binary128, per
/// connected block of H touched by psi0. Throws ExpmError if more than 200
/// squarings would be needed.
MetaState expm_evolve(const MatrixQ& h, const MetaState& psi0, double t, double hbar);

}  // namespace nng::oracle
