#pragma once

#include "nng/precision.hpp"

#include <stdexcept>
#include <string>

namespace nng {

/// Oscillator labels (n, l, m) of a single-particle state psi_nlm.
struct QuantumNumbers {
  int n = 0;
  int l = 0;
  int m = 0;

  bool valid() const { return n >= 0 && l >= 0 && m >= -l && m <= l; }
  friend bool operator==(const QuantumNumbers&, const QuantumNumbers&) = default;
};

std::string to_string(const QuantumNumbers& q);

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Terminating Kummer series F(a, b, x) = sum_k (a)_k/(b)_k x^k/k! for
/// a = -n, n a non-negative integer. Throws DomainError otherwise.
double confluent_hypergeometric_poly(double a, double b, double x);

/// Normalization A_nl > 0 such that int_0^inf R_nl(xi)^2 xi^2 dxi = 1, fixed
/// by Gauss-Legendre quadrature of the unnormalized radial function.
double normalize_radial(const QuantumNumbers& q);

/// R_nl(xi) = A_nl e^{-xi^2/2} xi^l F(-n, l+3/2, xi^2), with xi = r sqrt(mu omega/hbar).
/// The 1/xi of the textbook form is cancelled analytically, so xi = 0 is fine.
double radial_wavefunction(const QuantumNumbers& q, double xi, double norm);

/// Radial function with its normalization computed once.
class RadialOrbital {
 public:
  explicit RadialOrbital(const QuantumNumbers& q);

  double operator()(double xi) const { return radial_wavefunction(q_, xi, norm_); }
  double norm() const { return norm_; }
  const QuantumNumbers& labels() const { return q_; }

 private:
  QuantumNumbers q_;
  double norm_;
};

/// Wigner 3j symbol for integer arguments (Racah sum formula). Returns 0 when
/// the selection rules fail.
double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3);
/// Same in binary128 (factorials are exact through 30!).
Real wigner_3j_q(int j1, int j2, int j3, int m1, int m2, int m3);

/// <l1 m1 l2 m2 | l m> = (-1)^{l1-l2+m} sqrt(2l+1) (l1 l2 l; m1 m2 -m).
double clebsch_gordan(int l1, int l2, int l, int m1, int m2, int m);

}  // namespace nng
