#include "nng/specfun.hpp"

#include "nng/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace nng {

namespace {

constexpr int kMaxFactorial = 170;

const std::array<Real, kMaxFactorial + 1>& factorial_table() {
  static const auto table = [] {
    std::array<Real, kMaxFactorial + 1> t{};
    t[0] = 1;
    for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table;
}

const Real& fact_q(int n) { return factorial_table().at(static_cast<size_t>(n)); }

int sign_of_power(int p) { return (std::abs(p) % 2 == 0) ? 1 : -1; }

// Upper end of the radial integration range; the integrand decays as e^{-xi^2}.
double radial_cutoff(const QuantumNumbers& q) {
  return std::max(12.0, 2.0 * std::sqrt(2.0 * q.n + q.l + 1.5) + 10.0);
}

}  // namespace

std::string to_string(const QuantumNumbers& q) {
  return "(" + std::to_string(q.n) + "," + std::to_string(q.l) + "," + std::to_string(q.m) + ")";
}

double confluent_hypergeometric_poly(double a, double b, double x) {
  if (a > 0.0 || a != std::floor(a))
    throw DomainError("confluent_hypergeometric_poly: a must be a non-positive integer");
  if (!(b > 0.0)) throw DomainError("confluent_hypergeometric_poly: b must be positive");
  const int n = static_cast<int>(-a);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (a + k) / (b + k) * x / (k + 1);
    sum += term;
  }
  return sum;
}

double radial_wavefunction(const QuantumNumbers& q, double xi, double norm) {
  if (!q.valid()) throw DomainError("radial_wavefunction: invalid labels " + to_string(q));
  if (xi < 0.0) throw DomainError("radial_wavefunction: xi must be non-negative");
  return norm * std::exp(-0.5 * xi * xi) * std::pow(xi, q.l) *
         confluent_hypergeometric_poly(-q.n, q.l + 1.5, xi * xi);
}

double normalize_radial(const QuantumNumbers& q) {
  if (!q.valid()) throw DomainError("normalize_radial: invalid labels " + to_string(q));
  const auto density = [&](double xi) {
    const double u = radial_wavefunction(q, xi, 1.0);
    return u * u * xi * xi;
  };
  const double integral = integrate_refined(density, 0.0, radial_cutoff(q), 1e-15);
  return 1.0 / std::sqrt(integral);
}

RadialOrbital::RadialOrbital(const QuantumNumbers& q) : q_(q), norm_(normalize_radial(q)) {}

Real wigner_3j_q(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0;
  if (m1 + m2 + m3 != 0) return 0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0;
  if (j1 + j2 + j3 + 1 > kMaxFactorial)
    throw DomainError("wigner_3j: angular momenta too large for the factorial table");

  const int kmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int kmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  Real sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const Real denom = fact_q(k) * fact_q(j3 - j2 + k + m1) * fact_q(j3 - j1 + k - m2) *
                       fact_q(j1 + j2 - j3 - k) * fact_q(j1 - k - m1) * fact_q(j2 - k + m2);
    sum += sign_of_power(k) / denom;
  }
  const Real triangle = fact_q(j1 + j2 - j3) * fact_q(j1 - j2 + j3) * fact_q(-j1 + j2 + j3) /
                        fact_q(j1 + j2 + j3 + 1);
  const Real projections = fact_q(j1 + m1) * fact_q(j1 - m1) * fact_q(j2 + m2) * fact_q(j2 - m2) *
                           fact_q(j3 + m3) * fact_q(j3 - m3);
  return sign_of_power(j1 - j2 - m3) * sqrt(triangle * projections) * sum;
}

double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  return static_cast<double>(wigner_3j_q(j1, j2, j3, m1, m2, m3));
}

double clebsch_gordan(int l1, int l2, int l, int m1, int m2, int m) {
  const double w = wigner_3j(l1, l2, l, m1, m2, -m);
  if (w == 0.0) return 0.0;
  return sign_of_power(l1 - l2 + m) * std::sqrt(2.0 * l + 1.0) * w;
}

}  // namespace nng
