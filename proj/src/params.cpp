#include "nng/params.hpp"

#include <cmath>
#include <string>

namespace nng {

void PhysicalParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("PhysicalParams: ") + name + " must be positive");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("PhysicalParams: ") + name +
                                  " must be non-negative");
  };
  positive(mu, "mu");
  positive(omega, "omega");
  positive(hbar, "hbar");
  positive(lambda, "lambda");
  non_negative(l_s, "l_s");
  non_negative(G, "G");
}

double PhysicalParams::inverse_length() const { return std::sqrt(mu * omega / hbar); }

double PhysicalParams::contact_strength() const {
  return 4.0 * std::numbers::pi * hbar * hbar * l_s / mu;
}

double PhysicalParams::contact_estimate_u() const {
  const double k = mu * omega / hbar;
  return 4.0 * hbar * hbar * l_s / (mu * std::sqrt(std::numbers::pi)) * k * std::sqrt(k);
}

double PhysicalParams::eta() const { return contact_estimate_u() / (1.5 * hbar_omega()); }

double PhysicalParams::onset_time_estimate() const {
  return std::pow(hbar, 1.5) / (G * std::pow(mu, 2.5) * std::sqrt(omega));
}

PhysicalParams scale_params(const PhysicalParams& p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scale_params: lambda must be positive");
  PhysicalParams out = p;
  out.G = lambda * p.G;
  out.mu = std::pow(lambda, -0.4) * p.mu;
  out.l_s = std::pow(lambda, 0.2) * p.l_s;
  out.lambda = p.lambda * lambda;
  return out;
}

}  // namespace nng
