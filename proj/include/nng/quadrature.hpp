#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace nng {

/// Raised when an adaptive refinement fails to reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double error_estimate)
      : std::runtime_error(what), error_estimate_(error_estimate) {}
  double error_estimate() const { return error_estimate_; }

 private:
  double error_estimate_;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order (Newton iteration on P_n).
GaussRule gauss_legendre(int order);

/// Composite Gauss-Legendre nodes/weights on [a, b] split into equal panels.
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
CompositeRule composite_gauss_legendre(double a, double b, int panels, int order);

/// Integrates f over [a, b] by doubling the panel count until two successive
/// estimates agree to rel_tol (relative to the larger magnitude, with abs_tol
/// as a floor). Throws QuadratureError after max_levels doublings.
double integrate_refined(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-13, double abs_tol = 1e-300,
                         int order = 20, int max_levels = 8);

}  // namespace nng
