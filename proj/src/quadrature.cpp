#include "nng/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace nng {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    if (order == 1) p0 = 1.0;
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

CompositeRule composite_gauss_legendre(double a, double b, int panels, int order) {
  const GaussRule base = gauss_legendre(order);
  CompositeRule out;
  out.nodes.reserve(static_cast<size_t>(panels) * order);
  out.weights.reserve(static_cast<size_t>(panels) * order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < order; ++k) {
      out.nodes.push_back(lo + 0.5 * h * (base.nodes[k] + 1.0));
      out.weights.push_back(0.5 * h * base.weights[k]);
    }
  }
  return out;
}

double integrate_refined(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_tol, int order, int max_levels) {
  auto estimate = [&](int panels) {
    const CompositeRule rule = composite_gauss_legendre(a, b, panels, order);
    double s = 0.0;
    for (size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(rule.nodes[k]);
    return s;
  };
  int panels = 4;
  double prev = estimate(panels);
  double err = 0.0;
  for (int level = 0; level < max_levels; ++level) {
    panels *= 2;
    const double cur = estimate(panels);
    err = std::abs(cur - prev);
    if (err <= std::max(rel_tol * std::max(std::abs(cur), std::abs(prev)), abs_tol)) return cur;
    prev = cur;
  }
  throw QuadratureError("integrate_refined: no convergence", err);
}

}  // namespace nng
