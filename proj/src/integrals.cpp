#include "nng/integrals.hpp"

#include "nng/quadrature.hpp"

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

namespace nng {

namespace {

int parity_sign(int p) { return (std::abs(p) % 2 == 0) ? 1 : -1; }

void require_valid(const QuantumNumbers& q, const char* where) {
  if (!q.valid()) throw DomainError(std::string(where) + ": invalid labels " + to_string(q));
}

// One fixed-resolution evaluation of the multipole double integral.
double multipole_pass(int l, const RadialOrbital& ri, const RadialOrbital& rj,
                      const RadialOrbital& ri_prime, const RadialOrbital& rj_prime,
                      double cutoff, int panels, const GaussRule& rule) {
  const int order = static_cast<int>(rule.nodes.size());
  const double h = cutoff / panels;

  const auto inner_below = [&](double r) { return std::pow(r, l + 2) * rj(r) * rj_prime(r); };
  const auto inner_above = [&](double r) { return std::pow(r, 1 - l) * rj(r) * rj_prime(r); };
  const auto gl = [&](auto&& f, double a, double b) {
    double s = 0.0;
    for (int k = 0; k < order; ++k)
      s += rule.weights[k] * f(a + 0.5 * (b - a) * (rule.nodes[k] + 1.0));
    return 0.5 * (b - a) * s;
  };

  std::vector<double> below_before(panels + 1, 0.0);  // int_0^{panel start}
  std::vector<double> above_after(panels + 1, 0.0);   // int_{panel end}^{cutoff}
  for (int p = 0; p < panels; ++p)
    below_before[p + 1] = below_before[p] + gl(inner_below, p * h, (p + 1) * h);
  for (int p = panels; p-- > 0;)
    above_after[p] = above_after[p + 1] + gl(inner_above, p * h, (p + 1) * h);

  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = p * h;
    const double hi = lo + h;
    double panel_sum = 0.0;
    for (int k = 0; k < order; ++k) {
      const double r1 = lo + 0.5 * h * (rule.nodes[k] + 1.0);
      const double below = below_before[p] + gl(inner_below, lo, r1);
      const double above = above_after[p + 1] + gl(inner_above, r1, hi);
      const double potential = std::pow(r1, 1 - l) * below + std::pow(r1, l + 2) * above;
      panel_sum += rule.weights[k] * ri(r1) * ri_prime(r1) * potential;
    }
    total += 0.5 * h * panel_sum;
  }
  return total;
}

}  // namespace

double radial_multipole_integral(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                                 const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime,
                                 const IntegralOptions& options) {
  if (l < 0) throw DomainError("radial_multipole_integral: negative multipole order");
  for (const auto* q : {&qi, &qj, &qi_prime, &qj_prime}) require_valid(*q, "radial_multipole_integral");

  const RadialOrbital ri(qi), rj(qj), ri_p(qi_prime), rj_p(qj_prime);
  const GaussRule rule = gauss_legendre(options.order);
  int panels = 4;
  double prev = multipole_pass(l, ri, rj, ri_p, rj_p, options.cutoff, panels, rule);
  double err = 0.0;
  for (int level = 0; level < options.max_levels; ++level) {
    panels *= 2;
    const double cur = multipole_pass(l, ri, rj, ri_p, rj_p, options.cutoff, panels, rule);
    err = std::abs(cur - prev);
    if (err <= options.rel_tol * std::max({std::abs(cur), std::abs(prev), 1e-300})) return cur;
    prev = cur;
  }
  throw QuadratureError("radial_multipole_integral: no convergence (estimated error " +
                            std::to_string(err) + ")",
                        err);
}

Real angular_coulomb_factor_q(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                              const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime) {
  for (const auto* q : {&qi, &qj, &qi_prime, &qj_prime}) require_valid(*q, "angular_coulomb_factor");
  if (l < 0) return 0;
  const Real parity =
      wigner_3j_q(qj.l, qj_prime.l, l, 0, 0, 0) * wigner_3j_q(qi.l, qi_prime.l, l, 0, 0, 0);
  if (parity == 0) return 0;
  Real sum = 0;
  for (int m = -l; m <= l; ++m) {
    const Real a = wigner_3j_q(qi.l, qi_prime.l, l, -qi.m, qi_prime.m, -m);
    if (a == 0) continue;
    const Real b = wigner_3j_q(qj.l, qj_prime.l, l, -qj.m, qj_prime.m, m);
    sum += parity_sign(m + qi.m + qj.m) * a * b;
  }
  if (sum == 0) return 0;
  const Real degeneracy =
      sqrt(Real((2 * qi.l + 1) * (2 * qj.l + 1) * (2 * qi_prime.l + 1) * (2 * qj_prime.l + 1)));
  return degeneracy * parity * sum;
}

double angular_coulomb_factor(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                              const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime) {
  return static_cast<double>(angular_coulomb_factor_q(l, qi, qj, qi_prime, qj_prime));
}

double radial_quartic_overlap(const QuantumNumbers& a, const QuantumNumbers& b,
                              const QuantumNumbers& c, const QuantumNumbers& d,
                              const IntegralOptions& options) {
  const RadialOrbital ra(a), rb(b), rc(c), rd(d);
  return integrate_refined([&](double x) { return ra(x) * rb(x) * rc(x) * rd(x) * x * x; }, 0.0,
                           options.cutoff, options.rel_tol, 1e-300, options.order,
                           options.max_levels);
}

double coulomb_element(const QuantumNumbers& qi1, const QuantumNumbers& qi2,
                       const QuantumNumbers& qj1, const QuantumNumbers& qj2,
                       const IntegralOptions& options) {
  Real value = 0;
  for (int l = 0; l <= options.max_multipole; ++l) {
    const Real angular = angular_coulomb_factor_q(l, qi1, qi2, qj1, qj2);
    if (angular == 0) continue;
    value += angular * Real(radial_multipole_integral(l, qi1, qi2, qj1, qj2, options));
  }
  return static_cast<double>(value);
}

namespace {

// int Y*_a Y*_b Y_c Y_d dOmega via completeness over the product Y*_a Y_c.
Real quartic_angular(const QuantumNumbers& a, const QuantumNumbers& b, const QuantumNumbers& c,
                     const QuantumNumbers& d) {
  const Real four_pi = 2 * two_pi_q();
  Real sum = 0;
  for (int L = std::abs(a.l - c.l); L <= a.l + c.l; ++L)
    sum += Real(2 * L + 1) / four_pi * angular_coulomb_factor_q(L, a, b, c, d);
  return sum;
}

}  // namespace

double contact_element(const QuantumNumbers& qi1, const QuantumNumbers& qi2,
                       const QuantumNumbers& qj1, const QuantumNumbers& qj2,
                       const IntegralOptions& options) {
  const Real angular = quartic_angular(qi1, qi2, qj1, qj2);
  if (angular == 0) return 0.0;
  return static_cast<double>(angular * Real(radial_quartic_overlap(qi1, qi2, qj1, qj2, options)));
}

double TwoBodyTable::max_abs() const {
  Real m = 0;
  for (const Real& v : data_) m = std::max(m, Real(abs(v)));
  return static_cast<double>(m);
}

double TwoBodyTable::hermiticity_defect() const {
  Real worst = 0;
  for (size_t i1 = 0; i1 < dim_; ++i1)
    for (size_t i2 = 0; i2 < dim_; ++i2)
      for (size_t j1 = 0; j1 < dim_; ++j1)
        for (size_t j2 = 0; j2 < dim_; ++j2)
          worst = std::max(worst, Real(abs((*this)(i1, i2, j1, j2) - (*this)(j1, j2, i1, i2))));
  return static_cast<double>(worst);
}

RadialIntegralTable::RadialIntegralTable(const SingleParticleBasis& basis,
                                         const IntegralOptions& options)
    : basis_(&basis), max_multipole_(options.max_multipole) {
  const size_t d = basis.size();
  for (int l = 0; l <= max_multipole_; ++l)
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j)
        for (size_t ip = 0; ip < d; ++ip)
          for (size_t jp = 0; jp < d; ++jp) {
            // Orders killed by the (l_a l_b l; 0 0 0) parity factors are never needed.
            if (wigner_3j(basis[i].l, basis[ip].l, l, 0, 0, 0) == 0.0 ||
                wigner_3j(basis[j].l, basis[jp].l, l, 0, 0, 0) == 0.0)
              continue;
            const Key k = key(l, basis[i], basis[j], basis[ip], basis[jp]);
            if (values_.count(k)) continue;
            values_[k] = radial_multipole_integral(l, basis[i], basis[j], basis[ip], basis[jp], options);
          }
}

RadialIntegralTable::Key RadialIntegralTable::key(int l, const QuantumNumbers& a,
                                                  const QuantumNumbers& b,
                                                  const QuantumNumbers& c,
                                                  const QuantumNumbers& d) {
  return {l, a.n, a.l, b.n, b.l, c.n, c.l, d.n, d.l};
}

double RadialIntegralTable::operator()(int l, size_t i, size_t j, size_t i_prime,
                                       size_t j_prime) const {
  const auto& b = *basis_;
  return values_.at(key(l, b[i], b[j], b[i_prime], b[j_prime]));
}

ElementTables ElementTables::build(const SingleParticleBasis& basis, const IntegralOptions& options) {
  const size_t d = basis.size();
  ElementTables t;
  t.coulomb = TwoBodyTable(d);
  t.contact = TwoBodyTable(d);
  t.coulomb_multipoles.assign(static_cast<size_t>(options.max_multipole) + 1, TwoBodyTable(d));

  const RadialIntegralTable radial(basis, options);
  std::map<std::tuple<int, int, int, int, int, int, int, int>, double> quartic;

  for (size_t i1 = 0; i1 < d; ++i1)
    for (size_t i2 = 0; i2 < d; ++i2)
      for (size_t j1 = 0; j1 < d; ++j1)
        for (size_t j2 = 0; j2 < d; ++j2) {
          const auto &a = basis[i1], &b = basis[i2], &c = basis[j1], &e = basis[j2];
          for (int l = 0; l <= options.max_multipole; ++l) {
            const Real angular = angular_coulomb_factor_q(l, a, b, c, e);
            if (angular != 0)
              t.coulomb_multipoles[l].at(i1, i2, j1, j2) = angular * Real(radial(l, i1, i2, j1, j2));
          }
          const Real angular = quartic_angular(a, b, c, e);
          if (angular != 0) {
            // The radial overlap is symmetric in its four arguments; sort the key.
            std::array<std::pair<int, int>, 4> nl{{{a.n, a.l}, {b.n, b.l}, {c.n, c.l}, {e.n, e.l}}};
            std::sort(nl.begin(), nl.end());
            const auto k = std::make_tuple(nl[0].first, nl[0].second, nl[1].first, nl[1].second,
                                           nl[2].first, nl[2].second, nl[3].first, nl[3].second);
            auto it = quartic.find(k);
            if (it == quartic.end())
              it = quartic.emplace(k, radial_quartic_overlap(a, b, c, e, options)).first;
            t.contact.at(i1, i2, j1, j2) = angular * Real(it->second);
          }
        }

  for (size_t i1 = 0; i1 < d; ++i1)
    for (size_t i2 = 0; i2 < d; ++i2)
      for (size_t j1 = 0; j1 < d; ++j1)
        for (size_t j2 = 0; j2 < d; ++j2) {
          Real sum = 0;
          for (const auto& m : t.coulomb_multipoles) sum += m(i1, i2, j1, j2);
          t.coulomb.at(i1, i2, j1, j2) = sum;
        }
  return t;
}

namespace {

std::string hex_quad(const Real& v) {
  char buf[64];
  const int n = quadmath_snprintf(buf, sizeof buf, "%Qa", v.backend().value());
  if (n <= 0 || n >= static_cast<int>(sizeof buf))
    throw std::runtime_error("element table: value formatting failed");
  return std::string(buf, static_cast<size_t>(n));
}

Real parse_hex_quad(const std::string& s) {
  const std::string_view view(s);
  const size_t sign = (!view.empty() && (view[0] == '-' || view[0] == '+')) ? 1 : 0;
  if (view.size() < sign + 2 || view[sign] != '0' || (view[sign + 1] != 'x' && view[sign + 1] != 'X'))
    throw std::runtime_error("element table: expected hexadecimal float, got '" + s + "'");
  char* end = nullptr;
  const __float128 v = strtoflt128(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    throw std::runtime_error("element table: malformed value '" + s + "'");
  return Real(v);
}

}  // namespace

void ElementTables::save(std::ostream& out) const {
  const size_t d = dim();
  out << "# two-body element table: kind l i j i' j' value\n";
  out << "# dim " << d << " multipoles " << coulomb_multipoles.size() << "\n";
  for (size_t l = 0; l < coulomb_multipoles.size(); ++l)
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j)
        for (size_t ip = 0; ip < d; ++ip)
          for (size_t jp = 0; jp < d; ++jp)
            out << "coulomb " << l << ' ' << i << ' ' << j << ' ' << ip << ' ' << jp << ' '
                << hex_quad(coulomb_multipoles[l](i, j, ip, jp)) << '\n';
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t ip = 0; ip < d; ++ip)
        for (size_t jp = 0; jp < d; ++jp)
          out << "contact 0 " << i << ' ' << j << ' ' << ip << ' ' << jp << ' '
              << hex_quad(contact(i, j, ip, jp)) << '\n';
}

ElementTables ElementTables::load(std::istream& in) {
  std::string line;
  size_t d = 0, multipoles = 0;
  ElementTables t;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string hash, tag;
      fields >> hash >> tag;
      if (tag == "dim") {
        std::string mtag;
        fields >> d >> mtag >> multipoles;
        if (!fields || mtag != "multipoles" || d == 0)
          throw std::runtime_error("element table: bad header at line " + std::to_string(line_no));
        t.coulomb = TwoBodyTable(d);
        t.contact = TwoBodyTable(d);
        t.coulomb_multipoles.assign(multipoles, TwoBodyTable(d));
      }
      continue;
    }
    if (d == 0) throw std::runtime_error("element table: data before header");
    std::string kind, value;
    size_t l = 0, i = 0, j = 0, ip = 0, jp = 0;
    fields >> kind >> l >> i >> j >> ip >> jp >> value;
    if (!fields || i >= d || j >= d || ip >= d || jp >= d)
      throw std::runtime_error("element table: malformed line " + std::to_string(line_no));
    const Real v = parse_hex_quad(value);
    if (kind == "coulomb" && l < multipoles) {
      t.coulomb_multipoles[l].at(i, j, ip, jp) = v;
    } else if (kind == "contact" && l == 0) {
      t.contact.at(i, j, ip, jp) = v;
    } else {
      throw std::runtime_error("element table: unknown entry at line " + std::to_string(line_no));
    }
  }
  if (d == 0) throw std::runtime_error("element table: missing header");
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t ip = 0; ip < d; ++ip)
        for (size_t jp = 0; jp < d; ++jp) {
          Real sum = 0;
          for (const auto& m : t.coulomb_multipoles) sum += m(i, j, ip, jp);
          t.coulomb.at(i, j, ip, jp) = sum;
        }
  return t;
}

void inject_asymmetry(ElementTables& tables) {
  const Real kick = Real(0.1 * std::max(tables.coulomb.max_abs(), 1.0));
  tables.coulomb.at(0, 0, 0, 1) += kick;
  if (!tables.coulomb_multipoles.empty()) tables.coulomb_multipoles[0].at(0, 0, 0, 1) += kick;
}

}  // namespace nng
