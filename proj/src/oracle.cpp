#include "nng/oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <random>

namespace nng::oracle {

namespace {

using cd = std::complex<double>;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on (0, 1] from the top 53 bits.
double uniform_open0(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Two independent N(0, 1/2) deviates: the ground-state density per axis.
std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
  const double radius = std::sqrt(-std::log(uniform_open0(rng)));  // sqrt(-2 ln u) * sqrt(1/2)
  const double angle = 2.0 * std::numbers::pi * uniform_open0(rng);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

void require_supported(const QuantumNumbers& q) {
  if (!q.valid() || q.n != 0 || q.l > 1)
    throw DomainError("oracle: only n = 0, l <= 1 orbitals are supported, got " + to_string(q));
}

// psi_{0 l m}(r) / psi_000(r) as a Cartesian polynomial (Condon-Shortley phases).
cd cartesian_factor(const QuantumNumbers& q, double x, double y, double z) {
  if (q.l == 0) return 1.0;
  switch (q.m) {
    case 0:
      return std::numbers::sqrt2 * z;
    case 1:
      return -cd(x, y);
    default:
      return cd(x, -y);
  }
}

// Spherical harmonics for l <= 1.
cd spherical_harmonic(const QuantumNumbers& q, double cos_theta, double phi) {
  const double pi = std::numbers::pi;
  if (q.l == 0) return 1.0 / std::sqrt(4.0 * pi);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  if (q.m == 0) return std::sqrt(3.0 / (4.0 * pi)) * cos_theta;
  const double c = std::sqrt(3.0 / (8.0 * pi)) * sin_theta;
  return q.m == 1 ? -c * std::polar(1.0, phi) : c * std::polar(1.0, -phi);
}

double legendre(int l, double x) {
  double p0 = 1.0, p1 = x;
  if (l == 0) return p0;
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

struct SpherePoint {
  double x, y, z, cos_theta, phi, weight;
};

// Gauss-Legendre (10 points) in cos(theta) x 16-point trapezoid in phi;
// exact for the polynomial degrees met with l <= 1 orbitals and l <= 8 multipoles.
const std::vector<SpherePoint>& sphere_rule() {
  static const std::vector<SpherePoint> rule = [] {
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    std::vector<double> nodes, weights;
    for (size_t i = 0; i < Gauss::abscissa().size(); ++i) {
      nodes.push_back(Gauss::abscissa()[i]);
      weights.push_back(Gauss::weights()[i]);
      nodes.push_back(-Gauss::abscissa()[i]);
      weights.push_back(Gauss::weights()[i]);
    }
    constexpr int kPhi = 16;
    std::vector<SpherePoint> pts;
    for (size_t i = 0; i < nodes.size(); ++i)
      for (int k = 0; k < kPhi; ++k) {
        const double ct = nodes[i];
        const double st = std::sqrt(1.0 - ct * ct);
        const double phi = 2.0 * std::numbers::pi * k / kPhi;
        pts.push_back({st * std::cos(phi), st * std::sin(phi), ct, ct, phi,
                       weights[i] * 2.0 * std::numbers::pi / kPhi});
      }
    return pts;
  }();
  return rule;
}

}  // namespace

std::vector<McEstimate> mc_coulomb_table(const SingleParticleBasis& basis, const McOptions& options) {
  if (options.samples < 10'000) throw std::invalid_argument("mc_coulomb: need at least 1e4 samples");
  if (options.batch_size == 0) throw std::invalid_argument("mc_coulomb: batch size must be positive");
  for (const auto& q : basis.states()) require_supported(q);

  const size_t d = basis.size();
  const size_t n_elem = d * d * d * d;
  std::vector<long double> sum(n_elem, 0.0L), sum_sq(n_elem, 0.0L);
  std::vector<cd> f1(d), f2(d), pair1(d * d), pair2(d * d);

  uint64_t remaining = options.samples;
  for (uint64_t batch = 0; remaining > 0; ++batch) {
    const uint64_t count = std::min(remaining, options.batch_size);
    remaining -= count;
    std::mt19937_64 rng(splitmix64(options.seed + batch));
    std::vector<long double> bsum(n_elem, 0.0L), bsq(n_elem, 0.0L);
    for (uint64_t s = 0; s < count; ++s) {
      const auto [x1, y1] = gaussian_pair(rng);
      const auto [z1, x2] = gaussian_pair(rng);
      const auto [y2, z2] = gaussian_pair(rng);
      const double inv_r12 =
          1.0 / std::sqrt((x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2) + (z1 - z2) * (z1 - z2));
      for (size_t a = 0; a < d; ++a) {
        f1[a] = cartesian_factor(basis[a], x1, y1, z1);
        f2[a] = cartesian_factor(basis[a], x2, y2, z2);
      }
      for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
          pair1[i * d + j] = std::conj(f1[i]) * f1[j];
          pair2[i * d + j] = std::conj(f2[i]) * f2[j];
        }
      // element (i1 i2; j1 j2): particle 1 carries (i1, j1), particle 2 (i2, j2)
      for (size_t i1 = 0; i1 < d; ++i1)
        for (size_t i2 = 0; i2 < d; ++i2)
          for (size_t j1 = 0; j1 < d; ++j1)
            for (size_t j2 = 0; j2 < d; ++j2) {
              const double w = (pair1[i1 * d + j1] * pair2[i2 * d + j2]).real() * inv_r12;
              const size_t e = ((i1 * d + i2) * d + j1) * d + j2;
              bsum[e] += w;
              bsq[e] += static_cast<long double>(w) * w;
            }
    }
    for (size_t e = 0; e < n_elem; ++e) {
      sum[e] += bsum[e];
      sum_sq[e] += bsq[e];
    }
  }

  const auto n = static_cast<long double>(options.samples);
  std::vector<McEstimate> out(n_elem);
  for (size_t e = 0; e < n_elem; ++e) {
    const long double mean = sum[e] / n;
    const long double var = std::max(0.0L, (sum_sq[e] / n - mean * mean) * n / (n - 1));
    out[e] = {static_cast<double>(mean), static_cast<double>(std::sqrt(var / n)), options.samples};
  }
  return out;
}

McEstimate mc_coulomb(const QuantumNumbers& qi1, const QuantumNumbers& qi2,
                      const QuantumNumbers& qj1, const QuantumNumbers& qj2,
                      const McOptions& options) {
  const SingleParticleBasis single({qi1, qi2, qj1, qj2});
  // (i1 i2; j1 j2) = (0 1; 2 3) in the four-state scratch basis.
  return mc_coulomb_table(single, options)[((0 * 4 + 1) * 4 + 2) * 4 + 3];
}

double racah_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (j3 > j1 + j2 || j3 < std::abs(j1 - j2)) return 0.0;

  auto f = [](int k) {
    cpp_int r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  };
  // <j1 m1 j2 m2 | J M> with J = j3, M = -m3.
  const int J = j3, M = -m3;
  cpp_rational sum = 0;
  for (int k = 0;; ++k) {
    const int a = j1 + j2 - J - k, b = j1 - m1 - k, c = j2 + m2 - k;
    const int e = J - j2 + m1 + k, g = J - j1 - m2 + k;
    if (a < 0 || b < 0 || c < 0) break;
    if (e < 0 || g < 0) continue;
    const cpp_rational term(cpp_int(1), f(k) * f(a) * f(b) * f(c) * f(e) * f(g));
    sum += (k % 2 == 0) ? term : cpp_rational(-term);
  }
  if (sum == 0) return 0.0;
  // 3j^2 = CG^2 / (2J+1); CG^2 = (2J+1) * triangle * projections * sum^2.
  const cpp_rational squared = cpp_rational(f(J + j1 - j2) * f(J - j1 + j2) * f(j1 + j2 - J),
                                            f(j1 + j2 + J + 1)) *
                               cpp_rational(f(J + M) * f(J - M) * f(j1 - m1) * f(j1 + m1) *
                                            f(j2 - m2) * f(j2 + m2)) *
                               sum * sum;
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big magnitude = sqrt(Big(numerator(squared)) / Big(denominator(squared)));
  const int phase = ((j1 - j2 - m3) % 2 == 0 ? 1 : -1) * (sum > 0 ? 1 : -1);
  return phase * static_cast<double>(magnitude);
}

double angular_quadrature(int l, const QuantumNumbers& qi, const QuantumNumbers& qj,
                          const QuantumNumbers& qi_prime, const QuantumNumbers& qj_prime) {
  for (const auto* q : {&qi, &qj, &qi_prime, &qj_prime}) require_supported(*q);
  if (l < 0 || l > 8) throw DomainError("angular_quadrature: multipole order outside 0..8");
  const auto& rule = sphere_rule();
  std::vector<cd> a(rule.size()), b(rule.size());
  for (size_t p = 0; p < rule.size(); ++p) {
    const auto& s = rule[p];
    a[p] = std::conj(spherical_harmonic(qi, s.cos_theta, s.phi)) *
           spherical_harmonic(qi_prime, s.cos_theta, s.phi) * s.weight;
    b[p] = std::conj(spherical_harmonic(qj, s.cos_theta, s.phi)) *
           spherical_harmonic(qj_prime, s.cos_theta, s.phi) * s.weight;
  }
  cd total = 0.0;
  for (size_t p = 0; p < rule.size(); ++p) {
    if (a[p] == 0.0) continue;
    cd inner = 0.0;
    for (size_t q = 0; q < rule.size(); ++q) {
      const double cos_gamma =
          rule[p].x * rule[q].x + rule[p].y * rule[q].y + rule[p].z * rule[q].z;
      inner += b[q] * legendre(l, cos_gamma);
    }
    total += a[p] * inner;
  }
  return total.real();
}

double quartic_angular_quadrature(const QuantumNumbers& a, const QuantumNumbers& b,
                                  const QuantumNumbers& c, const QuantumNumbers& d) {
  for (const auto* q : {&a, &b, &c, &d}) require_supported(*q);
  cd total = 0.0;
  for (const auto& s : sphere_rule())
    total += std::conj(spherical_harmonic(a, s.cos_theta, s.phi)) *
             std::conj(spherical_harmonic(b, s.cos_theta, s.phi)) *
             spherical_harmonic(c, s.cos_theta, s.phi) *
             spherical_harmonic(d, s.cos_theta, s.phi) * s.weight;
  return total.real();
}

namespace {

// Rows reachable from the seeds through nonzero entries (breadth first).
std::vector<size_t> reachable(const MatrixQ& h, const std::vector<size_t>& seeds,
                              std::vector<char>& seen) {
  std::vector<size_t> rows;
  std::deque<size_t> queue;
  for (size_t s : seeds)
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const size_t r = queue.front();
    queue.pop_front();
    rows.push_back(r);
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      if (!seen[c] && (h(r, c) != Complex(0) || h(c, r) != Complex(0))) {
        seen[c] = 1;
        queue.push_back(static_cast<size_t>(c));
      }
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

Real one_norm(const MatrixQ& a) {
  Real best = 0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    Real s = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) s += abs(a(r, c));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

MetaState expm_evolve(const MatrixQ& h, const MetaState& psi0, double t, double hbar) {
  if (h.rows() != h.cols() || static_cast<size_t>(h.rows()) != psi0.dim())
    throw std::invalid_argument("expm_evolve: dimension mismatch");
  const Eigen::Index n = h.rows();
  MetaState out;
  out.time = psi0.time + t;
  out.amplitudes = VectorQ::Zero(n);
  const Real t_over_hbar = Real(t) / Real(hbar);
  const Real two_pi = two_pi_q();

  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (Eigen::Index start = 0; start < n; ++start) {
    if (seen[start] || psi0.amplitudes(start) == Complex(0)) continue;
    const std::vector<size_t> rows = reachable(h, {static_cast<size_t>(start)}, seen);
    const auto m = static_cast<Eigen::Index>(rows.size());

    // exp(-i H t/hbar) = exp(-i c t/hbar) exp(-i (H - c) t/hbar), c = mean diagonal.
    Real shift = 0;
    for (size_t r : rows) shift += h(r, r).real();
    shift /= m;
    MatrixQ a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        Complex hij = h(rows[i], rows[j]);
        if (i == j) hij -= Complex(shift);
        a(i, j) = Complex(0, -1) * hij * t_over_hbar;
      }

    const Real norm = one_norm(a);
    int squarings = 0;
    if (norm > Real(0.5)) squarings = static_cast<int>(ceil(log2(norm / Real(0.5))));
    if (squarings > 200)
      throw ExpmError("expm_evolve: " + std::to_string(squarings) + " squarings needed");
    a /= Complex(pow(Real(2), squarings));

    MatrixQ expo = MatrixQ::Identity(m, m);
    MatrixQ term = MatrixQ::Identity(m, m);
    const Real tiny = std::numeric_limits<Real>::epsilon() / 100;
    for (int k = 1; k <= 60; ++k) {
      term = (term * a) / Complex(k);
      expo += term;
      if (one_norm(term) < tiny) break;
    }
    for (int s = 0; s < squarings; ++s) expo = expo * expo;

    Real phase = shift * t_over_hbar;
    phase -= floor(phase / two_pi) * two_pi;
    const Complex global(cos(phase), -sin(phase));
    VectorQ local(m);
    for (Eigen::Index i = 0; i < m; ++i) local(i) = psi0.amplitudes(rows[i]);
    const VectorQ result = expo * local;
    for (Eigen::Index i = 0; i < m; ++i) out.amplitudes(rows[i]) = global * result(i);
  }
  return out;
}

}  // namespace nng::oracle
