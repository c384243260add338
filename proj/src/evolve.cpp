#include "nng/evolve.hpp"

#include "nng/format.hpp"

#include <algorithm>
#include <numeric>

namespace nng {

namespace {

Real abs2(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

size_t leading_index(const MatrixQ& v, Eigen::Index col) {
  Real largest = 0;
  for (Eigen::Index r = 0; r < v.rows(); ++r) largest = std::max(largest, Real(abs(v(r, col))));
  const Real threshold = largest - Real(1e-9) * largest;
  for (Eigen::Index r = 0; r < v.rows(); ++r)
    if (abs(v(r, col)) >= threshold) return static_cast<size_t>(r);
  return 0;
}

Real spectral_scale(const RealVectorQ& values) {
  Real s = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) s = std::max(s, Real(abs(values(i))));
  return s;
}

Eigen::MatrixXcd reshape(const Eigen::VectorXcd& amps, size_t rows) {
  const size_t cols = static_cast<size_t>(amps.size()) / rows;
  Eigen::MatrixXcd m(rows, cols);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = amps(r * cols + c);
  return m;
}

void require_dim(const MetaState& psi, const MetaIndexer& indexer) {
  if (psi.dim() != indexer.meta_dim())
    throw std::invalid_argument("meta-state dimension does not match the indexer");
}

}  // namespace

Eigen::VectorXd EigenSystem::values_double() const {
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) out(i) = static_cast<double>(values(i));
  return out;
}

Eigen::MatrixXcd EigenSystem::vectors_double() const {
  Eigen::MatrixXcd out(vectors.rows(), vectors.cols());
  for (Eigen::Index r = 0; r < vectors.rows(); ++r)
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) out(r, c) = to_double(vectors(r, c));
  return out;
}

std::pair<size_t, size_t> EigenSystem::level_range(size_t k, double rel_tol) const {
  if (k >= dim()) throw std::out_of_range("EigenSystem::level_range: index out of range");
  const Real tol = Real(rel_tol) * spectral_scale(values);
  size_t first = k, last = k + 1;
  while (first > 0 && abs(values(first - 1) - values(first)) <= tol) --first;
  while (last < dim() && abs(values(last) - values(last - 1)) <= tol) ++last;
  return {first, last};
}

std::vector<std::vector<size_t>> connected_blocks(const MatrixQ& h) {
  const size_t n = static_cast<size_t>(h.rows());
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t r = 0; r < n; ++r)
    for (size_t c = r + 1; c < n; ++c)
      if (h(r, c) != Complex(0) || h(c, r) != Complex(0)) {
        const size_t a = find(r), b = find(c);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<size_t>> blocks;
  std::vector<long> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

EigenSystem diagonalize(const MatrixQ& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix must be square");
  const size_t n = static_cast<size_t>(h.rows());

  struct Pair {
    Real value;
    VectorQ vector;
    size_t block;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n);
  const auto blocks = connected_blocks(h);
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& rows = blocks[b];
    const auto m = static_cast<Eigen::Index>(rows.size());
    MatrixQ sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = h(rows[i], rows[j]);
    Eigen::SelfAdjointEigenSolver<MatrixQ> solver(sub);
    if (solver.info() != Eigen::Success)
      throw DiagonalizationError("diagonalize: eigensolver did not converge on a block of size " +
                                 std::to_string(m));
    for (Eigen::Index k = 0; k < m; ++k) {
      VectorQ full = VectorQ::Zero(static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < m; ++i) full(rows[i]) = solver.eigenvectors()(i, k);
      pairs.push_back({solver.eigenvalues()(k), std::move(full), b});
    }
  }

  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.value < b.value; });

  EigenSystem eig;
  eig.values.resize(static_cast<Eigen::Index>(n));
  eig.vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (size_t k = 0; k < n; ++k) {
    eig.values(k) = pairs[k].value;
    eig.vectors.col(k) = pairs[k].vector;
  }

  // Order degenerate levels by leading index.
  std::vector<size_t> block_of(n), lead(n);
  for (size_t k = 0; k < n; ++k) {
    block_of[k] = pairs[k].block;
    lead[k] = leading_index(eig.vectors, static_cast<Eigen::Index>(k));
  }
  for (size_t k = 0; k < n;) {
    auto [first, last] = eig.level_range(k);
    std::vector<size_t> order(last - first);
    std::iota(order.begin(), order.end(), first);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return lead[a] < lead[b]; });
    const MatrixQ cols = eig.vectors.middleCols(first, last - first);
    const RealVectorQ vals = eig.values.segment(first, last - first);
    std::vector<size_t> blk(block_of.begin() + first, block_of.begin() + last);
    std::vector<size_t> ld(lead.begin() + first, lead.begin() + last);
    for (size_t i = 0; i < order.size(); ++i) {
      eig.vectors.col(first + i) = cols.col(order[i] - first);
      eig.values(first + i) = vals(order[i] - first);
      block_of[first + i] = blk[order[i] - first];
      lead[first + i] = ld[order[i] - first];
    }
    k = last;
  }

  for (size_t k = 0; k < n; ++k) {
    const Complex c = eig.vectors(lead[k], k);
    eig.vectors.col(k) *= conj(c) / Complex(abs(c));
  }
  eig.support.resize(n);
  for (size_t k = 0; k < n; ++k) eig.support[k] = blocks[block_of[k]];
  return eig;
}

EigenSystem diagonalize(const HermitianOperator& h) {
  if (!h.is_hermitian(1e-10)) throw std::invalid_argument("diagonalize: operator is not Hermitian");
  return diagonalize(h.entries());
}

Eigen::VectorXcd MetaState::to_double() const {
  Eigen::VectorXcd out(amplitudes.size());
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) out(i) = nng::to_double(amplitudes(i));
  return out;
}

double MetaState::norm() const {
  Real s = 0;
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) s += abs2(amplitudes(i));
  return static_cast<double>(sqrt(s));
}

InitialState initial_metastate(const EigenSystem& physical, size_t k) {
  const size_t d = physical.dim();
  if (k < 1 || k > d)
    throw std::out_of_range("initial_metastate: selector " + std::to_string(k) +
                            " outside 1.." + std::to_string(d));
  InitialState out;
  out.level_index = d - k;
  out.energy = physical.eigenvalue(out.level_index);
  const auto [first, last] = physical.level_range(out.level_index);
  out.multiplicity = last - first;

  const VectorQ phi = physical.vectors.col(out.level_index);
  out.state.amplitudes.resize(static_cast<Eigen::Index>(d * d));
  for (size_t p = 0; p < d; ++p)
    for (size_t h = 0; h < d; ++h) out.state.amplitudes(p * d + h) = phi(p) * phi(h);

  out.note = "selector k=" + std::to_string(k) + " -> ascending index " +
             std::to_string(out.level_index + 1) + " of " + std::to_string(d);
  if (out.multiplicity > 1)
    out.note += "; level is " + std::to_string(out.multiplicity) +
                "-fold degenerate (indices " + std::to_string(first + 1) + ".." +
                std::to_string(last) +
                "), member chosen by leading-index order within the level";
  return out;
}

Propagator::Propagator(const EigenSystem& eig, const MetaState& psi0, double hbar)
    : hbar_(hbar), dim_(psi0.dim()), t0_(psi0.time) {
  if (psi0.dim() != eig.dim()) throw std::invalid_argument("Propagator: dimension mismatch");
  for (size_t k = 0; k < eig.dim(); ++k) {
    Complex overlap = 0;
    for (size_t r : eig.support[k]) overlap += conj(eig.vectors(r, k)) * psi0.amplitudes(r);
    if (overlap == Complex(0)) continue;
    Mode mode{eig.values(k), overlap, eig.support[k], {}};
    mode.coeffs.reserve(mode.rows.size());
    for (size_t r : mode.rows) mode.coeffs.push_back(eig.vectors(r, k));
    modes_.push_back(std::move(mode));
  }
}

MetaState Propagator::at(double t) const {
  MetaState out;
  out.time = t0_ + t;
  out.amplitudes = VectorQ::Zero(static_cast<Eigen::Index>(dim_));
  const Real two_pi = two_pi_q();
  const Real tq(t);
  for (const auto& mode : modes_) {
    Real phase = mode.energy * tq / hbar_;
    phase -= floor(phase / two_pi) * two_pi;
    const Complex factor = Complex(cos(phase), -sin(phase)) * mode.overlap;
    for (size_t i = 0; i < mode.rows.size(); ++i) out.amplitudes(mode.rows[i]) += factor * mode.coeffs[i];
  }
  return out;
}

MetaState evolve_to(double t, const MetaState& psi0, const EigenSystem& eig, double hbar) {
  return Propagator(eig, psi0, hbar).at(t);
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("DensityMatrix: matrix must be square");
}

double DensityMatrix::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_defect() const { return std::abs(entries_.trace() - 1.0); }

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  const Eigen::MatrixXcd herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

DensityMatrix reduce_physical(const MetaState& psi, const MetaIndexer& indexer) {
  require_dim(psi, indexer);
  const Eigen::MatrixXcd m = reshape(psi.to_double(), indexer.physical_dim());
  return DensityMatrix(m * m.adjoint());
}

DensityMatrix reduce_hidden(const MetaState& psi, const MetaIndexer& indexer) {
  require_dim(psi, indexer);
  const Eigen::MatrixXcd m = reshape(psi.to_double(), indexer.physical_dim());
  return DensityMatrix(m.transpose() * m.conjugate());
}

DensityMatrix reduce_single(const MetaState& psi, const MetaIndexer& indexer) {
  require_dim(psi, indexer);
  const Eigen::MatrixXcd m = reshape(psi.to_double(), indexer.single_dim());
  return DensityMatrix(m * m.adjoint());
}

DensityMatrix trace_to_first(const DensityMatrix& rho, const MetaIndexer& indexer) {
  if (rho.dim() != indexer.physical_dim())
    throw std::invalid_argument("trace_to_first: expected a physical-space density matrix");
  const size_t d = indexer.single_dim();
  const size_t rest = indexer.physical_dim() / d;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k < rest; ++k) out(i, j) += rho.entries()(i * rest + k, j * rest + k);
  return DensityMatrix(out);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd p = rho.eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -1e-8)
      throw InvalidStateError("von_neumann_entropy: eigenvalue " + format_double(p(i)) +
                              " below -1e-8");
    if (p(i) > 0.0) s -= p(i) * std::log(p(i));
  }
  return s;
}

Expectation expectation(const DensityMatrix& rho, const HermitianOperator& h) {
  if (rho.dim() != h.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  const std::complex<double> v = (rho.entries() * h.to_double()).trace();
  return {v.real(), v.imag()};
}

Expectation energy_expectation(const MetaState& psi, const HermitianOperator& h_ph,
                               const MetaIndexer& indexer) {
  return expectation(reduce_physical(psi, indexer), h_ph);
}

Eigen::VectorXd eigenstate_populations(const DensityMatrix& rho, const EigenSystem& physical) {
  if (rho.dim() != physical.dim())
    throw std::invalid_argument("eigenstate_populations: dimension mismatch");
  const Eigen::MatrixXcd v = physical.vectors_double();
  Eigen::VectorXd p(v.cols());
  for (Eigen::Index k = 0; k < v.cols(); ++k)
    p(k) = (v.col(k).adjoint() * rho.entries() * v.col(k))(0, 0).real();
  return p;
}

int meta_total_m(size_t alpha, const SingleParticleBasis& basis, const MetaIndexer& indexer) {
  const size_t d = indexer.physical_dim();
  return total_m(basis, indexer, alpha / d) + total_m(basis, indexer, alpha % d);
}

double weight_outside_m(const MetaState& psi, int m, const SingleParticleBasis& basis,
                        const MetaIndexer& indexer) {
  require_dim(psi, indexer);
  Real w = 0;
  for (size_t a = 0; a < psi.dim(); ++a)
    if (meta_total_m(a, basis, indexer) != m) w += abs2(psi.amplitudes(a));
  return static_cast<double>(w);
}

}  // namespace nng
