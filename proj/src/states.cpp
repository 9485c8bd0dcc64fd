#include "gme/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace gme {

namespace {

std::vector<int> dims_for(int dim) {
  if (dim >= 2 && std::has_single_bit(static_cast<unsigned>(dim)))
    return std::vector<int>(static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(dim))), 2);
  return {dim};
}

void require_qubits(int n, const char* what) {
  if (n < 1 || n > 20) throw std::invalid_argument(std::string(what) + ": qubit count out of range");
}

ComplexMatrix ginibre(int dim, CounterRng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  for (auto& x : g.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = cplx(re, im);
  }
  return g;
}

DensityMatrix normalized_gram(const ComplexMatrix& a, int dim) {
  ComplexMatrix rho = a * adjoint(a);
  const double t = trace(rho).real();
  rho *= cplx(1.0 / t);
  return DensityMatrix(HermitianOperator::hermitized(dims_for(dim), rho));
}

}  // namespace

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const double t = op_.trace();
  if (std::abs(t - 1.0) > 1e-10) throw std::invalid_argument("density matrix trace is " + std::to_string(t) + ", not 1");
  const double lmin = min_eigenvalue(op_);
  if (lmin < -1e-10) throw std::invalid_argument("density matrix has negative eigenvalue " + std::to_string(lmin));
}

DensityMatrix DensityMatrix::from_pure(std::span<const cplx> psi) {
  if (std::abs(norm(psi) - 1.0) > 1e-10) throw std::invalid_argument("state vector is not normalized");
  const int dim = static_cast<int>(psi.size());
  return DensityMatrix(HermitianOperator::hermitized(dims_for(dim), projector(psi)));
}

DensityMatrix DensityMatrix::maximally_mixed(int qubits) {
  require_qubits(qubits, "maximally_mixed");
  const std::size_t d = std::size_t{1} << qubits;
  ComplexMatrix m = ComplexMatrix::identity(d);
  m *= cplx(1.0 / static_cast<double>(d));
  return DensityMatrix(HermitianOperator(std::vector<int>(static_cast<std::size_t>(qubits), 2), std::move(m)));
}

double DensityMatrix::imaginary_part() const {
  double m = 0.0;
  for (const auto& x : op_.matrix().data()) m = std::max(m, std::abs(x.imag()));
  return m;
}

DensityMatrix mixture(std::span<const DensityMatrix> parts, std::span<const double> weights) {
  if (parts.empty() || parts.size() != weights.size()) throw std::invalid_argument("mixture: parts and weights differ in length");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("mixture: weights do not sum to one");
  ComplexMatrix m(parts[0].dim(), parts[0].dim());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].op().dims() != parts[0].op().dims()) throw DimensionError("mixture: dims differ");
    m += parts[k].matrix() * cplx(weights[k]);
  }
  return DensityMatrix(HermitianOperator::hermitized(parts[0].op().dims(), m));
}

// ---------------------------------------------------------------------------

StateVector ghz(int n) {
  if (n < 2) throw std::invalid_argument("ghz: n must be at least 2");
  require_qubits(n, "ghz");
  StateVector v(std::size_t{1} << n);
  v.front() = v.back() = 1.0 / std::sqrt(2.0);
  return v;
}

StateVector dicke(int n, int k) {
  if (n < 2) throw std::invalid_argument("dicke: n must be at least 2");
  require_qubits(n, "dicke");
  if (k < 0 || k > n) throw std::invalid_argument("dicke: excitation number out of range");
  StateVector v(std::size_t{1} << n);
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::popcount(i) == k) ++count;
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::popcount(i) == k) v[i] = amp;
  return v;
}

StateVector w_state(int n) { return dicke(n, 1); }

StateVector singlet4() {
  StateVector v(16);
  const double a = 1.0 / std::sqrt(3.0);
  v[0b0011] = a;
  v[0b1100] = a;
  for (int i : {0b0101, 0b0110, 0b1001, 0b1010}) v[i] = -a / 2.0;
  return v;
}

StateVector basis_state(int n, std::uint64_t index) {
  require_qubits(n, "basis_state");
  StateVector v(std::size_t{1} << n);
  if (index >= v.size()) throw std::invalid_argument("basis_state: index out of range");
  v[index] = 1.0;
  return v;
}

// ---------------------------------------------------------------------------

void GraphSpec::validate() const {
  require_qubits(n, "GraphSpec");
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("graph edge references a missing vertex");
    if (a == b) throw std::invalid_argument("graph has a self-loop");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) throw std::invalid_argument("graph has a repeated edge");
  }
}

std::vector<int> GraphSpec::neighbours(int v) const {
  std::vector<int> out;
  for (auto [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool GraphSpec::adjacent(int a, int b) const {
  return std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

GraphSpec GraphSpec::linear(int n) {
  GraphSpec g{n, {}};
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

std::vector<PauliString> stabilizer_generators(const GraphSpec& g) {
  g.validate();
  std::vector<PauliString> out;
  for (int i = 0; i < g.n; ++i) {
    std::vector<Pauli> letters(static_cast<std::size_t>(g.n), Pauli::I);
    letters[i] = Pauli::X;
    for (int k : g.neighbours(i)) letters[k] = Pauli::Z;
    out.emplace_back(std::move(letters));
  }
  return out;
}

StateVector graph_basis_vector(const GraphSpec& g, std::uint64_t label) {
  g.validate();
  const int n = g.n;
  const std::size_t d = std::size_t{1} << n;
  if (label >= d) throw std::invalid_argument("graph_basis_vector: label out of range");
  const double amp = std::ldexp(1.0, -n) * std::sqrt(static_cast<double>(d));
  StateVector v(d);
  for (std::uint64_t x = 0; x < d; ++x) {
    int parity = std::popcount(x & label);  // Z^a on the label qubits
    for (auto [a, b] : g.edges)
      if ((x & qubit_bit(n, a)) && (x & qubit_bit(n, b))) ++parity;
    v[x] = (parity & 1) ? -amp : amp;
  }
  return v;
}

StateVector graph_basis_vector(const GraphSpec& g, std::span<const int> a) {
  if (static_cast<int>(a.size()) != g.n) throw std::invalid_argument("graph_basis_vector: label length differs from vertex count");
  std::uint64_t label = 0;
  for (int q = 0; q < g.n; ++q) {
    if (a[q] != 0 && a[q] != 1) throw std::invalid_argument("graph_basis_vector: label entries must be 0 or 1");
    if (a[q]) label |= qubit_bit(g.n, q);
  }
  return graph_basis_vector(g, label);
}

ClusterState linear_cluster(int n) {
  if (n < 2) throw std::invalid_argument("linear_cluster: n must be at least 2");
  const GraphSpec g = GraphSpec::linear(n);
  return {graph_basis_vector(g, std::uint64_t{0}), stabilizer_generators(g)};
}

DensityMatrix white_noise_mix(std::span<const cplx> psi, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("white_noise_mix: p must lie in [0, 1]");
  if (std::abs(norm(psi) - 1.0) > 1e-10) throw std::invalid_argument("white_noise_mix: state vector is not normalized");
  const std::size_t d = psi.size();
  ComplexMatrix m = projector(psi);
  m *= cplx(1.0 - p);
  for (std::size_t i = 0; i < d; ++i) m(i, i) += p / static_cast<double>(d);
  return DensityMatrix(HermitianOperator::hermitized(dims_for(static_cast<int>(d)), m));
}

// ---------------------------------------------------------------------------

DensityMatrix random_density_hs(int dim, CounterRng& rng) {
  if (dim < 2) throw std::invalid_argument("random_density_hs: dim must be at least 2");
  return normalized_gram(ginibre(dim, rng), dim);
}

DensityMatrix random_density_hs(int dim, std::uint64_t seed) {
  CounterRng rng(seed);
  return random_density_hs(dim, rng);
}

ComplexMatrix random_unitary(int dim, CounterRng& rng) {
  ComplexMatrix q = ginibre(dim, rng);
  const std::size_t d = q.rows();
  // Modified Gram-Schmidt on columns; R has a positive diagonal by construction.
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      cplx proj{};
      for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, k)) * q(i, j);
      for (std::size_t i = 0; i < d; ++i) q(i, j) -= proj * q(i, k);
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < d; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < d; ++i) q(i, j) /= nrm;
  }
  return q;
}

DensityMatrix random_density_bures(int dim, CounterRng& rng) {
  if (dim < 2) throw std::invalid_argument("random_density_bures: dim must be at least 2");
  const ComplexMatrix u = random_unitary(dim, rng);
  const ComplexMatrix g = ginibre(dim, rng);
  return normalized_gram((ComplexMatrix::identity(static_cast<std::size_t>(dim)) + u) * g, dim);
}

DensityMatrix random_density_bures(int dim, std::uint64_t seed) {
  CounterRng rng(seed);
  return random_density_bures(dim, rng);
}

StateVector random_pure_state(int dim, CounterRng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector v(static_cast<std::size_t>(dim));
  for (auto& x : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    x = cplx(re, im);
  }
  const double nv = norm(v);
  for (auto& x : v) x /= nv;
  return v;
}

const std::vector<std::string>& named_states() {
  static const std::vector<std::string> names{"ghz3", "ghz4", "w3", "w4", "cl4", "dicke24", "singlet4"};
  return names;
}

StateVector named_state(const std::string& name) {
  if (name == "ghz3") return ghz(3);
  if (name == "ghz4") return ghz(4);
  if (name == "w3") return w_state(3);
  if (name == "w4") return w_state(4);
  if (name == "cl4") return linear_cluster(4).psi;
  if (name == "dicke24") return dicke(4, 2);
  if (name == "singlet4") return singlet4();
  throw std::invalid_argument("unknown state '" + name + "'");
}

}  // namespace gme
