#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gme/linalg.hpp"
#include "gme/pauli.hpp"
#include "gme/rng.hpp"

namespace gme {

/// Trace one and positive semidefinite, both within 1e-10.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Validates; throws std::invalid_argument when trace or spectrum is off.
  explicit DensityMatrix(HermitianOperator op);
  static DensityMatrix from_pure(std::span<const cplx> psi);
  static DensityMatrix maximally_mixed(int qubits);

  const HermitianOperator& op() const noexcept { return op_; }
  const ComplexMatrix& matrix() const noexcept { return op_.matrix(); }
  std::size_t dim() const noexcept { return op_.dim(); }
  int parties() const noexcept { return op_.parties(); }
  /// max |Im rho_ij|
  double imaginary_part() const;

 private:
  HermitianOperator op_;
};

/// Convex combination; weights must be nonnegative and sum to one.
DensityMatrix mixture(std::span<const DensityMatrix> parts, std::span<const double> weights);

StateVector ghz(int n);
StateVector w_state(int n);
StateVector dicke(int n, int k);
/// (|0011> + |1100> - (|0101> + |0110> + |1001> + |1010>)/2) / sqrt(3)
StateVector singlet4();
StateVector basis_state(int n, std::uint64_t index);

/// ghz3, ghz4, w3, w4, cl4, dicke24, singlet4. Throws std::invalid_argument otherwise.
StateVector named_state(const std::string& name);
const std::vector<std::string>& named_states();

struct GraphSpec {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  /// Throws std::invalid_argument on self-loops, out-of-range or repeated edges.
  void validate() const;
  std::vector<int> neighbours(int v) const;
  bool adjacent(int a, int b) const;
  static GraphSpec linear(int n);
};

/// g_i = X_i prod_{k in N(i)} Z_k for every vertex.
std::vector<PauliString> stabilizer_generators(const GraphSpec& g);
/// Joint eigenvector with g_i v = (-1)^{a_i} v; a[i] is the label bit of vertex i.
StateVector graph_basis_vector(const GraphSpec& g, std::span<const int> a);
StateVector graph_basis_vector(const GraphSpec& g, std::uint64_t label_mask);
/// Label bit of qubit q inside a mask, q = 0 is the most significant bit.
inline int label_bit(int n, std::uint64_t label, int q) { return (label & qubit_bit(n, q)) ? 1 : 0; }

struct ClusterState {
  StateVector psi;
  std::vector<PauliString> generators;
};

/// g_1 = X_1 Z_2, g_i = Z_{i-1} X_i Z_{i+1}, g_n = Z_{n-1} X_n and the common +1 eigenvector.
ClusterState linear_cluster(int n);

/// (1 - p) |psi><psi| + p 1/D
DensityMatrix white_noise_mix(std::span<const cplx> psi, double p);

/// G G^dag / tr with G a dim x dim complex Ginibre matrix.
DensityMatrix random_density_hs(int dim, std::uint64_t seed);
DensityMatrix random_density_hs(int dim, CounterRng& rng);
/// (1 + U) G G^dag (1 + U)^dag / tr with U Haar distributed.
DensityMatrix random_density_bures(int dim, std::uint64_t seed);
DensityMatrix random_density_bures(int dim, CounterRng& rng);
/// Haar unitary from a Gram-Schmidt QR of a Ginibre matrix.
ComplexMatrix random_unitary(int dim, CounterRng& rng);
StateVector random_pure_state(int dim, CounterRng& rng);

}  // namespace gme
