#pragma once

// Dense complex linear algebra on tensor-product Hilbert spaces.
//
// Conventions used throughout the library:
//   * matrices are row-major;
//   * party 0 is the leftmost tensor factor, i.e. for qubits it is the most
//     significant bit of a computational-basis index;
//   * tolerances are absolute-plus-relative, tol * (1 + max|A_ij|).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gme {

using cplx = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::initializer_list<T> values);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  T* row(std::size_t r) noexcept { return data_.data() + r * cols_; }
  const T* row(std::size_t r) const noexcept { return data_.data() + r * cols_; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(T scalar);

  DenseMatrix transpose() const;
  double max_abs() const;

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, T s) { return a *= s; }
  friend DenseMatrix operator*(T s, DenseMatrix a) { return a *= s; }
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = DenseMatrix<cplx>;
using RealMatrix = DenseMatrix<double>;
using StateVector = std::vector<cplx>;

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
cplx trace(const ComplexMatrix& a);
/// Re tr(A B) without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
/// max |A_ij - conj(A_ji)|
double hermiticity_defect(const ComplexMatrix& a);
ComplexMatrix hermitian_part(const ComplexMatrix& a);
ComplexMatrix to_complex(const RealMatrix& a);

double norm(std::span<const cplx> v);
/// <a|b>
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
ComplexMatrix projector(std::span<const cplx> v);
StateVector apply(const ComplexMatrix& a, std::span<const cplx> v);

/// Bit of a computational-basis index that carries qubit q (qubit 0 is the MSB).
constexpr std::uint64_t qubit_bit(int n, int q) noexcept { return std::uint64_t{1} << (n - 1 - q); }

class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Throws DimensionError on shape mismatch and std::invalid_argument when
  /// the Hermiticity defect exceeds 1e-12 * (1 + max|A|).
  HermitianOperator(std::vector<int> dims, ComplexMatrix matrix);

  static HermitianOperator qubits(ComplexMatrix matrix);
  /// Replaces the matrix by its Hermitian part; for results carrying rounding noise.
  static HermitianOperator hermitized(std::vector<int> dims, const ComplexMatrix& matrix);

  const std::vector<int>& dims() const noexcept { return dims_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  int parties() const noexcept { return static_cast<int>(dims_.size()); }
  bool all_qubits() const noexcept;
  double trace() const;

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  std::vector<int> dims_;
  ComplexMatrix matrix_;
};

/// tr(A B) for Hermitian A, B.
double trace_product(const HermitianOperator& a, const HermitianOperator& b);
/// <psi|A|psi>
double expectation(const HermitianOperator& a, std::span<const cplx> psi);

/// A subset M of the parties 0..n-1 together with its complement.
class Bipartition {
 public:
  /// members must form a strict, nonempty subset of {0..n-1}.
  Bipartition(int n, std::vector<int> members);
  static Bipartition from_mask(int n, std::uint64_t mask);

  int parties() const noexcept { return n_; }
  const std::vector<int>& members() const noexcept { return members_; }
  /// bit q set <=> party q in M (independent of the basis-index convention)
  std::uint64_t mask() const noexcept { return mask_; }
  bool contains(int q) const noexcept { return (mask_ >> q) & 1U; }

  /// The representative of {M, complement(M)} that contains party 0.
  bool is_canonical() const noexcept { return contains(0); }
  Bipartition canonical() const { return is_canonical() ? *this : complement(); }
  Bipartition complement() const;

  std::string to_string() const;
  friend bool operator==(const Bipartition& a, const Bipartition& b) noexcept {
    return a.n_ == b.n_ && a.mask_ == b.mask_;
  }

 private:
  int n_ = 0;
  std::vector<int> members_;
  std::uint64_t mask_ = 0;
};

/// The 2^(n-1) - 1 bipartitions whose M contains party 0.
std::vector<Bipartition> canonical_bipartitions(int n);
/// All 2^n - 2 proper subsets.
std::vector<Bipartition> all_bipartitions(int n);

ComplexMatrix partial_transpose(const ComplexMatrix& a, std::span<const int> dims, const Bipartition& m);
HermitianOperator partial_transpose(const HermitianOperator& op, const Bipartition& m);
HermitianOperator partial_trace(const HermitianOperator& op, std::span<const int> keep);
/// Reorders tensor factors: output factor k is input factor perm[k].
HermitianOperator permute_parties(const HermitianOperator& op, std::span<const int> perm);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // orthonormal columns
};

struct RealEigenDecomposition {
  std::vector<double> values;  // ascending
  RealMatrix vectors;
};

/// Cyclic complex Jacobi. Throws std::invalid_argument for non-Hermitian input.
EigenDecomposition hermitian_eigen(const HermitianOperator& h);
EigenDecomposition hermitian_eigen(const ComplexMatrix& h);
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);
double min_eigenvalue(const HermitianOperator& h);
double min_eigenvalue(const ComplexMatrix& h);

/// Cyclic real Jacobi for symmetric matrices.
RealEigenDecomposition symmetric_eigen(const RealMatrix& a, bool want_vectors = true);

/// Schmidt coefficients of a normalized qubit state across M|complement(M),
/// descending, min(dim M, dim complement) entries.
std::vector<double> schmidt_coefficients(std::span<const cplx> psi, const Bipartition& m);

}  // namespace gme
