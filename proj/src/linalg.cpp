#include "gme/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gme {

namespace {

double abs_value(double x) { return std::abs(x); }
double abs_value(cplx x) { return std::abs(x); }

std::size_t product(std::span<const int> dims) {
  std::size_t d = 1;
  for (int k : dims) {
    if (k < 1) throw DimensionError("local dimensions must be positive");
    d *= static_cast<std::size_t>(k);
  }
  return d;
}

std::vector<std::size_t> strides(std::span<const int> dims) {
  std::vector<std::size_t> s(dims.size());
  std::size_t acc = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    s[k] = acc;
    acc *= static_cast<std::size_t>(dims[k]);
  }
  return s;
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.square()) throw DimensionError(std::string(what) + ": matrix is not square");
}

}  // namespace

template <typename T>
DenseMatrix<T>::DenseMatrix(std::size_t rows, std::size_t cols, std::initializer_list<T> values)
    : rows_(rows), cols_(cols), data_(values) {
  if (data_.size() != rows * cols) throw DimensionError("initializer size does not match shape");
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
  return m;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator-=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

template <typename T>
DenseMatrix<T>& DenseMatrix<T>::operator*=(T scalar) {
  for (auto& x : data_) x *= scalar;
  return *this;
}

template <typename T>
DenseMatrix<T> DenseMatrix<T>::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <typename T>
double DenseMatrix<T>::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, abs_value(x));
  return m;
}

template class DenseMatrix<cplx>;
template class DenseMatrix<double>;

namespace {

template <typename T>
DenseMatrix<T> multiply(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
  DenseMatrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T* ci = c.row(i);
    const T* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = ai[k];
      if (aik == T{}) continue;
      const T* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

}  // namespace

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return multiply(a, b); }
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) { return multiply(a, b); }

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
  return t;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix c = a;
  for (auto& x : c.data()) x = std::conj(x);
  return c;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

cplx trace(const ComplexMatrix& a) {
  require_square(a, "trace");
  cplx t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) throw DimensionError("trace product: shape mismatch");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) t += (a(i, k) * b(k, i)).real();
  return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  require_square(a, "hermitian_part");
  ComplexMatrix h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    h(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) c.data()[i] = a.data()[i];
  return c;
}

double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DimensionError("inner product: length mismatch");
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexMatrix projector(std::span<const cplx> v) {
  ComplexMatrix p(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) p(i, j) = v[i] * std::conj(v[j]);
  return p;
}

StateVector apply(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) throw DimensionError("apply: length mismatch");
  StateVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    const cplx* ai = a.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) s += ai[j] * v[j];
    out[i] = s;
  }
  return out;
}

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(std::vector<int> dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  require_square(matrix_, "HermitianOperator");
  if (product(dims_) != matrix_.rows())
    throw DimensionError("HermitianOperator: product of local dimensions does not match matrix size");
  const double defect = hermiticity_defect(matrix_);
  if (defect > 1e-12 * (1.0 + matrix_.max_abs()))
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
}

HermitianOperator HermitianOperator::qubits(ComplexMatrix matrix) {
  const std::size_t d = matrix.rows();
  if (d == 0 || !std::has_single_bit(d)) throw DimensionError("qubit operator size must be a power of two");
  const int n = std::countr_zero(d);
  return HermitianOperator(std::vector<int>(static_cast<std::size_t>(n), 2), std::move(matrix));
}

HermitianOperator HermitianOperator::hermitized(std::vector<int> dims, const ComplexMatrix& matrix) {
  return HermitianOperator(std::move(dims), hermitian_part(matrix));
}

bool HermitianOperator::all_qubits() const noexcept {
  return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 2; });
}

double HermitianOperator::trace() const { return gme::trace(matrix_).real(); }

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dims_ != b.dims_) throw DimensionError("operator sum: dims differ");
  return HermitianOperator::hermitized(a.dims_, a.matrix_ + b.matrix_);
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dims_ != b.dims_) throw DimensionError("operator difference: dims differ");
  return HermitianOperator::hermitized(a.dims_, a.matrix_ - b.matrix_);
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(a.dims_, a.matrix_ * cplx{s});
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  return trace_product_real(a.matrix(), b.matrix());
}

double expectation(const HermitianOperator& a, std::span<const cplx> psi) {
  return inner(psi, apply(a.matrix(), psi)).real();
}

// ---------------------------------------------------------------------------

Bipartition::Bipartition(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
  if (n < 2 || n > 62) throw DimensionError("bipartition: party count must be in [2, 62]");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (int q : members_) {
    if (q < 0 || q >= n) throw DimensionError("bipartition: member out of range");
    mask_ |= std::uint64_t{1} << q;
  }
  if (members_.empty() || static_cast<int>(members_.size()) == n)
    throw std::invalid_argument("bipartition: M must be a strict nonempty subset");
}

Bipartition Bipartition::from_mask(int n, std::uint64_t mask) {
  std::vector<int> members;
  for (int q = 0; q < n; ++q)
    if ((mask >> q) & 1U) members.push_back(q);
  return Bipartition(n, std::move(members));
}

Bipartition Bipartition::complement() const {
  const std::uint64_t full = (n_ == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1);
  return from_mask(n_, full & ~mask_);
}

std::string Bipartition::to_string() const {
  std::ostringstream os;
  auto put = [&os](const std::vector<int>& v) {
    os << '{';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '}';
  };
  put(members_);
  os << '|';
  put(complement().members());
  return os.str();
}

std::vector<Bipartition> canonical_bipartitions(int n) {
  std::vector<Bipartition> out;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; mask += 2) out.push_back(Bipartition::from_mask(n, mask));
  return out;
}

std::vector<Bipartition> all_bipartitions(int n) {
  std::vector<Bipartition> out;
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) out.push_back(Bipartition::from_mask(n, mask));
  return out;
}

// ---------------------------------------------------------------------------

ComplexMatrix partial_transpose(const ComplexMatrix& a, std::span<const int> dims, const Bipartition& m) {
  require_square(a, "partial_transpose");
  if (static_cast<int>(dims.size()) != m.parties() || product(dims) != a.rows())
    throw DimensionError("partial_transpose: dims inconsistent with bipartition or matrix");
  const std::size_t d = a.rows();
  ComplexMatrix out(d, d);
  const bool qubits = std::all_of(dims.begin(), dims.end(), [](int k) { return k == 2; });
  if (qubits) {
    const int n = m.parties();
    std::uint64_t bits = 0;
    for (int q : m.members()) bits |= qubit_bit(n, q);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t ii = (i & ~bits) | (j & bits);
        const std::size_t jj = (j & ~bits) | (i & bits);
        out(ii, jj) = a(i, j);
      }
    return out;
  }
  const auto s = strides(dims);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::size_t ii = i, jj = j;
      for (int k : m.members()) {
        const std::size_t di = (i / s[k]) % dims[k];
        const std::size_t dj = (j / s[k]) % dims[k];
        ii = ii - di * s[k] + dj * s[k];
        jj = jj - dj * s[k] + di * s[k];
      }
      out(ii, jj) = a(i, j);
    }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& op, const Bipartition& m) {
  return HermitianOperator(op.dims(), partial_transpose(op.matrix(), op.dims(), m));
}

HermitianOperator partial_trace(const HermitianOperator& op, std::span<const int> keep) {
  const auto& dims = op.dims();
  const int n = op.parties();
  std::vector<char> kept(static_cast<std::size_t>(n), 0);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: index out of range");
    if (kept[k]) throw DimensionError("partial_trace: duplicate index");
    kept[k] = 1;
  }
  std::vector<int> kept_list;
  std::vector<int> out_dims;
  for (int k = 0; k < n; ++k)
    if (kept[k]) {
      kept_list.push_back(k);
      out_dims.push_back(dims[k]);
    }
  const auto s = strides(dims);
  const auto so = strides(out_dims);
  const std::size_t d = op.dim();
  std::size_t dout = 1;
  for (int k : out_dims) dout *= static_cast<std::size_t>(k);

  auto reduced_index = [&](std::size_t i) {
    std::size_t r = 0;
    for (std::size_t t = 0; t < kept_list.size(); ++t) r += ((i / s[kept_list[t]]) % dims[kept_list[t]]) * so[t];
    return r;
  };
  auto traced_key = [&](std::size_t i) {
    std::size_t r = i;
    for (int k : kept_list) r -= ((i / s[k]) % dims[k]) * s[k];
    return r;
  };

  ComplexMatrix out(dout, dout);
  const auto& a = op.matrix();
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t ki = traced_key(i);
    const std::size_t ri = reduced_index(i);
    for (std::size_t j = 0; j < d; ++j)
      if (traced_key(j) == ki) out(ri, reduced_index(j)) += a(i, j);
  }
  return HermitianOperator::hermitized(out_dims, out);
}

HermitianOperator permute_parties(const HermitianOperator& op, std::span<const int> perm) {
  const int n = op.parties();
  if (static_cast<int>(perm.size()) != n) throw DimensionError("permute_parties: permutation length mismatch");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]++) throw std::invalid_argument("permute_parties: not a permutation");
  }
  const auto& dims = op.dims();
  std::vector<int> out_dims(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out_dims[k] = dims[perm[k]];
  const auto s = strides(dims);
  const auto so = strides(out_dims);
  const std::size_t d = op.dim();
  std::vector<std::size_t> map(d);
  for (std::size_t i = 0; i < d; ++i) {
    std::size_t r = 0;
    for (int k = 0; k < n; ++k) r += ((i / s[perm[k]]) % dims[perm[k]]) * so[k];
    map[i] = r;
  }
  ComplexMatrix out(d, d);
  const auto& a = op.matrix();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(map[i], map[j]) = a(i, j);
  return HermitianOperator(out_dims, std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(2.0 * s);
}

double frobenius(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

template <typename Values, typename Vectors>
void sort_ascending(Values& values, Vectors& vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Values v2(n);
  Vectors w2(vectors.rows(), vectors.cols());
  for (std::size_t k = 0; k < n; ++k) {
    v2[k] = values[order[k]];
    if (!vectors.empty())
      for (std::size_t r = 0; r < vectors.rows(); ++r) w2(r, k) = vectors(r, order[k]);
  }
  values = std::move(v2);
  if (!vectors.empty()) vectors = std::move(w2);
}

}  // namespace

EigenDecomposition hermitian_eigen(const ComplexMatrix& h) {
  require_square(h, "hermitian_eigen");
  const double scale = h.max_abs();
  if (hermiticity_defect(h) > 1e-12 * (1.0 + scale))
    throw std::invalid_argument("hermitian_eigen: input is not Hermitian");
  const std::size_t n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double total = frobenius(a);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= eps * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal at working precision.
        if (sweep > 3 && mag < eps * 1e-2 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const cplx phase = apq / mag;  // e^{i phi}
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sph = s * std::conj(phase);  // s e^{-i phi}
        // A <- A J, J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] in the (p, q) plane.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - sph * akq;
          a(k, q) = s * akp + c * std::conj(phase) * akq;
        }
        // A <- J^dag A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp - sph * vkq;
          v(k, q) = s * vkp + c * std::conj(phase) * vkq;
        }
      }
    }
  }
  EigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i).real();
  out.vectors = std::move(v);
  sort_ascending(out.values, out.vectors);
  return out;
}

EigenDecomposition hermitian_eigen(const HermitianOperator& h) { return hermitian_eigen(h.matrix()); }

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) { return hermitian_eigen(h).values; }

double min_eigenvalue(const ComplexMatrix& h) {
  if (h.rows() == 0) return 0.0;
  return hermitian_eigenvalues(h).front();
}

double min_eigenvalue(const HermitianOperator& h) { return min_eigenvalue(h.matrix()); }

RealEigenDecomposition symmetric_eigen(const RealMatrix& input, bool want_vectors) {
  if (!input.square()) throw DimensionError("symmetric_eigen: matrix is not square");
  const std::size_t n = input.rows();
  RealMatrix a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = m;
      a(j, i) = m;
    }
  RealMatrix v = want_vectors ? RealMatrix::identity(n) : RealMatrix();
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  total = std::sqrt(total);
  const double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= eps * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (sweep > 3 && std::abs(apq) < eps * 1e-2 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        if (want_vectors)
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
      }
    }
  }
  RealEigenDecomposition out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i);
  out.vectors = std::move(v);
  sort_ascending(out.values, out.vectors);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> schmidt_coefficients(std::span<const cplx> psi, const Bipartition& m) {
  const int n = m.parties();
  if (psi.size() != (std::size_t{1} << n)) throw DimensionError("schmidt_coefficients: state length is not 2^n");
  if (std::abs(norm(psi) - 1.0) > 1e-10) throw std::invalid_argument("schmidt_coefficients: state is not normalized");

  const auto& inside = m.members();
  const auto outside = m.complement().members();
  const std::size_t da = std::size_t{1} << inside.size();
  const std::size_t db = std::size_t{1} << outside.size();
  // Amplitude matrix A[a][b]; the smaller Gram matrix carries the spectrum.
  ComplexMatrix amp(da, db);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    std::size_t a = 0, b = 0;
    for (int q : inside) a = (a << 1) | ((i & qubit_bit(n, q)) ? 1U : 0U);
    for (int q : outside) b = (b << 1) | ((i & qubit_bit(n, q)) ? 1U : 0U);
    amp(a, b) = psi[i];
  }
  const ComplexMatrix gram = (da <= db) ? amp * adjoint(amp) : adjoint(amp) * amp;
  auto values = hermitian_eigenvalues(hermitian_part(gram));
  std::vector<double> coeffs;
  coeffs.reserve(values.size());
  for (auto it = values.rbegin(); it != values.rend(); ++it) coeffs.push_back(std::sqrt(std::max(0.0, *it)));
  return coeffs;
}

}  // namespace gme
