#include <doctest.h>

#include <numeric>

#include "gme/linalg.hpp"
#include "oracle.hpp"

using namespace gme;

TEST_CASE("kron and matrix product agree with the index definitions") {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = oracle::random_hermitian(2, rng);
  const ComplexMatrix b = oracle::random_hermitian(3, rng);
  CHECK(max_abs_diff(kron(a, b), oracle::kron2(a, b)) < 1e-15);
  const ComplexMatrix c = oracle::random_hermitian(6, rng);
  const ComplexMatrix d = oracle::random_hermitian(6, rng);
  CHECK(max_abs_diff(c * d, oracle::matmul(c, d)) < 1e-12);
  CHECK(std::abs(trace_product_real(c, d) - oracle::tr(oracle::matmul(c, d)).real()) < 1e-12);
}

TEST_CASE("partial transpose matches the bit-swap oracle on every qubit subset") {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 4; ++n) {
    const ComplexMatrix a = oracle::random_hermitian(std::size_t{1} << n, rng);
    const std::vector<int> dims(static_cast<std::size_t>(n), 2);
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      const Bipartition m = Bipartition::from_mask(n, mask);
      CHECK(max_abs_diff(partial_transpose(a, dims, m), oracle::partial_transpose(a, n, mask)) < 1e-15);
    }
  }
}

TEST_CASE("partial transpose is an involution and composes by symmetric difference") {
  std::mt19937_64 rng(3);
  const int n = 4;
  const std::vector<int> dims(4, 2);
  const ComplexMatrix a = oracle::random_hermitian(16, rng);
  for (std::uint64_t m1 = 1; m1 < 15; ++m1) {
    const Bipartition b1 = Bipartition::from_mask(n, m1);
    CHECK(max_abs_diff(partial_transpose(partial_transpose(a, dims, b1), dims, b1), a) < 1e-15);
    for (std::uint64_t m2 = 1; m2 < 15; ++m2) {
      const Bipartition b2 = Bipartition::from_mask(n, m2);
      const ComplexMatrix both = partial_transpose(partial_transpose(a, dims, b1), dims, b2);
      const ComplexMatrix swapped = partial_transpose(partial_transpose(a, dims, b2), dims, b1);
      CHECK(max_abs_diff(both, swapped) < 1e-15);
      const std::uint64_t x = m1 ^ m2;
      const ComplexMatrix direct = x == 0 ? a : oracle::partial_transpose(a, n, x);
      CHECK(max_abs_diff(both, direct) < 1e-15);
    }
  }
}

TEST_CASE("partial transpose on mixed dimensions equals (T x 1) of a product") {
  std::mt19937_64 rng(4);
  const ComplexMatrix a = oracle::random_hermitian(2, rng);
  const ComplexMatrix b = oracle::random_hermitian(3, rng);
  const std::vector<int> dims{2, 3};
  const ComplexMatrix pt = partial_transpose(kron(a, b), dims, Bipartition(2, {0}));
  CHECK(max_abs_diff(pt, kron(a.transpose(), b)) < 1e-15);
  const ComplexMatrix pt2 = partial_transpose(kron(a, b), dims, Bipartition(2, {1}));
  CHECK(max_abs_diff(pt2, kron(a, b.transpose())) < 1e-15);
}

TEST_CASE("partial trace of a product keeps the selected factor") {
  std::mt19937_64 rng(5);
  ComplexMatrix a = oracle::random_density(2, rng);
  ComplexMatrix b = oracle::random_density(4, rng);
  const HermitianOperator ab({2, 2, 2}, hermitian_part(kron(a, b)));
  const std::vector<int> keep0{0};
  CHECK(max_abs_diff(partial_trace(ab, keep0).matrix(), a) < 1e-14);
  const std::vector<int> keep12{1, 2};
  CHECK(max_abs_diff(partial_trace(ab, keep12).matrix(), b) < 1e-14);
}

TEST_CASE("permute_parties swaps tensor factors") {
  std::mt19937_64 rng(6);
  const ComplexMatrix a = oracle::random_hermitian(2, rng);
  const ComplexMatrix b = oracle::random_hermitian(4, rng);
  const HermitianOperator ab({2, 4}, kron(a, b));
  const std::vector<int> perm{1, 0};
  const HermitianOperator ba = permute_parties(ab, perm);
  CHECK(ba.dims() == std::vector<int>{4, 2});
  CHECK(max_abs_diff(ba.matrix(), kron(b, a)) < 1e-15);
}

TEST_CASE("Hermitian eigendecomposition reconstructs the matrix") {
  std::mt19937_64 rng(7);
  for (std::size_t d : {1u, 2u, 5u, 16u, 32u}) {
    const ComplexMatrix a = oracle::random_hermitian(d, rng);
    const EigenDecomposition e = hermitian_eigen(a);
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    ComplexMatrix lam(d, d);
    for (std::size_t i = 0; i < d; ++i) lam(i, i) = e.values[i];
    const ComplexMatrix rec = oracle::matmul(oracle::matmul(e.vectors, lam), oracle::dagger(e.vectors));
    CHECK(oracle::maxdiff(rec, a) < 1e-11);
    const ComplexMatrix gram = oracle::matmul(oracle::dagger(e.vectors), e.vectors);
    CHECK(oracle::maxdiff(gram, ComplexMatrix::identity(d)) < 1e-12);
    double s = 0.0;
    for (double v : e.values) s += v;
    CHECK(std::abs(s - oracle::tr(a).real()) < 1e-10);
  }
}

TEST_CASE("eigenvalues of Pauli-type 2x2 matrices") {
  const ComplexMatrix y = oracle::pauli2('Y');
  const auto ev = hermitian_eigenvalues(y);
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermitian_eigen(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), std::invalid_argument);
}

TEST_CASE("real symmetric eigensolver") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  RealMatrix a(12, 12);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = i; j < 12; ++j) a(i, j) = a(j, i) = g(rng);
  const RealEigenDecomposition e = symmetric_eigen(a);
  for (std::size_t k = 0; k < 12; ++k) {
    double res = 0.0;
    for (std::size_t i = 0; i < 12; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 12; ++j) s += a(i, j) * e.vectors(j, k);
      res = std::max(res, std::abs(s - e.values[k] * e.vectors(i, k)));
    }
    CHECK(res < 1e-11);
  }
  const auto values_only = symmetric_eigen(a, false).values;
  for (std::size_t k = 0; k < 12; ++k) CHECK(values_only[k] == doctest::Approx(e.values[k]).epsilon(1e-12));
}

TEST_CASE("Schmidt coefficients") {
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector bell{h, 0.0, 0.0, h};
  const auto s = schmidt_coefficients(bell, Bipartition(2, {0}));
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(h).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(h).epsilon(1e-14));
  const StateVector product{0.6, 0.8, 0.0, 0.0};
  const auto p = schmidt_coefficients(product, Bipartition(2, {1}));
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(p[1]) < 1e-7);

  std::mt19937_64 rng(9);
  const StateVector psi = oracle::random_vector(16, rng);
  const auto c = schmidt_coefficients(psi, Bipartition(4, {0}));
  CHECK(c.size() == 2);
  double sum = 0.0;
  for (double x : c) sum += x * x;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::is_sorted(c.rbegin(), c.rend()));
}

TEST_CASE("bipartition enumeration and canonical form") {
  for (int n = 2; n <= 6; ++n) {
    const auto canon = canonical_bipartitions(n);
    CHECK(canon.size() == (std::size_t{1} << (n - 1)) - 1);
    for (const auto& m : canon) CHECK(m.is_canonical());
    CHECK(all_bipartitions(n).size() == (std::size_t{1} << n) - 2);
  }
  const Bipartition m(4, {1, 2});
  CHECK(!m.is_canonical());
  CHECK(m.canonical() == Bipartition(4, {0, 3}));
  CHECK(m.complement().complement() == m);
  CHECK_THROWS(Bipartition(3, {}));
  CHECK_THROWS(Bipartition(3, {0, 1, 2}));
  CHECK_THROWS(Bipartition(3, {3}));
}

TEST_CASE("HermitianOperator validation") {
  CHECK_THROWS_AS(HermitianOperator({2}, ComplexMatrix(3, 3)), DimensionError);
  CHECK_THROWS_AS(HermitianOperator({2}, ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), std::invalid_argument);
  const HermitianOperator h = HermitianOperator::qubits(oracle::pauli("XZ"));
  CHECK(h.parties() == 2);
  CHECK(h.all_qubits());
  CHECK(std::abs(h.trace()) < 1e-15);
}
