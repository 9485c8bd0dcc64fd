#include <doctest.h>

#include <algorithm>
#include <set>

#include "gme/pauli.hpp"
#include "oracle.hpp"

using namespace gme;

TEST_CASE("Pauli string matrices match the Kronecker chain") {
  for (const auto& s : all_pauli_strings(3)) {
    CHECK(max_abs_diff(pauli_matrix(s), oracle::pauli(s.label())) < 1e-15);
  }
  CHECK(max_abs_diff(pauli_matrix(PauliString::parse("IIII")), ComplexMatrix::identity(16)) == 0.0);
  const ComplexMatrix zz = pauli_matrix(PauliString::parse("ZZ"));
  for (std::size_t i = 0; i < 4; ++i) CHECK(zz(i, i).real() == (i == 0 || i == 3 ? 1.0 : -1.0));
  const ComplexMatrix m = pauli_matrix(PauliString::parse("XYZX"));
  CHECK(std::abs(oracle::tr(oracle::matmul(m, m)) - cplx(16.0)) < 1e-12);
}

TEST_CASE("XZ equals the hand-expanded 4x4 matrix") {
  // X (x) Z = [[0, Z], [Z, 0]]
  ComplexMatrix expect(4, 4);
  expect(0, 2) = 1.0;
  expect(1, 3) = -1.0;
  expect(2, 0) = 1.0;
  expect(3, 1) = -1.0;
  CHECK(max_abs_diff(pauli_matrix(PauliString::parse("XZ")), expect) == 0.0);
}

TEST_CASE("mask entries reproduce each row of the dense matrix") {
  for (const auto& s : all_pauli_strings(3)) {
    const PauliMask mk = s.mask();
    const ComplexMatrix m = oracle::pauli(s.label());
    for (std::uint64_t r = 0; r < 8; ++r) CHECK(std::abs(m(r, r ^ mk.x) - mk.entry(r)) < 1e-15);
  }
}

TEST_CASE("products carry the letter phases") {
  std::mt19937_64 rng(11);
  const auto all = all_pauli_strings(3);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int t = 0; t < 40; ++t) {
    const PauliString a = all[pick(rng)];
    const PauliString b = all[pick(rng)];
    const PauliString ab = a * b;
    CHECK(max_abs_diff(pauli_matrix(ab), oracle::matmul(oracle::pauli(a.label()), oracle::pauli(b.label()))) < 1e-14);
  }
}

TEST_CASE("parse rejects foreign letters and pauli_string_matrix rejects complex coefficients") {
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(pauli_string_matrix(PauliString::parse("XY", cplx(0.0, 1.0))), std::invalid_argument);
  const PauliString s = PauliString::parse("XIYZ", 2.0);
  CHECK(s.label() == "XIYZ");
  CHECK(s.weight() == 3);
  CHECK(s.count(Pauli::Y) == 1);
}

TEST_CASE("partial transpose flips the sign of strings with an odd Y count in M") {
  for (const auto& s : all_pauli_strings(3)) {
    for (const auto& m : all_bipartitions(3)) {
      const HermitianOperator op = pauli_string_matrix(s);
      const double sign = s.y_count_in(m) % 2 == 0 ? 1.0 : -1.0;
      ComplexMatrix expect = op.matrix();
      for (auto& x : expect.data()) x *= sign;
      CHECK(max_abs_diff(partial_transpose(op, m).matrix(), expect) < 1e-15);
    }
  }
}

TEST_CASE("Pauli expansion round trip and trace formula") {
  std::mt19937_64 rng(12);
  const ComplexMatrix a = oracle::random_hermitian(8, rng);
  const PauliSum sum = pauli_expansion(HermitianOperator::qubits(a), 0.0);
  CHECK(max_abs_diff(sum.matrix(), a) < 1e-13);
  for (const auto& [label, c] : sum.terms()) {
    const cplx t = oracle::tr(oracle::matmul(oracle::pauli(label), a));
    CHECK(std::abs(t.real() / 8.0 - c) < 1e-13);
    CHECK(std::abs(pauli_trace(PauliString::parse(label), a) - t) < 1e-12);
  }
}

TEST_CASE("PauliSum algebra") {
  PauliSum a(2);
  a.add("XI", 1.0);
  a.add("IZ", 0.5);
  PauliSum b(2);
  b.add("XI", -1.0);
  b.add("XZ", 2.0);
  CHECK(max_abs_diff((a + b).matrix(), a.matrix() + b.matrix()) < 1e-15);
  CHECK(max_abs_diff((a * b).matrix(), a.matrix() * b.matrix()) < 1e-14);
  PauliSum c = a + b;
  c.prune(1e-12);
  CHECK(c.coefficient("XI") == 0.0);
  CHECK(c.size() == 2);
  PauliSum z(2);
  z.add("ZZ", 1.0);
  CHECK_THROWS(a * z);
}

TEST_CASE("identity closure and permutations") {
  const auto closure = identity_closure(PauliString::parse("XXXX"));
  CHECK(closure.size() == 16);
  std::set<std::string> labels;
  for (const auto& s : closure) labels.insert(s.label());
  CHECK(labels.count("IIII") == 1);
  const auto c2 = identity_closure(PauliString::parse("XXYY"));
  CHECK(std::any_of(c2.begin(), c2.end(), [](const PauliString& s) { return s.label() == "XXII"; }));
  const auto perms = distinct_permutations(PauliString::parse("XXYY"));
  CHECK(perms.size() == 6);
  CHECK(std::is_sorted(perms.begin(), perms.end(),
                       [](const PauliString& x, const PauliString& y) { return x.label() < y.label(); }));
  const std::vector<int> perm{2, 0, 3, 1};
  CHECK(permute_letters(PauliString::parse("XYZI"), perm).label() == "ZXIY");
}
