#include <doctest.h>

#include <algorithm>

#include "gme/cluster.hpp"
#include "oracle.hpp"

using namespace gme;

namespace {

std::uint64_t mask_of(const Bipartition& m) {
  std::uint64_t mask = 0;
  for (int q : m.members()) mask |= std::uint64_t{1} << q;
  return mask;
}

// Closed neighbourhood of q in a linear chain lies on one side of the cut.
bool border_free(int n, int q, std::uint64_t members) {
  const bool side = (members >> q) & 1U;
  for (int k = std::max(0, q - 1); k <= std::min(n - 1, q + 1); ++k)
    if ((((members >> k) & 1U) != 0) != side) return false;
  return true;
}

ComplexMatrix cluster_projector_oracle(int n) {
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix p = ComplexMatrix::identity(d);
  for (const auto& g : linear_cluster(n).generators) {
    p = oracle::matmul(p, ComplexMatrix::identity(d) + oracle::pauli(g.label()));
  }
  p *= cplx(1.0 / static_cast<double>(d));
  return p;
}

// (1 + s g) / 2 for the generator of qubit q.
ComplexMatrix half_proj(int n, int q, double s) {
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix g = oracle::pauli(linear_cluster(n).generators[static_cast<std::size_t>(q)].label());
  g *= cplx(s);
  ComplexMatrix out = ComplexMatrix::identity(d) + g;
  out *= cplx(0.5);
  return out;
}

GraphSpec random_graph(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.45);
  GraphSpec g{n, {}};
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) g.edges.emplace_back(a, b);
  return g;
}

}  // namespace

TEST_CASE("default B sets and validation") {
  CHECK(default_bset(4).members() == std::vector<int>{0, 3});
  CHECK(default_bset(7).members() == std::vector<int>{0, 3, 6});
  CHECK(default_bset(8).members() == std::vector<int>{0, 3, 6});
  CHECK(default_bset(5).members() == std::vector<int>{0, 3});
  CHECK_THROWS_AS(default_bset(3), std::invalid_argument);
  CHECK_THROWS_AS(BSet(6, {0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(BSet(6, {1}), std::invalid_argument);
  CHECK_THROWS_AS(BSet(6, {0, 6}), std::invalid_argument);
  CHECK_NOTHROW(BSet(6, {1, 4}));
}

TEST_CASE("P+ is a projector with the stated rank that commutes with the stabilizer") {
  for (int n = 4; n <= 7; ++n) {
    const BSet b = default_bset(n);
    const ComplexMatrix pp = build_pplus(b).matrix();
    CHECK(oracle::maxdiff(oracle::matmul(pp, pp), pp) < 1e-12);
    const int m = static_cast<int>(b.size());
    const double rank = std::ldexp(1.0, n - m) * (std::ldexp(1.0, m) - m - 1);
    CHECK(std::abs(oracle::tr(pp).real() - rank) < 1e-9);
    const ClusterState cl = linear_cluster(n);
    CHECK(gme::norm(gme::apply(pp, cl.psi)) < 1e-12);
    for (const auto& g : cl.generators) {
      const ComplexMatrix gm = oracle::pauli(g.label());
      CHECK(oracle::maxdiff(oracle::matmul(pp, gm), oracle::matmul(gm, pp)) < 1e-12);
    }
  }
  const ComplexMatrix p4 = oracle::matmul(half_proj(4, 0, -1.0), half_proj(4, 3, -1.0));
  CHECK(oracle::maxdiff(build_pplus(default_bset(4)).matrix(), p4) < 1e-12);
}

TEST_CASE("four- and seven-qubit witnesses match the closed forms") {
  // 1/2 - |Cl4><Cl4| - (1/8)(1 - g1)(1 - g4)
  {
    const ComplexMatrix expect = ComplexMatrix::identity(16) * cplx(0.5) - cluster_projector_oracle(4) -
                                 oracle::matmul(half_proj(4, 0, -1.0), half_proj(4, 3, -1.0)) * cplx(0.5);
    const HermitianOperator w = build_cluster_witness(default_bset(4));
    CHECK(oracle::maxdiff(w.matrix(), expect) < 1e-12);
    CHECK(std::abs(expectation(w, linear_cluster(4).psi) + 0.5) < 1e-12);

    // The g1 g4 = XZZX term: -1/8 from the cross term and -1/16 from the projector.
    const PauliSum e = pauli_expansion(w);
    CHECK(e.coefficient("XZZX") == doctest::Approx(-3.0 / 16.0).epsilon(1e-12));
    CHECK(pauli_expansion(HermitianOperator::qubits(cluster_projector_oracle(4))).coefficient("XZZX") ==
          doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    // With Hadamards on the end qubits the same term reads ZZZZ.
    ComplexMatrix h(2, 2, {1.0, 1.0, 1.0, -1.0});
    h *= cplx(1.0 / std::sqrt(2.0));
    const ComplexMatrix u = oracle::kron2(oracle::kron2(h, oracle::pauli("II")), h);
    const ComplexMatrix rotated = oracle::matmul(oracle::matmul(u, w.matrix()), u);
    CHECK(pauli_expansion(HermitianOperator::qubits(hermitian_part(rotated))).coefficient("ZZZZ") ==
          doctest::Approx(-3.0 / 16.0).epsilon(1e-12));
  }
  // Seven qubits: -(1/16) of the four sign patterns with at most one plus.
  {
    const int n = 7;
    const std::size_t d = 128;
    ComplexMatrix bracket(d, d);
    const double signs[4][3] = {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    for (const auto& s : signs) {
      ComplexMatrix t = oracle::matmul(oracle::matmul(half_proj(n, 0, s[0]), half_proj(n, 3, s[1])), half_proj(n, 6, s[2]));
      bracket += t * cplx(8.0);
    }
    const ComplexMatrix expect =
        ComplexMatrix::identity(d) * cplx(0.5) - cluster_projector_oracle(n) - bracket * cplx(1.0 / 16.0);
    CHECK(oracle::maxdiff(build_cluster_witness(default_bset(n)).matrix(), expect) < 1e-12);
  }
}

TEST_CASE("eight-qubit worked example") {
  const BSet b = default_bset(8);
  const PmConstruction c = construct_pm(b, Bipartition(8, {1, 2, 4}));
  CHECK(c.r == 2);
  CHECK(c.t == 2);
  REQUIRE(c.labels.size() == 1);
  CHECK(label_string(8, c.labels[0]) == "01000000");
  const ComplexMatrix expect = projector(graph_basis_vector(GraphSpec::linear(8), c.labels[0]));
  CHECK(max_abs_diff(c.p_m.matrix(), expect) < 1e-12);

  const PmConstruction zero = construct_pm(b, Bipartition(8, {0, 1}));
  CHECK(zero.r == 0);
  CHECK(zero.p_m.matrix().max_abs() == 0.0);
}

TEST_CASE("r counts the B qubits that sit on the border") {
  for (int n : {6, 7}) {
    std::vector<BSet> sets{default_bset(n), BSet(n, {1, 4})};
    if (n == 7) sets.emplace_back(n, std::vector<int>{0, 3, 6});
    for (const auto& b : sets) {
      for (const auto& m : all_bipartitions(n)) {
        const PmConstruction c = construct_pm(b, m);
        int brute = 0;
        for (int beta : b.members())
          if (!border_free(n, beta, mask_of(m))) ++brute;
        CHECK(c.r == brute);
        CHECK(static_cast<int>(std::count_if(c.steps.begin(), c.steps.end(),
                                             [](const PmStep& s) { return changes(s.kind); })) == c.r);
        if (c.r <= 1) CHECK(c.p_m.matrix().max_abs() == 0.0);
        for (auto label : c.labels)
          for (int beta : b.members()) CHECK(label_bit(n, label, beta) == 0);
        CHECK(min_eigenvalue(c.p_m) >= -1e-12);
      }
    }
  }
}

TEST_CASE("cluster witnesses are fully decomposable for four to seven qubits") {
  for (int n = 4; n <= 7; ++n) {
    const BSet b = default_bset(n);
    const HermitianOperator w = build_cluster_witness(b);
    const DecomposabilityReport rep = verify_full_decomposability(w, b, 1e-9, 2);
    CHECK(rep.all_passed());
    CHECK(rep.checks.size() == (std::size_t{1} << (n - 1)) - 1);
    CHECK(rep.min_eig_q >= -1e-9);
    CHECK(rep.min_eig_p >= -1e-9);
  }
  // Subtracting more of P+ breaks it.
  const BSet b4 = default_bset(4);
  const HermitianOperator w = build_cluster_witness(b4);
  ComplexMatrix extra = build_pplus(b4).matrix();
  extra *= cplx(0.1);
  const DecomposabilityReport bad = verify_full_decomposability(HermitianOperator::qubits(w.matrix() - extra), b4);
  CHECK_FALSE(bad.all_passed());
  CHECK(bad.min_eig_q < -1e-9);
}

TEST_CASE("noise tolerance formula") {
  CHECK(std::abs(noise_tolerance_formula(4) - 8.0 / 13.0) < 1e-15);
  CHECK(std::abs(noise_tolerance_formula(7) - 64.0 / 95.0) < 1e-15);
  // Within a plateau of k the 2^(1-n) term makes the value dip slightly, so the
  // sequence only increases from one plateau start (n = 3k - 2) to the next.
  double last = 0.0;
  for (int n = 4; n <= 19; n += 3) {
    const double v = noise_tolerance_formula(n);
    CHECK(v > last);
    last = v;
  }
  for (int n = 4; n <= 40; ++n) {
    CHECK(noise_tolerance_formula(n) > 0.0);
    CHECK(noise_tolerance_formula(n) < 1.0);
  }
  CHECK(noise_tolerance_formula(8) < noise_tolerance_formula(7));
  CHECK(noise_tolerance_formula(61) > 0.999);
  for (int n = 4; n <= 7; ++n) {
    const HermitianOperator w = build_cluster_witness(default_bset(n));
    const StateVector psi = linear_cluster(n).psi;
    const double f0 = trace_product(w, white_noise_mix(psi, 0.0).op());
    const double f1 = trace_product(w, white_noise_mix(psi, 1.0).op());
    CHECK(std::abs(f0 / (f0 - f1) - noise_tolerance_formula(n)) < 1e-10);
  }
}

TEST_CASE("Lemma: orthogonality survives transposition on border-free qubits") {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const int n = 3 + t % 4;
    const GraphSpec g = random_graph(n, rng);
    std::uniform_int_distribution<std::uint64_t> cut(1, (std::uint64_t{1} << n) - 2);
    std::uniform_int_distribution<std::uint64_t> lab(0, (std::uint64_t{1} << n) - 1);
    const std::uint64_t members = cut(rng);
    for (int q = 0; q < n; ++q) {
      const bool side = (members >> q) & 1U;
      bool inside = true;
      for (int k : g.neighbours(q)) inside = inside && ((((members >> k) & 1U) != 0) == side);
      if (!inside) continue;
      const std::uint64_t a = lab(rng);
      // b is random except that it differs from a on qubit q.
      const std::uint64_t bq = (lab(rng) & ~qubit_bit(n, q)) | (~a & qubit_bit(n, q));
      const ComplexMatrix pa = oracle::partial_transpose(projector(graph_basis_vector(g, a)), n, members);
      const StateVector vb = graph_basis_vector(g, bq);
      cplx s = 0.0;
      for (std::size_t i = 0; i < vb.size(); ++i)
        for (std::size_t j = 0; j < vb.size(); ++j) s += std::conj(vb[i]) * pa(i, j) * vb[j];
      CHECK(std::abs(s) < 1e-10);
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("Lemma: partially transposed pure states are bounded by the largest squared Schmidt coefficient") {
  std::mt19937_64 rng(62);
  CounterRng crng(62);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 3;
    const std::size_t d = std::size_t{1} << n;
    const StateVector psi = oracle::random_vector(d, rng);
    const Bipartition m = Bipartition::from_mask(n, 1 + static_cast<std::uint64_t>(t) % ((std::uint64_t{1} << n) - 2));
    const auto s = schmidt_coefficients(psi, m);
    const double bound = s.front() * s.front();
    const ComplexMatrix pt = oracle::partial_transpose(projector(psi), n, mask_of(m));
    const ComplexMatrix u = random_unitary(static_cast<int>(d), crng);
    const ComplexMatrix rotated = oracle::matmul(oracle::matmul(oracle::dagger(u), pt), u);
    double maxdiag = -1.0;
    for (std::size_t i = 0; i < d; ++i) maxdiag = std::max(maxdiag, rotated(i, i).real());
    CHECK(maxdiag <= bound + 1e-10);
    CHECK(hermitian_eigenvalues(pt).back() <= bound + 1e-10);
  }
}

TEST_CASE("Lemma: flipped pairs of projectors are invariant under single-qubit transposition") {
  std::mt19937_64 rng(63);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4;
    const GraphSpec g = random_graph(n, rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<std::uint64_t> lab(0, (std::uint64_t{1} << n) - 1);
    const int k = pick(rng);
    const std::uint64_t a = lab(rng);
    std::uint64_t nb = 0;
    for (int i : g.neighbours(k)) nb |= qubit_bit(n, i);
    for (std::uint64_t b : {a ^ qubit_bit(n, k), a ^ nb}) {
      if (b == a) continue;
      const ComplexMatrix sum = projector(graph_basis_vector(g, a)) + projector(graph_basis_vector(g, b));
      CHECK(oracle::maxdiff(oracle::partial_transpose(sum, n, std::uint64_t{1} << k), sum) < 1e-12);
    }
  }
}
