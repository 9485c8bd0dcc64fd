// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is nonzero when any criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gme/bisep.hpp"
#include "gme/cluster.hpp"
#include "gme/witness.hpp"
#include "oracle.hpp"

using namespace gme;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void expect(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { lines.push_back("      " + what); }
};

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

DensityMatrix dm(const ComplexMatrix& m) { return DensityMatrix(HermitianOperator::qubits(hermitian_part(m))); }

// Every detection made here also re-verifies its certificate.
DetectionResult checked_detect(const DensityMatrix& rho, const WitnessOptions& o, Outcome& out, int& verified) {
  DetectionResult r = detect(rho, o);
  const VerificationReport rep = verify_certificate(r.certificate);
  if (!rep.passed) out.expect(false, "certificate re-verification: " + rep.failures.front());
  ++verified;
  return r;
}

Outcome table1() {
  Outcome out;
  const struct {
    const char* name;
    double paper;
  } rows[] = {{"ghz3", 0.571}, {"ghz4", 0.533}, {"w3", 0.521},     {"w4", 0.526},
              {"cl4", 0.615},  {"dicke24", 0.539}, {"singlet4", 0.553}};
  for (const auto& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    const ToleranceResult t = white_noise_tolerance(named_state(row.name));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.expect(std::abs(t.p - row.paper) <= 1e-3,
               fmt("%-9s p_tol = %.4f  [%.5f, %.5f]  paper %.3f  (%d solves, %.1fs)", row.name, t.p, t.lo, t.hi,
                   row.paper, t.solves, secs));
  }
  return out;
}

Outcome dicke_sequence() {
  Outcome out;
  const double paper[] = {0.29495, 0.38379, 0.38383, 0.45200, 0.53914};
  const StateVector d = dicke(4, 2);
  double stage6 = 0.0;
  for (int k = 2; k <= 6; ++k) {
    WitnessOptions o;
    o.mode = WitnessMode::Restricted;
    o.basis = dicke_observable_stage(k);
    const ToleranceResult t = white_noise_tolerance(d, o, 1e-4);
    out.expect(std::abs(t.p - paper[k - 2]) <= 5e-4,
               fmt("stage %d (%zu observables): p_tol = %.5f  paper %.5f", k, o.basis->size(), t.p, paper[k - 2]));
    if (k == 6) stage6 = t.p;
  }
  const ToleranceResult full = white_noise_tolerance(d);
  out.expect(std::abs(stage6 - full.p) <= 5e-4, fmt("stage 6 %.5f vs full witness %.5f", stage6, full.p));
  return out;
}

Outcome formula_crosscheck() {
  Outcome out;
  out.expect(noise_tolerance_formula(4) == 8.0 / 13.0, fmt("formula(4) = %.17g, 8/13 = %.17g", noise_tolerance_formula(4), 8.0 / 13.0));
  for (int n = 4; n <= 7; ++n) {
    const HermitianOperator w = build_cluster_witness(default_bset(n));
    const StateVector psi = linear_cluster(n).psi;
    // tr(W rho(p)) is affine in p; the zero crossing follows from the two ends.
    const double f0 = trace_product(w, white_noise_mix(psi, 0.0).op());
    const double f1 = trace_product(w, white_noise_mix(psi, 1.0).op());
    const double root = f0 / (f0 - f1);
    const double fm = trace_product(w, white_noise_mix(psi, 0.5).op());
    const bool affine = std::abs(fm - 0.5 * (f0 + f1)) < 1e-12;
    out.expect(affine && std::abs(root - noise_tolerance_formula(n)) <= 1e-10,
               fmt("n=%d zero crossing %.15f formula %.15f", n, root, noise_tolerance_formula(n)));
  }
  return out;
}

Outcome proposition4() {
  Outcome out;
  for (int n = 4; n <= 7; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const BSet b = default_bset(n);
    const DecomposabilityReport rep = verify_full_decomposability(build_cluster_witness(b), b, 1e-9);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.expect(rep.all_passed() && rep.min_eig_q >= -1e-9,
               fmt("n=%d %d/%zu bipartitions PSD, min eig Q %.3e, min eig P %.3e (%.1fs)", n, rep.passed,
                   rep.checks.size(), rep.min_eig_q, rep.min_eig_p, secs));
  }
  return out;
}

Outcome monotone_negativity(int& verified) {
  Outcome out;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = dm(oracle::random_density(4, rng));
    double neg = 0.0;
    for (double e : hermitian_eigenvalues(oracle::partial_transpose(rho.matrix(), 2, 1)))
      if (e < 0) neg -= e;
    DetectionResult d;
    const double n = gme_negativity(rho, &d);
    if (!verify_certificate(d.certificate).passed) out.expect(false, fmt("sample %d certificate", t));
    ++verified;
    worst = std::max(worst, std::abs(n - neg));
  }
  out.expect(worst <= 1e-6, fmt("100 random two-qubit states: max |N - negativity| = %.3e", worst));
  return out;
}

Outcome appendix_c(int& verified) {
  Outcome out;
  const double pbar = critical_p_w3();
  out.expect(std::abs(pbar - 0.52102) <= 1e-5, fmt("critical p = %.10f (paper 0.52102)", pbar));
  const W3Analytic a = w3_analytic_decomposition(pbar);
  out.expect(std::abs(a.a - 0.98716) <= 1e-4, fmt("a = %.6f (paper 0.98716)", a.a));
  const BisepReport rep = verify_decomposition(a.decomposition, 1e-9, 1e-10);
  out.expect(rep.reconstruction_residual <= 1e-9, fmt("reconstruction residual %.3e", rep.reconstruction_residual));
  out.expect(rep.min_pt_eigenvalue >= -1e-10, fmt("min eigenvalue of component partial transposes %.3e", rep.min_pt_eigenvalue));
  out.expect(rep.passed, "independent re-verification of the analytic decomposition");
  const auto above = certify_biseparable_sym(w3_noisy(pbar + 1e-3));
  out.expect(above.has_value() && verify_decomposition(*above).passed, "symmetric-subspace SDP feasible at p + 1e-3");
  Outcome scratch;
  const DetectionResult below = checked_detect(w3_noisy(pbar - 1e-3), WitnessOptions{}, scratch, verified);
  out.expect(scratch.pass && below.verdict == Verdict::GenuineMultipartiteEntangled,
             fmt("witness detects at p - 1e-3 (value %.3e)", below.value));
  return out;
}

Outcome volume(bool smoke, int jobs) {
  Outcome out;
  const std::size_t n = smoke ? 1000 : 10000;
  const double k = smoke ? 4.0 : 3.0;
  const struct {
    Measure measure;
    WitnessMode mode;
    double paper;
  } runs[] = {{Measure::HilbertSchmidt, WitnessMode::FullyDecomposable, 0.0628},
              {Measure::Bures, WitnessMode::FullyDecomposable, 0.1032},
              {Measure::HilbertSchmidt, WitnessMode::FullyPpt, 0.0044},
              {Measure::Bures, WitnessMode::FullyPpt, 0.0106}};
  for (const auto& r : runs) {
    const auto t0 = std::chrono::steady_clock::now();
    const VolumeResult v = volume_estimate(n, r.measure, r.mode, 1, 3, jobs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double sigma = std::sqrt(r.paper * (1.0 - r.paper) / static_cast<double>(n));
    out.expect(std::abs(v.fraction - r.paper) <= k * sigma,
               fmt("%-5s %-18s %6.2f%% (%zu/%zu, Wilson [%.2f%%, %.2f%%])  paper %.2f%% +- %.2f%% (%.0fs)",
                   to_string(r.measure).c_str(), to_string(r.mode).c_str(), 100 * v.fraction, v.detected, v.samples,
                   100 * v.ci_low, 100 * v.ci_high, 100 * r.paper, 100 * k * sigma, secs));
  }
  return out;
}

Outcome appendix_d() {
  Outcome out;
  const HermitianOperator w = rounded_dicke_witness();
  const StateVector d = dicke(4, 2);
  const double f0 = trace_product(w, white_noise_mix(d, 0.0).op());
  const double f1 = trace_product(w, white_noise_mix(d, 1.0).op());
  const double root = f0 / (f0 - f1);
  out.expect(std::abs(root - 0.539) <= 0.01, fmt("tr(W_D rho(p)) crosses zero at p = %.5f", root));
  double worst = 0.0;
  for (const auto& m : canonical_bipartitions(4)) {
    const DecompositionFit fit = fit_decomposition(w, m);
    worst = std::max(worst, fit.violation);
  }
  out.expect(worst <= 1e-3, fmt("largest PSD violation over 7 bipartitions %.3e", worst));
  return out;
}

Outcome properties(int& verified) {
  Outcome out;
  std::mt19937_64 rng(909);

  // Lemma 1 on random graphs.
  {
    int checked = 0;
    double worst = 0.0;
    std::bernoulli_distribution coin(0.45);
    for (int t = 0; t < 80; ++t) {
      const int n = 3 + t % 4;
      GraphSpec g{n, {}};
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (coin(rng)) g.edges.emplace_back(a, b);
      std::uniform_int_distribution<std::uint64_t> cut(1, (std::uint64_t{1} << n) - 2), lab(0, (std::uint64_t{1} << n) - 1);
      const std::uint64_t members = cut(rng);
      for (int q = 0; q < n; ++q) {
        const bool side = (members >> q) & 1U;
        bool inside = true;
        for (int k : g.neighbours(q)) inside = inside && ((((members >> k) & 1U) != 0) == side);
        if (!inside) continue;
        const std::uint64_t a = lab(rng);
        const std::uint64_t b = (lab(rng) & ~qubit_bit(n, q)) | (~a & qubit_bit(n, q));
        const ComplexMatrix pa = oracle::partial_transpose(projector(graph_basis_vector(g, a)), n, members);
        const StateVector vb = graph_basis_vector(g, b);
        worst = std::max(worst, std::abs(gme::inner(vb, gme::apply(pa, vb))));
        ++checked;
      }
    }
    out.expect(worst <= 1e-10, fmt("Lemma 1: %d cases, max |<b|(|a><a|)^T_M|b>| = %.2e", checked, worst));
  }
  // Lemma 2 in random bases.
  {
    double margin = 1.0;
    CounterRng crng(5);
    for (int t = 0; t < 60; ++t) {
      const int n = 2 + t % 3;
      const std::size_t d = std::size_t{1} << n;
      const StateVector psi = oracle::random_vector(d, rng);
      const std::uint64_t mask = 1 + static_cast<std::uint64_t>(t) % ((std::uint64_t{1} << n) - 2);
      const auto s = schmidt_coefficients(psi, Bipartition::from_mask(n, mask));
      std::uint64_t members = 0;
      for (int q : Bipartition::from_mask(n, mask).members()) members |= std::uint64_t{1} << q;
      const ComplexMatrix pt = oracle::partial_transpose(projector(psi), n, members);
      const ComplexMatrix u = random_unitary(static_cast<int>(d), crng);
      const ComplexMatrix r = oracle::matmul(oracle::matmul(oracle::dagger(u), pt), u);
      for (std::size_t i = 0; i < d; ++i) margin = std::min(margin, s.front() * s.front() - r(i, i).real());
    }
    out.expect(margin >= -1e-10, fmt("Lemma 2: min (lambda_max^2 - diagonal) = %.2e", margin));
  }
  // Lemma 3, both constructions.
  {
    double worst = 0.0;
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < 60; ++t) {
      const int n = 2 + t % 4;
      GraphSpec g{n, {}};
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          if (coin(rng)) g.edges.emplace_back(a, b);
      const int k = static_cast<int>(rng() % static_cast<unsigned>(n));
      const std::uint64_t a = rng() % (std::uint64_t{1} << n);
      std::uint64_t nb = 0;
      for (int i : g.neighbours(k)) nb |= qubit_bit(n, i);
      for (std::uint64_t b : {a ^ qubit_bit(n, k), a ^ nb}) {
        if (b == a) continue;
        const ComplexMatrix sum = projector(graph_basis_vector(g, a)) + projector(graph_basis_vector(g, b));
        worst = std::max(worst, oracle::maxdiff(oracle::partial_transpose(sum, n, std::uint64_t{1} << k), sum));
      }
    }
    out.expect(worst <= 1e-12, fmt("Lemma 3: max deviation from T_k invariance %.2e", worst));
  }
  // Partial transpose involution and commutation.
  {
    double worst = 0.0;
    const ComplexMatrix a = oracle::random_hermitian(16, rng);
    const std::vector<int> dims(4, 2);
    for (std::uint64_t m1 = 1; m1 < 15; ++m1) {
      const Bipartition b1 = Bipartition::from_mask(4, m1);
      worst = std::max(worst, max_abs_diff(partial_transpose(partial_transpose(a, dims, b1), dims, b1), a));
      for (std::uint64_t m2 = 1; m2 < 15; ++m2) {
        if (m1 & m2) continue;
        const Bipartition b2 = Bipartition::from_mask(4, m2);
        worst = std::max(worst, max_abs_diff(partial_transpose(partial_transpose(a, dims, b1), dims, b2),
                                             partial_transpose(partial_transpose(a, dims, b2), dims, b1)));
      }
      worst = std::max(worst, max_abs_diff(partial_transpose(a, dims, b1),
                                           partial_transpose(a, dims, b1.complement()).transpose()));
    }
    out.expect(worst == 0.0, fmt("partial transpose involution, commutation, complement rule: %.1e", worst));
  }
  // Biseparable states are never detected.
  {
    double worst = 1.0;
    for (int t = 0; t < 100; ++t) {
      const DensityMatrix rho = dm(oracle::random_biseparable(3, 1 + t % 4, rng));
      worst = std::min(worst, checked_detect(rho, WitnessOptions{}, out, verified).value);
    }
    out.expect(worst >= -1e-7, fmt("100 random biseparable states: smallest optimum %.3e", worst));
  }
  // Monotone convexity and local-unitary invariance.
  {
    double gap = 1.0;
    for (int t = 0; t < 5; ++t) {
      const DensityMatrix a = white_noise_mix(oracle::random_vector(8, rng), 0.1);
      const DensityMatrix b = white_noise_mix(oracle::random_vector(8, rng), 0.1);
      const std::vector<DensityMatrix> ab{a, b};
      const std::vector<double> half{0.5, 0.5};
      gap = std::min(gap, 0.5 * gme_negativity(a) + 0.5 * gme_negativity(b) - gme_negativity(mixture(ab, half)));
      verified += 3;
    }
    out.expect(gap >= -1e-6, fmt("monotone convexity: min (mean N - N(mean)) = %.3e", gap));
    double lu = 0.0, lu_detect = 0.0;
    for (int t = 0; t < 3; ++t) {
      const DensityMatrix rho = white_noise_mix(t == 0 ? ghz(3) : oracle::random_vector(8, rng), 0.2);
      const ComplexMatrix u = oracle::random_local_unitary(3, rng);
      const DensityMatrix rot = dm(oracle::matmul(oracle::matmul(u, rho.matrix()), oracle::dagger(u)));
      lu = std::max(lu, std::abs(gme_negativity(rho) - gme_negativity(rot)));
      lu_detect = std::max(lu_detect, std::abs(checked_detect(rho, WitnessOptions{}, out, verified).value -
                                               checked_detect(rot, WitnessOptions{}, out, verified).value));
    }
    out.expect(lu <= 1e-6, fmt("monotone local-unitary invariance: %.2e", lu));
    out.expect(lu_detect <= 1e-6, fmt("detection optimum local-unitary invariance: %.2e", lu_detect));
  }
  out.note(fmt("%d solver certificates re-verified in this run", verified));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run"};
  bool smoke = false;
  int jobs = 1;
  std::vector<int> only;
  app.add_flag("--smoke", smoke, "10^3 volume samples with 4 sigma bands");
  app.add_option("--jobs", jobs, "threads for volume sampling")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  int verified = 0;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Table I white-noise tolerances", [] { return table1(); }},
      {"Dicke restricted-observable sequence", [] { return dicke_sequence(); }},
      {"cluster tolerance formula cross-check", [] { return formula_crosscheck(); }},
      {"cluster witnesses fully decomposable (n = 4..7)", [] { return proposition4(); }},
      {"monotone equals two-qubit negativity", [&] { return monotone_negativity(verified); }},
      {"W3 biseparability at the critical noise level", [&] { return appendix_c(verified); }},
      {smoke ? "volume of detected states (smoke, 10^3 samples, 4 sigma)" : "volume of detected states (10^4 samples, 3 sigma)",
       [&] { return volume(smoke, jobs); }},
      {"rounded Dicke witness", [] { return appendix_d(); }},
      {"property suites", [&] { return properties(verified); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d [PRIMARY] %s: %s (%.1fs)\n", id, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL", secs);
    for (const auto& l : o.lines) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
