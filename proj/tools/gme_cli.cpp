// Command-line front end. Exit codes: 0 detected / certified / passed,
// 1 not detected / not certified / failed, 2 error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gme/bisep.hpp"
#include "gme/cluster.hpp"
#include "gme/io.hpp"
#include "gme/witness.hpp"

using namespace gme;

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;

struct TableRow {
  const char* name;
  const char* label;
  double expected;
};

const TableRow kTable[] = {
    {"ghz3", "GHZ3", 0.571}, {"w3", "W3", 0.521},       {"ghz4", "GHZ4", 0.533},      {"w4", "W4", 0.526},
    {"cl4", "Cl4", 0.615},   {"dicke24", "D24", 0.539}, {"singlet4", "PsiS4", 0.553},
};

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

DensityMatrix state_spec(const std::string& spec) {
  for (const auto& n : named_states())
    if (n == spec) return DensityMatrix::from_pure(named_state(spec));
  return read_state_file(spec).state;
}

StateVector pure_spec(const std::string& spec) {
  for (const auto& n : named_states())
    if (n == spec) return named_state(spec);
  // A file: accept it when the state is pure, i.e. rank one.
  const DensityMatrix rho = read_state_file(spec).state;
  const EigenDecomposition e = hermitian_eigen(rho.op());
  if (std::abs(e.values.back() - 1.0) > 1e-9) throw std::invalid_argument("tolerance needs a pure state; '" + spec + "' is mixed");
  StateVector v(rho.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = e.vectors(i, v.size() - 1);
  return v;
}

WitnessOptions make_options(const std::string& mode, const std::string& observables, int stage) {
  WitnessOptions o;
  o.mode = parse_witness_mode(mode);
  if (o.mode == WitnessMode::Monotone) throw std::invalid_argument("use the monotone command for the negativity");
  if (o.mode == WitnessMode::Restricted) {
    if (!observables.empty()) o.basis = read_observables_file(observables);
    else if (stage > 0) o.basis = dicke_observable_stage(stage);
    else throw std::invalid_argument("restricted mode needs --observables or --stage");
  }
  return o;
}

std::vector<int> parse_bset(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad B-set entry '" + item + "'");
    if (v < 1) throw std::invalid_argument("B-set entries are 1-based");
    out.push_back(v - 1);
  }
  return out;
}

std::string bset_string(const BSet& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b.members()[i] + 1);
  return s + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genuine multipartite entanglement certificates from fully decomposable witnesses"};
  app.require_subcommand(1);
  int result = 2;

  // detect
  std::string det_state, det_mode = "full", det_obs, det_out;
  int det_stage = 0;
  auto* detect_cmd = app.add_subcommand("detect", "Solve the witness SDP for a state file");
  detect_cmd->add_option("state", det_state, "State file (JSON) or a named state")->required();
  detect_cmd->add_option("--mode", det_mode, "full, fully-ppt or restricted")->check(CLI::IsMember({"full", "fully-ppt", "restricted"}));
  detect_cmd->add_option("--observables", det_obs, "Observables file for restricted mode");
  detect_cmd->add_option("--stage", det_stage, "Four-qubit Dicke observable stage 1..6 (restricted mode)")->check(CLI::Range(1, 6));
  detect_cmd->add_option("--out", det_out, "Witness file to write");
  detect_cmd->callback([&] {
    const DensityMatrix rho = state_spec(det_state);
    const WitnessOptions opt = make_options(det_mode, det_obs, det_stage);
    const DetectionResult r = detect(rho, opt);
    const VerificationReport rep = verify_certificate(r.certificate);
    std::cout << "value: " << fixed(r.value, 9) << "\n"
              << "verdict: " << to_string(r.verdict) << "\n"
              << "iterations: " << r.iterations << (r.real_arithmetic ? " (real arithmetic)" : "") << "\n"
              << "certificate: " << (rep.passed ? "verified" : "FAILED") << " (decomposition residual "
              << rep.decomposition_residual << ", min eigenvalue " << std::min(rep.min_eig_p, rep.min_eig_q) << ")\n";
    for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
    if (!det_out.empty()) write_witness_file(det_out, make_witness_file(r, opt.sdp, {{"state", det_state}}));
    if (!rep.passed) throw std::runtime_error("certificate failed verification");
    result = r.verdict == Verdict::GenuineMultipartiteEntangled ? kYes : kNo;
  });

  // tolerance
  std::string tol_state, tol_mode = "full", tol_obs;
  int tol_stage = 0;
  double tol_width = 5e-4;
  auto* tol_cmd = app.add_subcommand("tolerance", "White-noise tolerance by bisection");
  tol_cmd->add_option("state", tol_state, "ghz3|ghz4|w3|w4|cl4|dicke24|singlet4 or a pure-state file")->required();
  tol_cmd->add_option("--mode", tol_mode, "full, fully-ppt or restricted")->check(CLI::IsMember({"full", "fully-ppt", "restricted"}));
  tol_cmd->add_option("--observables", tol_obs, "Observables file for restricted mode");
  tol_cmd->add_option("--stage", tol_stage, "Four-qubit Dicke observable stage 1..6 (restricted mode)")->check(CLI::Range(1, 6));
  tol_cmd->add_option("--width", tol_width, "Final bracket width")->check(CLI::PositiveNumber);
  tol_cmd->callback([&] {
    const StateVector psi = pure_spec(tol_state);
    const ToleranceResult t = white_noise_tolerance(psi, make_options(tol_mode, tol_obs, tol_stage), tol_width);
    std::cout << "p_tol = " << fixed(t.p, 3) << "  bracket [" << fixed(t.lo, 6) << ", " << fixed(t.hi, 6) << "]  solves "
              << t.solves << "\n";
    result = kYes;
  });

  // cluster-witness
  int cw_n = 0, cw_jobs = 1;
  std::string cw_bset, cw_out;
  bool cw_verify = false;
  auto* cw_cmd = app.add_subcommand("cluster-witness", "Analytic witness for the n-qubit linear cluster state");
  cw_cmd->add_option("n", cw_n, "Number of qubits")->required();
  cw_cmd->add_option("--bset", cw_bset, "Comma-separated 1-based B-set (default 1,4,7,...)");
  cw_cmd->add_flag("--verify", cw_verify, "Check full decomposability on every bipartition");
  cw_cmd->add_option("--out", cw_out, "Witness file to write");
  cw_cmd->add_option("--jobs", cw_jobs, "Worker threads")->check(CLI::PositiveNumber);
  cw_cmd->callback([&] {
    if (cw_n < 4) throw std::invalid_argument("the construction needs at least four qubits");
    if (cw_n > 10) throw std::invalid_argument("dense witness construction is limited to 10 qubits");
    const BSet b = cw_bset.empty() ? default_bset(cw_n) : BSet(cw_n, parse_bset(cw_bset));
    const HermitianOperator w = build_cluster_witness(b);
    const WitnessFile f = make_witness_file(w, WitnessMode::FullyDecomposable, {{"construction", "linear-cluster"}, {"bset", bset_string(b)}});
    std::cout << "n = " << cw_n << "  B = " << bset_string(b) << "  Pauli terms: " << f.expansion.size() << "\n";
    if (!cw_out.empty()) write_witness_file(cw_out, f);
    else
      for (const auto& [label, c] : f.expansion.terms()) std::cout << "  " << label << "  " << c << "\n";
    std::cout << "noise tolerance (formula) = " << fixed(noise_tolerance_formula(cw_n), 6) << "\n";
    result = kYes;
    if (cw_verify) {
      const DecomposabilityReport rep = verify_full_decomposability(w, b, 1e-9, cw_jobs);
      std::cout << rep.passed << "/" << rep.checks.size() << " bipartitions PSD (min Q_M eigenvalue " << rep.min_eig_q
                << ", min P_M eigenvalue " << rep.min_eig_p << ")\n";
      if (!rep.all_passed()) result = kNo;
    }
  });

  // monotone
  std::string mono_state;
  auto* mono_cmd = app.add_subcommand("monotone", "Genuine multipartite negativity");
  mono_cmd->add_option("state", mono_state, "State file or a named state")->required();
  mono_cmd->callback([&] {
    const double n = gme_negativity(state_spec(mono_state));
    std::cout << "N = " << fixed(n, 6) << "\n";
    result = n > 1e-7 ? kYes : kNo;
  });

  // volume
  std::string vol_measure = "hs", vol_mode = "full";
  std::size_t vol_samples = 1000;
  std::uint64_t vol_seed = 0;
  int vol_qubits = 3, vol_jobs = 1;
  auto* vol_cmd = app.add_subcommand("volume", "Detected fraction of random mixed states");
  vol_cmd->add_option("--measure", vol_measure, "hs or bures")->check(CLI::IsMember({"hs", "bures"}));
  vol_cmd->add_option("--samples", vol_samples, "Number of samples")->check(CLI::PositiveNumber);
  vol_cmd->add_option("--seed", vol_seed, "Seed (required)")->required();
  vol_cmd->add_option("--mode", vol_mode, "full, fully-ppt or monotone")->check(CLI::IsMember({"full", "fully-ppt", "monotone"}));
  vol_cmd->add_option("--qubits", vol_qubits, "Qubits per sample")->check(CLI::Range(2, 4));
  vol_cmd->add_option("--jobs", vol_jobs, "Worker threads")->check(CLI::PositiveNumber);
  vol_cmd->callback([&] {
    const VolumeResult v = volume_estimate(vol_samples, parse_measure(vol_measure), parse_witness_mode(vol_mode), vol_seed,
                                           vol_qubits, vol_jobs);
    std::cout << "fraction = " << fixed(v.fraction, 4) << " +- " << fixed(v.sigma, 4) << "  (95% CI [" << fixed(v.ci_low, 4)
              << ", " << fixed(v.ci_high, 4) << "], " << v.detected << "/" << v.samples << ")\n";
    result = kYes;
  });

  // bisep
  std::string bs_state, bs_out;
  auto* bs_cmd = app.add_subcommand("bisep", "Search a symmetric PPT biseparable decomposition (three qubits)");
  bs_cmd->add_option("state", bs_state, "State file or a named state")->required();
  bs_cmd->add_option("--out", bs_out, "Decomposition file to write");
  bs_cmd->callback([&] {
    const DensityMatrix rho = state_spec(bs_state);
    const auto d = certify_biseparable_sym(rho);
    if (!d) {
      std::cout << "no symmetric PPT decomposition found (inconclusive)\n";
      result = kNo;
      return;
    }
    const BisepReport rep = verify_decomposition(*d, 1e-8, 1e-9);
    std::cout << "biseparable: " << d->parts.size() << " components, reconstruction residual " << rep.reconstruction_residual
              << ", min partial-transpose eigenvalue " << rep.min_pt_eigenvalue << "\n";
    for (const auto& p : d->parts) std::cout << "  cut " << p.m.to_string() << "  weight " << fixed(p.weight, 6) << "\n";
    for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
    if (!rep.passed) throw std::runtime_error("decomposition failed verification");
    if (!bs_out.empty()) write_decomposition_file(bs_out, *d);
    result = kYes;
  });

  // table1
  double t1_width = 5e-4;
  auto* t1_cmd = app.add_subcommand("table1", "White-noise tolerances of the seven reference states");
  t1_cmd->add_option("--width", t1_width, "Bisection width")->check(CLI::PositiveNumber);
  t1_cmd->callback([&] {
    bool all = true;
    std::cout << "state     expected  computed  bracket                 status\n";
    for (const auto& row : kTable) {
      const ToleranceResult t = white_noise_tolerance(named_state(row.name), {}, t1_width);
      const bool ok = std::abs(t.p - row.expected) <= 1e-3;
      all = all && ok;
      std::printf("%-9s %-9.3f %-9.4f [%.5f, %.5f]      %s\n", row.label, row.expected, t.p, t.lo, t.hi, ok ? "PASS" : "FAIL");
      std::fflush(stdout);
    }
    result = all ? kYes : kNo;
  });

  // verify
  std::string ver_file;
  auto* ver_cmd = app.add_subcommand("verify", "Re-verify the certificate in a witness file");
  ver_cmd->add_option("witness", ver_file, "Witness file")->required();
  ver_cmd->callback([&] {
    const WitnessFile f = read_witness_file(ver_file);
    if (!f.certificate) throw std::invalid_argument("witness file has no certificate");
    const VerificationReport rep = verify_certificate(*f.certificate);
    std::cout << (rep.passed ? "verified" : "FAILED") << ": " << rep.bipartitions_checked << " bipartitions, residual "
              << rep.decomposition_residual << ", min eigenvalue " << std::min(rep.min_eig_p, rep.min_eig_q) << "\n";
    for (const auto& msg : rep.failures) std::cout << "  " << msg << "\n";
    result = rep.passed ? kYes : kNo;
  });

  // state
  std::string st_name, st_out;
  double st_noise = 0.0;
  std::optional<std::uint64_t> st_seed;
  int st_qubits = 3;
  auto* st_cmd = app.add_subcommand("state", "Write a state file");
  st_cmd->add_option("name", st_name, "A named state, random-hs or random-bures")->required();
  st_cmd->add_option("--noise", st_noise, "White-noise weight p")->check(CLI::Range(0.0, 1.0));
  st_cmd->add_option("--seed", st_seed, "Seed (required for random states)");
  st_cmd->add_option("--qubits", st_qubits, "Qubits for random states")->check(CLI::Range(1, 6));
  st_cmd->add_option("--out", st_out, "Output file (stdout when absent)");
  st_cmd->callback([&] {
    StateFile f;
    if (st_name == "random-hs" || st_name == "random-bures") {
      if (!st_seed) throw std::invalid_argument("random states need --seed");
      const int dim = 1 << st_qubits;
      f.state = st_name == "random-hs" ? random_density_hs(dim, *st_seed) : random_density_bures(dim, *st_seed);
      f.metadata["seed"] = std::to_string(*st_seed);
    } else {
      f.state = white_noise_mix(named_state(st_name), st_noise);
      f.metadata["noise"] = fixed(st_noise, 6);
    }
    f.metadata["name"] = st_name;
    if (st_out.empty()) std::cout << state_to_json(f);
    else write_state_file(st_out, f);
    result = kYes;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error (" << to_string(e.status()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return result;
}
