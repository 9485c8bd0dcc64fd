#include "gme/witness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gme {

std::string to_string(WitnessMode m) {
  switch (m) {
    case WitnessMode::FullyDecomposable: return "full";
    case WitnessMode::FullyPpt: return "fully-ppt";
    case WitnessMode::Restricted: return "restricted";
    case WitnessMode::Monotone: return "monotone";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  return v == Verdict::GenuineMultipartiteEntangled ? "GenuineMultipartiteEntangled" : "PptMixture";
}

WitnessMode parse_witness_mode(const std::string& s) {
  if (s == "full") return WitnessMode::FullyDecomposable;
  if (s == "fully-ppt") return WitnessMode::FullyPpt;
  if (s == "restricted") return WitnessMode::Restricted;
  if (s == "monotone") return WitnessMode::Monotone;
  throw std::invalid_argument("unknown witness mode '" + s + "'");
}

std::string to_string(Measure m) { return m == Measure::HilbertSchmidt ? "hs" : "bures"; }

Measure parse_measure(const std::string& s) {
  if (s == "hs") return Measure::HilbertSchmidt;
  if (s == "bures") return Measure::Bures;
  throw std::invalid_argument("unknown measure '" + s + "'");
}

// ---------------------------------------------------------------------------

ObservableBasis::ObservableBasis(std::vector<PauliString> observables) {
  if (observables.empty()) throw std::invalid_argument("observable basis is empty");
  n_ = observables.front().qubits();
  std::set<std::string> seen;
  for (auto& o : observables) {
    if (o.qubits() != n_) throw DimensionError("observables act on different numbers of qubits");
    if (!seen.insert(o.label()).second) continue;
    o.set_coefficient(1.0);
    observables_.push_back(std::move(o));
  }
  std::sort(observables_.begin(), observables_.end(),
            [](const PauliString& a, const PauliString& b) { return a.letters() < b.letters(); });
}

ObservableBasis ObservableBasis::full(int n) { return ObservableBasis(all_pauli_strings(n)); }

ObservableBasis ObservableBasis::expand(const std::vector<PauliString>& settings, bool permutations, bool closure) {
  std::vector<PauliString> out;
  for (const auto& s : settings) {
    std::vector<PauliString> base = permutations ? distinct_permutations(s) : std::vector<PauliString>{s};
    for (const auto& b : base) {
      if (closure) {
        auto c = identity_closure(b);
        out.insert(out.end(), c.begin(), c.end());
      } else {
        out.push_back(b);
      }
    }
  }
  return ObservableBasis(std::move(out));
}

std::vector<std::string> ObservableBasis::labels() const {
  std::vector<std::string> out;
  for (const auto& o : observables_) out.push_back(o.label());
  return out;
}

bool ObservableBasis::contains(const std::string& label) const {
  return std::any_of(observables_.begin(), observables_.end(), [&](const PauliString& o) { return o.label() == label; });
}

ObservableBasis measurement_setting_closure(const PauliString& setting) {
  if (setting.weight() != setting.qubits())
    throw std::invalid_argument("measurement setting '" + setting.label() + "' contains identity letters");
  return ObservableBasis(identity_closure(setting));
}

ObservableBasis dicke_observable_stage(int stage) {
  static const char* settings[] = {"XXXX", "YYYY", "ZZZZ", "XXYY", "XXZZ", "YYZZ"};
  if (stage < 1 || stage > 6) throw std::invalid_argument("Dicke observable stage must be in [1, 6]");
  std::vector<PauliString> s;
  for (int k = 0; k < stage; ++k) s.push_back(PauliString::parse(settings[k]));
  return ObservableBasis::expand(s, true, true);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<MatrixEntry> pauli_entries(const PauliString& s) {
  const std::size_t d = std::size_t{1} << s.qubits();
  const PauliMask m = s.mask();
  std::vector<MatrixEntry> out;
  out.reserve(d);
  for (std::uint64_t r = 0; r < d; ++r) out.push_back({r, r ^ m.x, m.entry(r)});
  return out;
}

int transpose_sign(const PauliString& s, const Bipartition& m) { return (s.y_count_in(m) % 2) ? -1 : 1; }

HermitianOperator pt(const HermitianOperator& a, const Bipartition& m) { return partial_transpose(a, m); }

// Projection onto span of the given labels: keeps those Pauli coefficients.
HermitianOperator project_onto(const HermitianOperator& w, const std::vector<std::string>& labels) {
  const int n = w.parties();
  PauliSum s(n);
  const double norm = std::ldexp(1.0, -n);
  for (const auto& label : labels) {
    const PauliString p = PauliString::parse(label);
    s.add(label, pauli_trace(p, w.matrix()).real() * norm);
  }
  return s.op();
}

struct WitnessProgram {
  SdpProblem problem;
  std::vector<Bipartition> parts;
  std::vector<int> p_block;  // -1 when P is absent
  std::vector<int> q_block;
  bool complex_blocks = true;
  std::size_t dim = 0;
};

WitnessProgram build_program(const DensityMatrix& rho, const WitnessOptions& opt, bool complex_blocks) {
  const HermitianOperator& r = rho.op();
  if (!r.all_qubits()) throw DimensionError("witness SDP needs a qubit state");
  const int n = r.parties();
  if (n < 2) throw DimensionError("witness SDP needs at least two qubits");
  if (n > 6) throw DimensionError("witness SDP supports at most six qubits");

  WitnessProgram wp;
  wp.complex_blocks = complex_blocks;
  wp.dim = r.dim();
  wp.parts = opt.all_bipartitions ? all_bipartitions(n) : canonical_bipartitions(n);
  const int side = static_cast<int>(complex_blocks ? 2 * wp.dim : wp.dim);
  const bool bounded = opt.mode == WitnessMode::Monotone;
  const bool has_p = opt.mode != WitnessMode::FullyPpt;
  for (std::size_t k = 0; k < wp.parts.size(); ++k) {
    wp.p_block.push_back(has_p ? wp.problem.add_block(side, bounded) : -1);
    wp.q_block.push_back(wp.problem.add_block(side, bounded));
  }

  // Objective tr(W rho) = tr(P_0 rho) + tr(Q_0 T_0(rho)).
  const Bipartition& m0 = wp.parts.front();
  if (has_p) add_trace_terms(wp.problem.objective, wp.p_block[0], r.matrix(), complex_blocks);
  add_trace_terms(wp.problem.objective, wp.q_block[0], pt(r, m0).matrix(), complex_blocks);

  // Pauli coordinates of P_0 + T_0(Q_0) - P_k - T_k(Q_k) vanish. T_M maps a
  // Pauli string to itself up to the sign (-1)^(number of Y on M). Real
  // arithmetic only needs the strings with an even number of Y.
  std::vector<PauliString> strings;
  for (auto& s : all_pauli_strings(n))
    if (complex_blocks || s.count(Pauli::Y) % 2 == 0) strings.push_back(std::move(s));

  for (const auto& s : strings) {
    const auto entries = pauli_entries(s);
    const double s0 = transpose_sign(s, m0);
    for (std::size_t k = 1; k < wp.parts.size(); ++k) {
      std::vector<SdpTerm> terms;
      if (has_p) add_trace_terms(terms, wp.p_block[0], wp.dim, entries, complex_blocks, 1.0);
      add_trace_terms(terms, wp.q_block[0], wp.dim, entries, complex_blocks, s0);
      if (has_p) add_trace_terms(terms, wp.p_block[k], wp.dim, entries, complex_blocks, -1.0);
      add_trace_terms(terms, wp.q_block[k], wp.dim, entries, complex_blocks, -transpose_sign(s, wp.parts[k]));
      wp.problem.add_constraint(std::move(terms), 0.0);
    }
  }

  if (opt.mode == WitnessMode::Restricted) {
    const ObservableBasis& basis = *opt.basis;
    for (const auto& s : strings) {
      if (basis.contains(s.label())) continue;
      const auto entries = pauli_entries(s);
      std::vector<SdpTerm> terms;
      if (has_p) add_trace_terms(terms, wp.p_block[0], wp.dim, entries, complex_blocks, 1.0);
      add_trace_terms(terms, wp.q_block[0], wp.dim, entries, complex_blocks, transpose_sign(s, m0));
      wp.problem.add_constraint(std::move(terms), 0.0);
    }
  }

  if (opt.mode != WitnessMode::Monotone) {
    // tr W = tr P_0 + tr Q_0 = 1
    const ComplexMatrix id = ComplexMatrix::identity(wp.dim);
    std::vector<SdpTerm> terms;
    if (has_p) add_trace_terms(terms, wp.p_block[0], id, complex_blocks);
    add_trace_terms(terms, wp.q_block[0], id, complex_blocks);
    wp.problem.add_constraint(std::move(terms), 1.0);
  }
  return wp;
}

bool use_real(const DensityMatrix& rho, const WitnessOptions& opt) {
  switch (opt.arithmetic) {
    case Arithmetic::Complex: return false;
    case Arithmetic::Real:
      if (rho.imaginary_part() > 1e-13) throw std::invalid_argument("real arithmetic requested for a complex state");
      return true;
    case Arithmetic::Auto: return rho.imaginary_part() <= 1e-13;
  }
  return false;
}

}  // namespace

DetectionResult detect(const DensityMatrix& rho, const WitnessOptions& opt) {
  const int n = rho.parties();
  if (opt.mode == WitnessMode::Restricted) {
    if (!opt.basis) throw std::invalid_argument("restricted mode needs an observable basis");
    if (opt.basis->qubits() != n) throw DimensionError("observable basis and state differ in qubit count");
    if (!opt.basis->contains(PauliString::identity(n).label()))
      throw SolverError(SdpStatus::Infeasible, "identity is not in the observable span, so tr W = 1 is unreachable");
  }
  const bool real = use_real(rho, opt);
  WitnessProgram wp = build_program(rho, opt, !real);
  const SdpSolution sol = solve(wp.problem, opt.sdp);
  if (sol.status != SdpStatus::Optimal)
    throw SolverError(sol.status, "witness SDP ended with status " + to_string(sol.status) + " (" + sol.message +
                                      ", gap " + std::to_string(sol.duality_gap) + ", primal infeasibility " +
                                      std::to_string(sol.primal_infeasibility) + ", dual infeasibility " +
                                      std::to_string(sol.dual_infeasibility) + ")");

  const std::vector<int> dims = rho.op().dims();
  auto value_of = [&](int block) {
    return HermitianOperator::hermitized(dims, block_value(sol.x[block], wp.complex_blocks));
  };
  const HermitianOperator zero = HermitianOperator(dims, ComplexMatrix(wp.dim, wp.dim));
  const Bipartition& m0 = wp.parts.front();
  const HermitianOperator p0 = wp.p_block[0] >= 0 ? value_of(wp.p_block[0]) : zero;
  HermitianOperator w = p0 + pt(value_of(wp.q_block[0]), m0);

  DetectionResult res;
  res.certificate.mode = opt.mode;
  if (opt.mode == WitnessMode::Restricted) {
    res.certificate.observables = opt.basis->labels();
    w = project_onto(w, res.certificate.observables);
  }
  for (std::size_t k = 0; k < wp.parts.size(); ++k) {
    HermitianOperator p = wp.p_block[k] >= 0 ? value_of(wp.p_block[k]) : zero;
    HermitianOperator q = pt(w - p, wp.parts[k]);
    res.certificate.blocks.push_back({wp.parts[k], std::move(p), std::move(q)});
  }
  res.certificate.w = std::move(w);
  res.value = trace_product(res.certificate.w, rho.op());
  res.verdict = res.value < -opt.decision_threshold ? Verdict::GenuineMultipartiteEntangled : Verdict::PptMixture;
  res.status = sol.status;
  res.iterations = sol.iterations;
  res.real_arithmetic = real;
  return res;
}

DetectionResult detect_gme(const DensityMatrix& rho, const SdpSettings& sdp) {
  WitnessOptions o;
  o.sdp = sdp;
  return detect(rho, o);
}

DetectionResult detect_fully_ppt(const DensityMatrix& rho, const SdpSettings& sdp) {
  WitnessOptions o;
  o.mode = WitnessMode::FullyPpt;
  o.sdp = sdp;
  return detect(rho, o);
}

DetectionResult detect_restricted(const DensityMatrix& rho, const ObservableBasis& basis, const SdpSettings& sdp) {
  WitnessOptions o;
  o.mode = WitnessMode::Restricted;
  o.basis = basis;
  o.sdp = sdp;
  return detect(rho, o);
}

double gme_negativity(const DensityMatrix& rho, DetectionResult* details, const SdpSettings& sdp) {
  WitnessOptions o;
  o.mode = WitnessMode::Monotone;
  o.sdp = sdp;
  DetectionResult r = detect(rho, o);
  const double n = std::max(0.0, -r.value);
  if (details) *details = std::move(r);
  return n;
}

ToleranceResult white_noise_tolerance(std::span<const cplx> psi, const WitnessOptions& options, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bisection width must be positive");
  ToleranceResult t;
  auto detected = [&](double p) {
    ++t.solves;
    return detect(white_noise_mix(psi, p), options).verdict == Verdict::GenuineMultipartiteEntangled;
  };
  if (!detected(0.0)) return t;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (detected(mid)) lo = mid;
    else hi = mid;
  }
  t.lo = lo;
  t.hi = hi;
  t.p = 0.5 * (lo + hi);
  return t;
}

// ---------------------------------------------------------------------------

VerificationReport verify_certificate(const WitnessCertificate& cert, double tol) {
  VerificationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.passed = false;
    rep.failures.push_back(std::move(msg));
  };
  const HermitianOperator& w = cert.w;
  if (w.dim() == 0 || !w.all_qubits()) {
    fail("witness is empty or not a qubit operator");
    return rep;
  }
  const int n = w.parties();
  const double scale = 1.0 + w.matrix().max_abs();
  rep.min_eig_p = rep.min_eig_q = std::numeric_limits<double>::infinity();
  rep.max_eig_p = rep.max_eig_q = -std::numeric_limits<double>::infinity();

  std::set<std::uint64_t> covered;
  for (const auto& blk : cert.blocks) {
    if (blk.m.parties() != n || blk.p.dims() != w.dims() || blk.q.dims() != w.dims()) {
      fail("block for " + blk.m.to_string() + " has mismatched dimensions");
      continue;
    }
    ++rep.bipartitions_checked;
    covered.insert(blk.m.canonical().mask());
    const ComplexMatrix recon = blk.p.matrix() + partial_transpose(blk.q.matrix(), blk.q.dims(), blk.m);
    const double resid = max_abs_diff(w.matrix(), recon);
    rep.decomposition_residual = std::max(rep.decomposition_residual, resid);
    if (resid > tol * scale) fail("W != P + T_M(Q) for " + blk.m.to_string() + " (residual " + std::to_string(resid) + ")");
    const auto ep = hermitian_eigenvalues(blk.p.matrix());
    const auto eq = hermitian_eigenvalues(blk.q.matrix());
    rep.min_eig_p = std::min(rep.min_eig_p, ep.front());
    rep.max_eig_p = std::max(rep.max_eig_p, ep.back());
    rep.min_eig_q = std::min(rep.min_eig_q, eq.front());
    rep.max_eig_q = std::max(rep.max_eig_q, eq.back());
    if (ep.front() < -tol) fail("P_M not PSD for " + blk.m.to_string() + " (min eigenvalue " + std::to_string(ep.front()) + ")");
    if (eq.front() < -tol) fail("Q_M not PSD for " + blk.m.to_string() + " (min eigenvalue " + std::to_string(eq.front()) + ")");
    if (cert.mode == WitnessMode::Monotone) {
      if (ep.back() > 1.0 + tol) fail("P_M exceeds identity for " + blk.m.to_string());
      if (eq.back() > 1.0 + tol) fail("Q_M exceeds identity for " + blk.m.to_string());
    }
    if (cert.mode == WitnessMode::FullyPpt) {
      const double pn = blk.p.matrix().max_abs();
      rep.p_norm = std::max(rep.p_norm, pn);
      if (pn > tol) fail("fully PPT certificate has nonzero P_M for " + blk.m.to_string());
    }
  }
  for (const auto& m : canonical_bipartitions(n))
    if (!covered.count(m.mask())) fail("no decomposition given for " + m.to_string());

  if (cert.mode != WitnessMode::Monotone) {
    rep.trace_defect = std::abs(w.trace() - 1.0);
    if (rep.trace_defect > tol) fail("tr W = " + std::to_string(w.trace()) + ", expected 1");
  }
  if (cert.mode == WitnessMode::Restricted) {
    std::set<std::string> allowed(cert.observables.begin(), cert.observables.end());
    const PauliSum expansion = pauli_expansion(w, 0.0);
    for (const auto& [label, c] : expansion.terms())
      if (!allowed.count(label)) rep.span_residual = std::max(rep.span_residual, std::abs(c));
    if (rep.span_residual > tol) fail("witness leaves the observable span (coefficient " + std::to_string(rep.span_residual) + ")");
  }
  if (cert.blocks.empty()) {
    rep.min_eig_p = rep.min_eig_q = rep.max_eig_p = rep.max_eig_q = 0.0;
  }
  return rep;
}

// ---------------------------------------------------------------------------

VolumeResult volume_estimate(std::size_t samples, Measure measure, WitnessMode mode, std::uint64_t seed, int qubits,
                             int jobs) {
  if (samples < 1) throw std::invalid_argument("volume_estimate needs at least one sample");
  if (mode == WitnessMode::Restricted) throw std::invalid_argument("volume_estimate does not take restricted mode");
  const CounterRng root(seed);
  const int dim = 1 << qubits;
  WitnessOptions opt;
  opt.mode = mode;
  std::size_t detected = 0;
  bool failed = false;
  std::string failure;
  const long long count = static_cast<long long>(samples);
#pragma omp parallel for schedule(dynamic, 4) num_threads(std::max(1, jobs)) reduction(+ : detected)
  for (long long i = 0; i < count; ++i) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(i));
    const DensityMatrix rho =
        measure == Measure::HilbertSchmidt ? random_density_hs(dim, rng) : random_density_bures(dim, rng);
    try {
      const bool hit = mode == WitnessMode::Monotone ? gme_negativity(rho) > opt.decision_threshold
                                                     : detect(rho, opt).verdict == Verdict::GenuineMultipartiteEntangled;
      if (hit) ++detected;
    } catch (const std::exception& e) {
#pragma omp critical(gme_volume_failure)
      {
        failed = true;
        failure = "sample " + std::to_string(i) + ": " + e.what();
      }
    }
  }
  if (failed) throw SolverError(SdpStatus::NumericalFailure, "volume_estimate: " + failure);
  VolumeResult v;
  v.samples = samples;
  v.detected = detected;
  const double nn = static_cast<double>(samples);
  v.fraction = static_cast<double>(detected) / nn;
  v.sigma = std::sqrt(v.fraction * (1.0 - v.fraction) / nn);
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / nn;
  const double centre = (v.fraction + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(v.fraction * (1.0 - v.fraction) / nn + z * z / (4.0 * nn * nn)) / denom;
  v.ci_low = std::max(0.0, centre - half);
  v.ci_high = std::min(1.0, centre + half);
  return v;
}

// ---------------------------------------------------------------------------

DecompositionFit fit_decomposition(const HermitianOperator& w, const Bipartition& m, const SdpSettings& sdp) {
  if (!w.all_qubits() || w.parties() != m.parties()) throw DimensionError("fit_decomposition: operator and bipartition differ");
  const int n = w.parties();
  const std::size_t d = w.dim();
  bool real = true;
  for (const auto& x : w.matrix().data()) real = real && std::abs(x.imag()) <= 1e-13;
  const bool cpx = !real;
  const int side = static_cast<int>(cpx ? 2 * d : d);

  SdpProblem prob;
  const int pb = prob.add_block(side);
  const int qb = prob.add_block(side);
  const int sb = prob.add_block(1);
  prob.objective.push_back({sb, 0, 0, 1.0});
  // Q + T_M(P) - s 1 = T_M(W), coordinate by coordinate.
  for (const auto& s : all_pauli_strings(n)) {
    if (!cpx && s.count(Pauli::Y) % 2) continue;
    const auto entries = pauli_entries(s);
    const double sign = transpose_sign(s, m);
    std::vector<SdpTerm> terms;
    add_trace_terms(terms, qb, d, entries, cpx, 1.0);
    add_trace_terms(terms, pb, d, entries, cpx, sign);
    if (s.is_identity()) terms.push_back({sb, 0, 0, -static_cast<double>(d)});
    const double rhs = sign * pauli_trace(s, w.matrix()).real();
    prob.add_constraint(std::move(terms), rhs);
  }
  const SdpSolution sol = solve(prob, sdp);
  if (sol.status != SdpStatus::Optimal)
    throw SolverError(sol.status, "decomposition fit ended with status " + to_string(sol.status) + " (" + sol.message + ")");
  DecompositionFit fit;
  fit.p = HermitianOperator::hermitized(w.dims(), block_value(sol.x[pb], cpx));
  fit.q = HermitianOperator::hermitized(w.dims(), partial_transpose(w.matrix() - fit.p.matrix(), w.dims(), m));
  fit.violation = std::max(0.0, -min_eigenvalue(fit.q));
  return fit;
}

HermitianOperator rounded_dicke_witness() {
  const double a1 = 0.014, a2 = -0.095, a3 = 0.0046, a4 = 0.16, a5 = -0.14, a6 = -0.15;
  PauliSum s(4);
  s.add("IIII", 1.0);
  s.add("XXXX", a1);
  s.add("YYYY", a1);
  s.add("ZZZZ", a2);
  auto add_perms = [&s](const char* setting, double c) {
    for (const auto& p : distinct_permutations(PauliString::parse(setting))) s.add(p.label(), c);
  };
  add_perms("XXYY", a3);
  add_perms("ZZYY", a4);
  add_perms("ZZXX", a4);
  add_perms("XXII", a5);
  add_perms("YYII", a5);
  add_perms("ZZII", a6);
  return (1.0 / 16.0 * s).op();
}

}  // namespace gme
