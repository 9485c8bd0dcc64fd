#pragma once

// Witness SDPs for genuine multipartite entanglement.
//
// A witness W is fully decomposable when for every bipartition M it splits as
// W = P_M + T_M(Q_M) with P_M, Q_M >= 0. Such a W is nonnegative on every
// mixture of states that are PPT across some cut, so tr(W rho) < 0 certifies
// that rho is genuinely multipartite entangled. The detection SDP minimizes
// tr(W rho) over such witnesses with tr W = 1; only bipartitions containing
// party 0 are needed because T_M and T_{complement M} differ by a full
// transpose, which preserves positivity.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gme/pauli.hpp"
#include "gme/sdp.hpp"
#include "gme/states.hpp"

namespace gme {

enum class WitnessMode { FullyDecomposable, FullyPpt, Restricted, Monotone };
enum class Verdict { GenuineMultipartiteEntangled, PptMixture };

std::string to_string(WitnessMode m);
std::string to_string(Verdict v);
WitnessMode parse_witness_mode(const std::string& s);

class SolverError : public std::runtime_error {
 public:
  SolverError(SdpStatus status, const std::string& what) : std::runtime_error(what), status_(status) {}
  SdpStatus status() const noexcept { return status_; }

 private:
  SdpStatus status_;
};

/// A set of Pauli strings spanning the allowed witnesses. Duplicates are
/// merged, so the elements are linearly independent as matrices.
class ObservableBasis {
 public:
  explicit ObservableBasis(std::vector<PauliString> observables);
  static ObservableBasis full(int n);
  /// Each setting contributes itself, optionally its distinct permutations,
  /// optionally every identity substitution of those.
  static ObservableBasis expand(const std::vector<PauliString>& settings, bool permutations, bool closure);

  int qubits() const noexcept { return n_; }
  const std::vector<PauliString>& observables() const noexcept { return observables_; }
  std::vector<std::string> labels() const;
  std::size_t size() const noexcept { return observables_.size(); }
  bool contains(const std::string& label) const;

 private:
  int n_ = 0;
  std::vector<PauliString> observables_;
};

/// Every string obtained from `setting` by replacing letters with identities.
ObservableBasis measurement_setting_closure(const PauliString& setting);

/// Four-qubit settings consumed in the order X^4, Y^4, Z^4, XXYY, XXZZ, YYZZ;
/// stage k uses the first k, each with permutations and identity closure.
ObservableBasis dicke_observable_stage(int stage);

struct BipartitionBlocks {
  Bipartition m;
  HermitianOperator p;
  HermitianOperator q;
};

struct WitnessCertificate {
  WitnessMode mode = WitnessMode::FullyDecomposable;
  HermitianOperator w;
  std::vector<BipartitionBlocks> blocks;
  /// Allowed Pauli labels in restricted mode, empty otherwise.
  std::vector<std::string> observables;
};

struct DetectionResult {
  double value = 0.0;
  Verdict verdict = Verdict::PptMixture;
  WitnessCertificate certificate;
  SdpStatus status = SdpStatus::Optimal;
  int iterations = 0;
  /// True when the real-symmetric reduction was used (real rho).
  bool real_arithmetic = false;
};

enum class Arithmetic { Auto, Complex, Real };

struct WitnessOptions {
  WitnessMode mode = WitnessMode::FullyDecomposable;
  /// Required in restricted mode.
  std::optional<ObservableBasis> basis;
  /// Use every proper bipartition instead of one representative per pair.
  bool all_bipartitions = false;
  /// Auto picks real arithmetic when rho is real; the optimum is the same.
  Arithmetic arithmetic = Arithmetic::Auto;
  SdpSettings sdp;
  /// Entangled iff the optimum is below minus this.
  double decision_threshold = 1e-7;
};

DetectionResult detect(const DensityMatrix& rho, const WitnessOptions& options = {});
DetectionResult detect_gme(const DensityMatrix& rho, const SdpSettings& sdp = {});
DetectionResult detect_fully_ppt(const DensityMatrix& rho, const SdpSettings& sdp = {});
/// Throws SolverError(Infeasible) when the identity is not in the basis:
/// tr W = 1 is then unreachable.
DetectionResult detect_restricted(const DensityMatrix& rho, const ObservableBasis& basis, const SdpSettings& sdp = {});

/// max(0, -min tr(rho W)) over witnesses with 0 <= P_M, Q_M <= 1.
double gme_negativity(const DensityMatrix& rho, DetectionResult* details = nullptr, const SdpSettings& sdp = {});

struct ToleranceResult {
  double p = 0.0;   // bracket midpoint
  double lo = 0.0;  // largest p seen detected
  double hi = 0.0;  // smallest p seen undetected
  int solves = 0;
};

/// Bisection on p for white_noise_mix(psi, p) until hi - lo <= width.
ToleranceResult white_noise_tolerance(std::span<const cplx> psi, const WitnessOptions& options = {},
                                      double width = 5e-4);

struct VerificationReport {
  bool passed = true;
  double decomposition_residual = 0.0;  // max_M ||W - P_M - T_M(Q_M)||_max
  double min_eig_p = 0.0;
  double min_eig_q = 0.0;
  double max_eig_p = 0.0;
  double max_eig_q = 0.0;
  double trace_defect = 0.0;   // |tr W - 1| (not used for the monotone)
  double p_norm = 0.0;         // max ||P_M||_max, must vanish for fully PPT
  double span_residual = 0.0;  // largest Pauli coefficient outside the basis
  int bipartitions_checked = 0;
  std::vector<std::string> failures;
};

VerificationReport verify_certificate(const WitnessCertificate& cert, double tolerance = 1e-7);

struct VolumeResult {
  std::size_t samples = 0;
  std::size_t detected = 0;
  double fraction = 0.0;
  double sigma = 0.0;     // binomial standard error
  double ci_low = 0.0;    // Wilson 95% interval
  double ci_high = 0.0;
};

enum class Measure { HilbertSchmidt, Bures };
std::string to_string(Measure m);
Measure parse_measure(const std::string& s);

/// Fraction of random states of `qubits` qubits detected as entangled. Sample
/// i uses CounterRng(seed).split(i), so results do not depend on `jobs`.
VolumeResult volume_estimate(std::size_t samples, Measure measure, WitnessMode mode, std::uint64_t seed,
                             int qubits = 3, int jobs = 1);

struct DecompositionFit {
  HermitianOperator p;
  HermitianOperator q;
  /// Smallest s >= 0 with T_M(W - P) + s 1 >= 0 for some P >= 0.
  double violation = 0.0;
};

/// Best split W = P + T_M(Q) of a fixed operator, allowing Q to be negative by
/// the reported violation.
DecompositionFit fit_decomposition(const HermitianOperator& w, const Bipartition& m, const SdpSettings& sdp = {});

/// The four-qubit Dicke witness with two-significant-figure coefficients
/// (alpha_1..alpha_6 = 0.014, -0.095, 0.0046, 0.16, -0.14, -0.15).
HermitianOperator rounded_dicke_witness();

}  // namespace gme
