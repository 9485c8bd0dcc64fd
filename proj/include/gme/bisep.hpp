#pragma once

// Certificates of biseparability for three qubits. A state that splits as
// sum_k p_k rho_k, with rho_k separable across {k} | rest, is biseparable.
// Restricting the two-qubit side to its symmetric (triplet) subspace makes
// each rho_k a 2 x 3 system, where PPT already implies separability.

#include <optional>
#include <string>
#include <vector>

#include "gme/sdp.hpp"
#include "gme/states.hpp"

namespace gme {

struct BisepComponent {
  /// The single-qubit side of the cut.
  Bipartition m;
  double weight = 0.0;
  DensityMatrix state;
};

struct BisepDecomposition {
  std::vector<BisepComponent> parts;
  DensityMatrix target;
};

/// Searches for a decomposition with every component supported on
/// C^2 (x) Sym and PPT. Returns nothing when the SDP is infeasible, which
/// proves nothing about the state. Throws SolverError on solver failure.
std::optional<BisepDecomposition> certify_biseparable_sym(const DensityMatrix& rho, const SdpSettings& sdp = {});

/// The noise level above which the white-noise W state has the symmetric
/// decomposition below: (367 - 71 sqrt 3 - sqrt(2894 sqrt 3 - 2988)) / 382.
double critical_p_w3();

/// (1 - p) |W3><W3| + p 1/8
DensityMatrix w3_noisy(double p);

/// The A|BC component with spectrum p/8, p/8, 3p/8, 1 - 5p/8 on
/// |000>, |111>, (2 sqrt2 |1>|psi+> - |011>)/3, a|0>|psi+> + sqrt(1-a^2)|100>.
HermitianOperator w3_component(double a, double p);

struct W3Analytic {
  double a = 0.0;
  BisepDecomposition decomposition;
};

/// Equal-weight decomposition of w3_noisy(p) into w3_component(a, p) and its
/// two qubit relabelings. a is the root of one matrix element of the matching
/// residual; the full residual and PPT are then checked. Throws
/// std::domain_error when no root gives a PPT component (p below critical).
W3Analytic w3_analytic_decomposition(double p, double tolerance = 1e-10);

struct BisepReport {
  bool passed = true;
  double weight_defect = 0.0;        // |sum p_k - 1|
  double min_weight = 0.0;
  double reconstruction_residual = 0.0;  // max |sum p_k rho_k - rho|
  double min_pt_eigenvalue = 0.0;        // over all components
  double support_residual = 0.0;         // max |(1 - Pi) rho_k (1 - Pi)|
  std::vector<std::string> failures;
};

/// Re-checks a decomposition from scratch: weights, reconstruction, PPT
/// across each cut, support on the symmetric subspace of the pair.
BisepReport verify_decomposition(const BisepDecomposition& d, double reconstruction_tol = 1e-8,
                                 double ppt_tol = 1e-10, double support_tol = 1e-8);

}  // namespace gme
