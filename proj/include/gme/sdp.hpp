#pragma once

// Block-diagonal semidefinite programs in the primal standard form
//
//   minimize    sum_b <C_b, X_b>
//   subject to  sum_b <A_ib, X_b> = b_i,   X_b symmetric PSD,
//
// solved by an infeasible-start primal-dual interior-point method with
// Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
//
// A linear functional is a list of terms (block, row, col, value), each
// contributing value * X_block(row, col). Terms with row > col are mirrored,
// duplicates accumulate.

#include <string>
#include <vector>

#include "gme/linalg.hpp"

namespace gme {

enum class SdpStatus { Optimal, Infeasible, Unbounded, MaxIterations, NumericalFailure };

std::string to_string(SdpStatus s);

struct SdpTerm {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct SdpBlock {
  int size = 0;
  /// Adds 0 <= X <= I through an internal slack block.
  bool bounded = false;
};

struct SdpConstraint {
  std::vector<SdpTerm> terms;
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<SdpBlock> blocks;
  std::vector<SdpTerm> objective;
  std::vector<SdpConstraint> constraints;

  int add_block(int size, bool bounded = false);
  /// Returns the constraint index.
  int add_constraint(std::vector<SdpTerm> terms, double rhs);
  /// Throws std::invalid_argument when a term references an undeclared block
  /// or entry, or a coefficient is not finite.
  void validate() const;
};

struct SdpSettings {
  double gap_tolerance = 1e-8;
  double feasibility_tolerance = 1e-8;
  int max_iterations = 200;
  /// Dual objective above this reports Infeasible, primal below minus this Unbounded.
  double divergence = 1e8;
  /// Drop linearly dependent equality rows before solving.
  bool presolve = false;
  /// Use the serial reference kernels instead of the OpenMP ones.
  bool reference_kernels = false;
  /// One line per iteration on stderr.
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::NumericalFailure;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// |primal - dual|
  double duality_gap = 0.0;
  /// <X, Z>
  double complementarity = 0.0;
  /// ||b - A(X)|| / (1 + ||b||)
  double primal_infeasibility = 0.0;
  /// ||C - A^T(y) - Z||_F / (1 + ||C||_F)
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<RealMatrix> x;  // one per declared block
  std::vector<RealMatrix> z;
  std::vector<double> y;      // one per declared constraint
  std::vector<int> dropped_constraints;
  std::string message;
};

SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings = {});

/// [[Re H, -Im H], [Im H, Re H]]
RealMatrix realify(const ComplexMatrix& h);
RealMatrix realify(const HermitianOperator& h);
/// Inverse compression of realify: ((X11 + X22) + i (X21 - X12)) / 2.
/// Maps PSD to PSD and 0 <= X <= I into 0 <= H <= I.
ComplexMatrix complexify(const RealMatrix& x);

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  cplx value;
};

/// Appends terms for scale * Re tr(C H) where H is the Hermitian matrix held
/// by `block`: complexify(X) when complex_block, X itself otherwise.
/// C is given by its nonzero entries (both triangles).
void add_trace_terms(std::vector<SdpTerm>& out, int block, std::size_t dim, std::span<const MatrixEntry> c,
                     bool complex_block, double scale = 1.0);
void add_trace_terms(std::vector<SdpTerm>& out, int block, const ComplexMatrix& c, bool complex_block,
                     double scale = 1.0);
/// The Hermitian matrix a block represents.
ComplexMatrix block_value(const RealMatrix& x, bool complex_block);

}  // namespace gme
