#pragma once

// Analytic fully decomposable witnesses for linear cluster states.
//
// Qubits are 0-based here. Labels of graph-basis vectors are masks in which
// qubit q sits at qubit_bit(n, q); label_string() prints them qubit 0 first.

#include <cstdint>
#include <string>
#include <vector>

#include "gme/linalg.hpp"
#include "gme/states.hpp"

namespace gme {

/// Qubits of a linear cluster whose closed neighbourhoods are pairwise disjoint.
class BSet {
 public:
  /// Throws std::invalid_argument when fewer than two members are given,
  /// members repeat or fall outside [0, n), or closed neighbourhoods overlap.
  BSet(int n, std::vector<int> members);

  int qubits() const noexcept { return n_; }
  const std::vector<int>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

 private:
  int n_;
  std::vector<int> members_;
};

/// {0, 3, 6, ...} below n. Throws for n <= 3.
BSet default_bset(int n);

/// Sum of graph-basis projectors with at least two excitations inside B.
HermitianOperator build_pplus(const BSet& b);

/// 1/2 - |Cl_n><Cl_n| - P_+ / 2
HermitianOperator build_cluster_witness(const BSet& b);

/// What a step of the P_M construction did with the window around beta_i.
enum class PmCase {
  EdgeFlip,       // two-qubit window split by the cut: flip the neighbour
  EdgeKeep,       // two-qubit window on one side
  FlipRight,      // 110 or 001
  FlipBoth,       // 010 or 101
  FlipLeft,       // 100 or 011
  Keep,           // 000 or 111
};

std::string to_string(PmCase c);
bool changes(PmCase c) noexcept;

struct PmStep {
  int beta = 0;
  /// Membership bits of the closed neighbourhood, left to right.
  std::string window;
  PmCase kind = PmCase::Keep;
  /// Qubits whose Z conjugation was added (empty when nothing changed).
  std::vector<int> flips;
};

struct PmConstruction {
  Bipartition m;
  std::vector<PmStep> steps;
  /// Number of steps that changed the running operator.
  int r = 0;
  /// 1-based index of the last changing step, 0 if none.
  int t = 0;
  /// Graph-basis labels whose projectors sum to P_M.
  std::vector<std::uint64_t> labels;
  HermitianOperator p_m;
};

PmConstruction construct_pm(const BSet& b, const Bipartition& m);

/// Qubit q of the label at position q.
std::string label_string(int n, std::uint64_t label);

/// sum_a |a><a| over graph-basis vectors of the linear cluster.
HermitianOperator graph_projector_sum(int n, const std::vector<std::uint64_t>& labels);

struct BipartitionCheck {
  Bipartition m;
  int r = 0;
  double min_eig_p = 0.0;
  double min_eig_q = 0.0;
  bool passed = false;
};

struct DecomposabilityReport {
  std::vector<BipartitionCheck> checks;
  int passed = 0;
  double min_eig_q = 0.0;
  double min_eig_p = 0.0;
  /// Index into checks of the smallest Q_M eigenvalue.
  std::size_t worst = 0;
  bool all_passed() const noexcept { return passed == static_cast<int>(checks.size()); }
};

/// For every canonical M: P_M from construct_pm, Q_M = T_M(W - P_M), both PSD
/// within `tolerance`. Bipartitions are checked concurrently on `jobs` threads.
DecomposabilityReport verify_full_decomposability(const HermitianOperator& w, const BSet& b, double tolerance = 1e-9,
                                                  int jobs = 1);

/// 1 / (1 - 2^(1-n) + (k+1) 2^-k) with k = floor((n+2)/3).
double noise_tolerance_formula(int n);

}  // namespace gme
