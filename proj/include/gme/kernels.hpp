#pragma once

// Dense inner kernels of the interior-point solver. Each kernel has an OpenMP
// version used by the solver and a plain serial reference used by tests and
// benchmarks to check it.

#include <span>
#include <vector>

#include "gme/linalg.hpp"

namespace gme::kernels {

/// The part of one constraint that lives in one block. Entries satisfy
/// row <= col and contribute value * X(row, col).
struct BlockPart {
  int block = 0;
  std::vector<int> row;
  std::vector<int> col;
  std::vector<double> value;
  /// Sorted distinct indices appearing in row or col.
  std::vector<int> support;
};

struct SparseConstraint {
  std::vector<BlockPart> parts;
};

/// For every block, the (constraint, part) pairs touching it.
struct BlockIncidence {
  std::vector<std::vector<std::pair<int, int>>> users;
  static BlockIncidence build(std::span<const SparseConstraint> a, std::size_t blocks);
};

/// <A_i, G>
double inner(const BlockPart& part, const RealMatrix& g);

/// Schur complement M_ij = <A_i, W A_j W>, W block-diagonal symmetric.
void schur_parallel(std::span<const SparseConstraint> a, const BlockIncidence& inc, std::span<const RealMatrix> w,
                    RealMatrix& m);
/// Reference: every A_j densified and W A_j W formed with full products.
void schur_serial(std::span<const SparseConstraint> a, std::span<const RealMatrix> w, RealMatrix& m);

/// In-place lower Cholesky factor (upper triangle zeroed). False on breakdown.
bool cholesky_parallel(RealMatrix& a, std::size_t block = 64);
bool cholesky_serial(RealMatrix& a);

/// Solves L L^T x = b in place.
void cholesky_solve(const RealMatrix& l, std::span<double> b);

}  // namespace gme::kernels
