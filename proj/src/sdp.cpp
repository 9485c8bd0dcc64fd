#include "gme/sdp.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "gme/kernels.hpp"

namespace gme {

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::Unbounded: return "Unbounded";
    case SdpStatus::MaxIterations: return "MaxIterations";
    case SdpStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

int SdpProblem::add_block(int size, bool bounded) {
  if (size < 1) throw std::invalid_argument("SDP block size must be positive");
  blocks.push_back({size, bounded});
  return static_cast<int>(blocks.size()) - 1;
}

int SdpProblem::add_constraint(std::vector<SdpTerm> terms, double rhs) {
  constraints.push_back({std::move(terms), rhs});
  return static_cast<int>(constraints.size()) - 1;
}

void SdpProblem::validate() const {
  if (blocks.empty()) throw std::invalid_argument("SDP has no blocks");
  auto check = [this](const SdpTerm& t, const char* where) {
    if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
      throw std::invalid_argument(std::string(where) + " references an undeclared block");
    const int n = blocks[t.block].size;
    if (t.row < 0 || t.col < 0 || t.row >= n || t.col >= n)
      throw std::invalid_argument(std::string(where) + " references an entry outside its block");
    if (!std::isfinite(t.value)) throw std::invalid_argument(std::string(where) + " has a non-finite coefficient");
  };
  for (const auto& t : objective) check(t, "objective");
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) check(t, "constraint");
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint has a non-finite right-hand side");
  }
}

// ---------------------------------------------------------------------------

RealMatrix realify(const ComplexMatrix& h) {
  if (!h.square()) throw DimensionError("realify: matrix is not square");
  const std::size_t d = h.rows();
  RealMatrix r(2 * d, 2 * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const cplx v = h(i, j);
      r(i, j) = v.real();
      r(i, d + j) = -v.imag();
      r(d + i, j) = v.imag();
      r(d + i, d + j) = v.real();
    }
  return r;
}

RealMatrix realify(const HermitianOperator& h) { return realify(h.matrix()); }

ComplexMatrix complexify(const RealMatrix& x) {
  if (!x.square() || x.rows() % 2 != 0) throw DimensionError("complexify: side must be even");
  const std::size_t d = x.rows() / 2;
  ComplexMatrix h(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      h(i, j) = 0.5 * cplx(x(i, j) + x(d + i, d + j), x(d + i, j) - x(i, d + j));
  return hermitian_part(h);
}

ComplexMatrix block_value(const RealMatrix& x, bool complex_block) {
  return complex_block ? complexify(x) : hermitian_part(to_complex(x));
}

void add_trace_terms(std::vector<SdpTerm>& out, int block, std::size_t dim, std::span<const MatrixEntry> c,
                     bool complex_block, double scale) {
  auto push = [&](std::size_t p, std::size_t q, double v) {
    if (v == 0.0) return;
    out.push_back({block, static_cast<int>(std::min(p, q)), static_cast<int>(std::max(p, q)), v});
  };
  for (const auto& e : c) {
    if (e.row >= dim || e.col >= dim) throw DimensionError("add_trace_terms: entry outside the matrix");
    if (complex_block) {
      // tr(C complexify(X)) = <realify(C), X> / 2, summed entry by entry.
      const double re = 0.5 * scale * e.value.real();
      const double im = 0.5 * scale * e.value.imag();
      push(e.row, e.col, re);
      push(e.row, dim + e.col, -im);
      push(dim + e.row, e.col, im);
      push(dim + e.row, dim + e.col, re);
    } else {
      push(e.row, e.col, scale * e.value.real());
    }
  }
}

void add_trace_terms(std::vector<SdpTerm>& out, int block, const ComplexMatrix& c, bool complex_block, double scale) {
  if (!c.square()) throw DimensionError("add_trace_terms: matrix is not square");
  std::vector<MatrixEntry> entries;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (c(i, j) != cplx{}) entries.push_back({i, j, c(i, j)});
  add_trace_terms(out, block, c.rows(), entries, complex_block, scale);
}

// ---------------------------------------------------------------------------

namespace {

using kernels::BlockPart;
using kernels::SparseConstraint;

struct Compiled {
  std::vector<int> sizes;            // all blocks, slack blocks appended
  std::size_t user_blocks = 0;
  std::vector<RealMatrix> c;         // dense objective per block
  std::vector<SparseConstraint> a;
  std::vector<double> b;
  std::vector<int> origin;           // user constraint index, or -1 for bound rows
};

SparseConstraint compile_terms(const std::vector<SdpTerm>& terms) {
  std::map<std::tuple<int, int, int>, double> merged;
  for (const auto& t : terms) {
    const int r = std::min(t.row, t.col);
    const int c = std::max(t.row, t.col);
    merged[{t.block, r, c}] += t.value;
  }
  SparseConstraint out;
  for (const auto& [key, v] : merged) {
    if (v == 0.0) continue;
    const auto [blk, r, c] = key;
    if (out.parts.empty() || out.parts.back().block != blk) out.parts.push_back(BlockPart{blk, {}, {}, {}, {}});
    auto& part = out.parts.back();
    part.row.push_back(r);
    part.col.push_back(c);
    part.value.push_back(v);
  }
  for (auto& part : out.parts) {
    part.support = part.row;
    part.support.insert(part.support.end(), part.col.begin(), part.col.end());
    std::sort(part.support.begin(), part.support.end());
    part.support.erase(std::unique(part.support.begin(), part.support.end()), part.support.end());
  }
  return out;
}

Compiled compile(const SdpProblem& p) {
  Compiled out;
  out.user_blocks = p.blocks.size();
  for (const auto& blk : p.blocks) out.sizes.push_back(blk.size);
  std::vector<int> slack(p.blocks.size(), -1);
  for (std::size_t k = 0; k < p.blocks.size(); ++k)
    if (p.blocks[k].bounded) {
      slack[k] = static_cast<int>(out.sizes.size());
      out.sizes.push_back(p.blocks[k].size);
    }
  for (int n : out.sizes) out.c.emplace_back(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (const auto& t : p.objective) {
    if (t.row == t.col) {
      out.c[t.block](t.row, t.row) += t.value;
    } else {
      out.c[t.block](t.row, t.col) += 0.5 * t.value;
      out.c[t.block](t.col, t.row) += 0.5 * t.value;
    }
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    out.a.push_back(compile_terms(p.constraints[i].terms));
    out.b.push_back(p.constraints[i].rhs);
    out.origin.push_back(static_cast<int>(i));
  }
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    if (slack[k] < 0) continue;
    const int n = p.blocks[k].size;
    for (int r = 0; r < n; ++r)
      for (int c = r; c < n; ++c) {
        out.a.push_back(compile_terms({{static_cast<int>(k), r, c, 1.0}, {slack[k], r, c, 1.0}}));
        out.b.push_back(r == c ? 1.0 : 0.0);
        out.origin.push_back(-1);
      }
  }
  return out;
}

// Removes rows whose functional is a combination of earlier rows (modified
// Gram-Schmidt in the space of symmetric block matrices). A dependent row whose
// right-hand side does not follow the same combination makes the system
// inconsistent.
bool presolve(Compiled& cp, std::vector<int>& dropped, double tol = 1e-9) {
  std::vector<std::size_t> offset(cp.sizes.size() + 1, 0);
  for (std::size_t k = 0; k < cp.sizes.size(); ++k) {
    const std::size_t n = static_cast<std::size_t>(cp.sizes[k]);
    offset[k + 1] = offset[k] + n * (n + 1) / 2;
  }
  const std::size_t dim = offset.back();
  auto svec = [&](const SparseConstraint& a) {
    std::vector<double> v(dim, 0.0);
    for (const auto& part : a.parts) {
      const std::size_t n = static_cast<std::size_t>(cp.sizes[part.block]);
      for (std::size_t e = 0; e < part.value.size(); ++e) {
        const std::size_t r = static_cast<std::size_t>(part.row[e]);
        const std::size_t c = static_cast<std::size_t>(part.col[e]);
        const std::size_t idx = offset[part.block] + r * n - r * (r - 1) / 2 + (c - r);
        // Frobenius inner product of the symmetric matrices.
        v[idx] += (r == c) ? part.value[e] : part.value[e] / std::sqrt(2.0);
      }
    }
    return v;
  };
  std::vector<std::vector<double>> basis;
  std::vector<double> basis_rhs;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < cp.a.size(); ++i) {
    std::vector<double> v = svec(cp.a[i]);
    double rhs = cp.b[i];
    const double original = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const double proj = std::inner_product(v.begin(), v.end(), basis[k].begin(), 0.0);
        if (proj == 0.0) continue;
        for (std::size_t e = 0; e < dim; ++e) v[e] -= proj * basis[k][e];
        rhs -= proj * basis_rhs[k];
      }
    const double residual = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (residual <= tol * std::max(1.0, original)) {
      if (std::abs(rhs) > 1e-7 * (1.0 + std::abs(cp.b[i]))) return false;
      dropped.push_back(cp.origin[i]);
      continue;
    }
    for (auto& x : v) x /= residual;
    basis.push_back(std::move(v));
    basis_rhs.push_back(rhs / residual);
    keep.push_back(i);
  }
  Compiled reduced;
  reduced.sizes = cp.sizes;
  reduced.user_blocks = cp.user_blocks;
  reduced.c = cp.c;
  for (std::size_t i : keep) {
    reduced.a.push_back(std::move(cp.a[i]));
    reduced.b.push_back(cp.b[i]);
    reduced.origin.push_back(cp.origin[i]);
  }
  cp = std::move(reduced);
  return true;
}

// --- small dense helpers on symmetric blocks --------------------------------

double frob_inner(const RealMatrix& a, const RealMatrix& b) {
  double s = 0.0;
  for (std::size_t e = 0; e < a.data().size(); ++e) s += a.data()[e] * b.data()[e];
  return s;
}

void symmetrize(RealMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

// Inverse of a lower-triangular matrix.
RealMatrix lower_inverse(const RealMatrix& l) {
  const std::size_t n = l.rows();
  RealMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += l(i, k) * inv(k, j);
      inv(i, j) = -s / l(i, i);
    }
  }
  return inv;
}

// One-sided Jacobi: K V = U diag(s). Returns s and V.
void one_sided_svd(RealMatrix k, std::vector<double>& s, RealMatrix& v) {
  const std::size_t n = k.cols();
  const std::size_t rows = k.rows();
  v = RealMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          const double kp = k(r, p);
          const double kq = k(r, q);
          alpha += kp * kp;
          beta += kq * kq;
          gamma += kp * kq;
        }
        if (gamma == 0.0 || std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (std::size_t r = 0; r < rows; ++r) {
          const double kp = k(r, p);
          const double kq = k(r, q);
          k(r, p) = c * kp - sn * kq;
          k(r, q) = sn * kp + c * kq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vp = v(r, p);
          const double vq = v(r, q);
          v(r, p) = c * vp - sn * vq;
          v(r, q) = sn * vp + c * vq;
        }
      }
    if (!rotated) break;
  }
  s.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double nrm = 0.0;
    for (std::size_t r = 0; r < rows; ++r) nrm += k(r, j) * k(r, j);
    s[j] = std::sqrt(nrm);
  }
}

// Largest step a <= cap with X + a dX PSD, given the Cholesky factor of X.
double max_step(const RealMatrix& lx_inv, const RealMatrix& dx, double cap) {
  const RealMatrix s = lx_inv * dx * lx_inv.transpose();
  const auto eig = symmetric_eigen(s, false);
  const double lmin = eig.values.front();
  if (lmin >= 0.0) return cap;
  return std::min(cap, -1.0 / lmin);
}

bool cholesky_lower(const RealMatrix& x, RealMatrix& l) {
  l = x;
  return kernels::cholesky_serial(l);
}

class InteriorPoint {
 public:
  InteriorPoint(Compiled cp, const SdpSettings& settings)
      : cp_(std::move(cp)), s_(settings), nb_(cp_.sizes.size()), m_(cp_.a.size()) {
    inc_ = kernels::BlockIncidence::build(cp_.a, nb_);
    for (int n : cp_.sizes) total_dim_ += static_cast<double>(n);
    b_norm_ = std::sqrt(std::inner_product(cp_.b.begin(), cp_.b.end(), cp_.b.begin(), 0.0));
    for (const auto& c : cp_.c) c_norm_ += frob_inner(c, c);
    c_norm_ = std::sqrt(c_norm_);
  }

  SdpSolution run();

 private:
  // A(X)
  std::vector<double> apply_a(const std::vector<RealMatrix>& x) const {
    std::vector<double> out(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& part : cp_.a[i].parts) out[i] += kernels::inner(part, x[part.block]);
    return out;
  }

  // sum_i y_i A_i
  std::vector<RealMatrix> apply_at(const std::vector<double>& y) const {
    std::vector<RealMatrix> out;
    for (int n : cp_.sizes) out.emplace_back(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < m_; ++i) {
      if (y[i] == 0.0) continue;
      for (const auto& part : cp_.a[i].parts) {
        RealMatrix& o = out[part.block];
        for (std::size_t e = 0; e < part.value.size(); ++e) {
          const int r = part.row[e];
          const int c = part.col[e];
          if (r == c) {
            o(r, r) += y[i] * part.value[e];
          } else {
            const double h = 0.5 * y[i] * part.value[e];
            o(r, c) += h;
            o(c, r) += h;
          }
        }
      }
    }
    return out;
  }

  void initial_point();
  SdpSolution finish(SdpStatus status, std::string message);

  Compiled cp_;
  SdpSettings s_;
  std::size_t nb_;
  std::size_t m_;
  kernels::BlockIncidence inc_;
  double total_dim_ = 0.0;
  double b_norm_ = 0.0;
  double c_norm_ = 0.0;

  std::vector<RealMatrix> x_, z_;
  std::vector<double> y_;
  int iterations_ = 0;
};

void InteriorPoint::initial_point() {
  x_.clear();
  z_.clear();
  y_.assign(m_, 0.0);
  std::vector<double> a_norm(nb_ * m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i)
    for (const auto& part : cp_.a[i].parts) {
      double s = 0.0;
      for (std::size_t e = 0; e < part.value.size(); ++e)
        s += (part.row[e] == part.col[e] ? 1.0 : 0.5) * part.value[e] * part.value[e];
      a_norm[part.block * m_ + i] = std::sqrt(s);
    }
  for (std::size_t k = 0; k < nb_; ++k) {
    const double n = static_cast<double>(cp_.sizes[k]);
    const double rn = std::sqrt(n);
    double xi = std::max(10.0, rn);
    double eta = std::max({10.0, rn, std::sqrt(frob_inner(cp_.c[k], cp_.c[k]))});
    for (std::size_t i = 0; i < m_; ++i) {
      const double an = a_norm[k * m_ + i];
      if (an == 0.0) continue;
      xi = std::max(xi, rn * (1.0 + std::abs(cp_.b[i])) / (1.0 + an));
      eta = std::max(eta, an);
    }
    RealMatrix xi_mat = RealMatrix::identity(static_cast<std::size_t>(cp_.sizes[k]));
    xi_mat *= xi;
    RealMatrix eta_mat = RealMatrix::identity(static_cast<std::size_t>(cp_.sizes[k]));
    eta_mat *= eta;
    x_.push_back(std::move(xi_mat));
    z_.push_back(std::move(eta_mat));
  }
}

SdpSolution InteriorPoint::finish(SdpStatus status, std::string message) {
  SdpSolution sol;
  sol.status = status;
  sol.message = std::move(message);
  sol.iterations = iterations_;
  double pobj = 0.0;
  for (std::size_t k = 0; k < nb_; ++k) pobj += frob_inner(cp_.c[k], x_[k]);
  double dobj = 0.0;
  for (std::size_t i = 0; i < m_; ++i) dobj += cp_.b[i] * y_[i];
  double comp = 0.0;
  for (std::size_t k = 0; k < nb_; ++k) comp += frob_inner(x_[k], z_[k]);
  const auto ax = apply_a(x_);
  double rp = 0.0;
  for (std::size_t i = 0; i < m_; ++i) rp += (cp_.b[i] - ax[i]) * (cp_.b[i] - ax[i]);
  const auto aty = apply_at(y_);
  double rd = 0.0;
  for (std::size_t k = 0; k < nb_; ++k) {
    RealMatrix r = cp_.c[k] - aty[k] - z_[k];
    rd += frob_inner(r, r);
  }
  sol.primal_objective = pobj;
  sol.dual_objective = dobj;
  sol.duality_gap = std::abs(pobj - dobj);
  sol.complementarity = comp;
  sol.primal_infeasibility = std::sqrt(rp) / (1.0 + b_norm_);
  sol.dual_infeasibility = std::sqrt(rd) / (1.0 + c_norm_);
  for (std::size_t k = 0; k < cp_.user_blocks; ++k) {
    sol.x.push_back(x_[k]);
    sol.z.push_back(z_[k]);
  }
  sol.y = y_;  // compiled row order; remapped by solve()
  return sol;
}

SdpSolution InteriorPoint::run() {
  initial_point();
  std::vector<RealMatrix> g(nb_), ginv(nb_), w(nb_), lx_inv(nb_), lz_inv(nb_);
  std::vector<std::vector<double>> lambda(nb_);
  RealMatrix schur;
  int stalled = 0;

  for (iterations_ = 0; iterations_ <= s_.max_iterations; ++iterations_) {
    // Residuals and stopping tests.
    const auto ax = apply_a(x_);
    std::vector<double> rp(m_);
    double rp_norm = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      rp[i] = cp_.b[i] - ax[i];
      rp_norm += rp[i] * rp[i];
    }
    rp_norm = std::sqrt(rp_norm);
    const auto aty = apply_at(y_);
    std::vector<RealMatrix> rd(nb_);
    double rd_norm = 0.0, pobj = 0.0, dobj = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < nb_; ++k) {
      rd[k] = cp_.c[k] - aty[k] - z_[k];
      rd_norm += frob_inner(rd[k], rd[k]);
      pobj += frob_inner(cp_.c[k], x_[k]);
      comp += frob_inner(x_[k], z_[k]);
    }
    rd_norm = std::sqrt(rd_norm);
    for (std::size_t i = 0; i < m_; ++i) dobj += cp_.b[i] * y_[i];
    const double pinf = rp_norm / (1.0 + b_norm_);
    const double dinf = rd_norm / (1.0 + c_norm_);
    const double gap_scale = 1.0 + std::abs(pobj);
    if (s_.verbose)
      std::fprintf(stderr, "%3d  pobj % .10e  dobj % .10e  pinf %.2e  dinf %.2e  comp %.2e\n", iterations_, pobj, dobj, pinf,
                   dinf, comp);
    if (pinf <= s_.feasibility_tolerance && dinf <= s_.feasibility_tolerance &&
        std::abs(pobj - dobj) <= s_.gap_tolerance * gap_scale && comp <= s_.gap_tolerance * gap_scale)
      return finish(SdpStatus::Optimal, "converged");
    if (dobj > s_.divergence) return finish(SdpStatus::Infeasible, "dual objective diverged");
    if (pobj < -s_.divergence) return finish(SdpStatus::Unbounded, "primal objective diverged");
    if (iterations_ == s_.max_iterations) break;

    const double mu = comp / total_dim_;

    // Nesterov-Todd scaling per block.
    for (std::size_t k = 0; k < nb_; ++k) {
      RealMatrix lx, lz;
      if (!cholesky_lower(x_[k], lx) || !cholesky_lower(z_[k], lz))
        return finish(SdpStatus::NumericalFailure, "iterate lost positive definiteness");
      lx_inv[k] = lower_inverse(lx);
      lz_inv[k] = lower_inverse(lz);
      RealMatrix v;
      one_sided_svd(lz.transpose() * lx, lambda[k], v);
      const std::size_t n = lambda[k].size();
      RealMatrix vd = v;
      RealMatrix vdi = v.transpose();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          vd(i, j) /= std::sqrt(lambda[k][j]);
          vdi(i, j) *= std::sqrt(lambda[k][i]);
        }
      g[k] = lx * vd;          // G = L_X V D^{-1/2}
      ginv[k] = vdi * lx_inv[k];  // G^{-1} = D^{1/2} V^T L_X^{-1}
      w[k] = g[k] * g[k].transpose();
      symmetrize(w[k]);
    }

    if (s_.reference_kernels) kernels::schur_serial(cp_.a, w, schur);
    else kernels::schur_parallel(cp_.a, inc_, w, schur);
    // Near the optimum the Schur complement loses definiteness to rounding;
    // a growing diagonal shift keeps the step usable, the infeasible-start
    // iteration absorbs the error.
    bool ok = false;
    {
      double dmax = 0.0;
      for (std::size_t i = 0; i < m_; ++i) dmax = std::max(dmax, schur(i, i));
      const RealMatrix original = schur;
      for (double shift = 0.0; !ok && shift <= 1e-6;) {
        if (shift > 0.0) {
          schur = original;
          for (std::size_t i = 0; i < m_; ++i) schur(i, i) += shift * dmax;
        }
        ok = s_.reference_kernels ? kernels::cholesky_serial(schur) : kernels::cholesky_parallel(schur);
        shift = shift == 0.0 ? 1e-14 : shift * 100.0;
      }
    }
    if (!ok) return finish(SdpStatus::NumericalFailure, "Schur complement factorization broke down");

    // W Rd W does not change between predictor and corrector.
    std::vector<RealMatrix> wrdw(nb_);
    for (std::size_t k = 0; k < nb_; ++k) wrdw[k] = w[k] * rd[k] * w[k];
    const auto a_wrdw = apply_a(wrdw);

    auto direction = [&](const std::vector<RealMatrix>& rc, std::vector<RealMatrix>& dx, std::vector<double>& dy,
                         std::vector<RealMatrix>& dz) {
      const auto a_rc = apply_a(rc);
      dy.assign(m_, 0.0);
      for (std::size_t i = 0; i < m_; ++i) dy[i] = rp[i] - a_rc[i] + a_wrdw[i];
      kernels::cholesky_solve(schur, dy);
      const auto at_dy = apply_at(dy);
      dz.resize(nb_);
      dx.resize(nb_);
      for (std::size_t k = 0; k < nb_; ++k) {
        dz[k] = rd[k] - at_dy[k];
        symmetrize(dz[k]);
        dx[k] = rc[k] - w[k] * dz[k] * w[k];
        symmetrize(dx[k]);
      }
    };
    auto step_lengths = [&](const std::vector<RealMatrix>& dx, const std::vector<RealMatrix>& dz, double& ap,
                            double& ad) {
      ap = 1.0;
      ad = 1.0;
      for (std::size_t k = 0; k < nb_; ++k) {
        ap = std::min(ap, max_step(lx_inv[k], dx[k], 1.0));
        ad = std::min(ad, max_step(lz_inv[k], dz[k], 1.0));
      }
    };

    // Predictor.
    std::vector<RealMatrix> rc(nb_);
    for (std::size_t k = 0; k < nb_; ++k) rc[k] = x_[k] * -1.0;
    std::vector<RealMatrix> dx, dz;
    std::vector<double> dy;
    direction(rc, dx, dy, dz);
    double ap_aff = 0.0, ad_aff = 0.0;
    step_lengths(dx, dz, ap_aff, ad_aff);
    double comp_aff = 0.0;
    for (std::size_t k = 0; k < nb_; ++k) comp_aff += frob_inner(x_[k] + dx[k] * ap_aff, z_[k] + dz[k] * ad_aff);
    const double mu_aff = std::max(0.0, comp_aff / total_dim_);
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2));
    const double sigma = mu > 0.0 ? std::min(1.0, std::pow(mu_aff / mu, expon)) : 0.0;

    // Corrector in the scaled space.
    for (std::size_t k = 0; k < nb_; ++k) {
      const RealMatrix dxs = ginv[k] * dx[k] * ginv[k].transpose();
      const RealMatrix dzs = g[k].transpose() * dz[k] * g[k];
      const RealMatrix prod = dxs * dzs;
      const std::size_t n = lambda[k].size();
      RealMatrix t(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double r = -0.5 * (prod(i, j) + prod(j, i));
          if (i == j) r += sigma * mu - lambda[k][i] * lambda[k][i];
          t(i, j) = 2.0 * r / (lambda[k][i] + lambda[k][j]);
        }
      rc[k] = g[k] * t * g[k].transpose();
      symmetrize(rc[k]);
    }
    direction(rc, dx, dy, dz);
    double ap = std::numeric_limits<double>::infinity();
    double ad = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nb_; ++k) {
      ap = std::min(ap, max_step(lx_inv[k], dx[k], std::numeric_limits<double>::infinity()));
      ad = std::min(ad, max_step(lz_inv[k], dz[k], std::numeric_limits<double>::infinity()));
    }
    const double gamma = 0.9 + 0.09 * std::min(ap_aff, ad_aff);
    ap = std::min(1.0, gamma * ap);
    ad = std::min(1.0, gamma * ad);
    if (!(ap > 0.0) || !(ad > 0.0)) return finish(SdpStatus::NumericalFailure, "no admissible step");

    stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;
    if (stalled >= 3) return finish(SdpStatus::NumericalFailure, "step lengths stalled");

    for (std::size_t k = 0; k < nb_; ++k) {
      x_[k] += dx[k] * ap;
      z_[k] += dz[k] * ad;
      symmetrize(x_[k]);
      symmetrize(z_[k]);
    }
    for (std::size_t i = 0; i < m_; ++i) y_[i] += ad * dy[i];
  }
  return finish(SdpStatus::MaxIterations, "iteration limit reached");
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpSettings& settings) {
  problem.validate();
  Compiled cp = compile(problem);
  std::vector<int> dropped;
  if (settings.presolve && !presolve(cp, dropped)) {
    SdpSolution sol;
    sol.status = SdpStatus::Infeasible;
    sol.message = "equality constraints are inconsistent";
    sol.dropped_constraints = dropped;
    return sol;
  }
  const std::vector<int> origin = cp.origin;
  InteriorPoint ip(std::move(cp), settings);
  SdpSolution sol = ip.run();
  sol.dropped_constraints = dropped;
  // Multipliers of declared constraints; dropped rows keep zero.
  std::vector<double> y(problem.constraints.size(), 0.0);
  for (std::size_t i = 0; i < origin.size() && i < sol.y.size(); ++i)
    if (origin[i] >= 0) y[origin[i]] = sol.y[i];
  sol.y = std::move(y);
  return sol;
}

}  // namespace gme
