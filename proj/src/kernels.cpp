#include "gme/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gme::kernels {

BlockIncidence BlockIncidence::build(std::span<const SparseConstraint> a, std::size_t blocks) {
  BlockIncidence inc;
  inc.users.resize(blocks);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t p = 0; p < a[i].parts.size(); ++p)
      inc.users[a[i].parts[p].block].emplace_back(static_cast<int>(i), static_cast<int>(p));
  return inc;
}

double inner(const BlockPart& part, const RealMatrix& g) {
  double s = 0.0;
  for (std::size_t t = 0; t < part.value.size(); ++t) s += part.value[t] * g(part.row[t], part.col[t]);
  return s;
}

namespace {

// G = W A W for the symmetric matrix A described by `part`. Only the rows of
// A W indexed by the support are nonzero, which keeps this at n^2 |support|.
void sandwich(const BlockPart& part, const RealMatrix& w, std::vector<int>& pos, RealMatrix& t, RealMatrix& g) {
  const std::size_t n = w.rows();
  const std::size_t s = part.support.size();
  if (pos.size() < n) pos.assign(n, -1);
  for (std::size_t k = 0; k < s; ++k) pos[part.support[k]] = static_cast<int>(k);
  if (t.rows() != s || t.cols() != n) t = RealMatrix(s, n);
  else std::fill(t.data().begin(), t.data().end(), 0.0);

  for (std::size_t e = 0; e < part.value.size(); ++e) {
    const int r = part.row[e];
    const int c = part.col[e];
    const double v = part.value[e];
    if (r == c) {
      double* tr = t.row(pos[r]);
      const double* wc = w.row(c);
      for (std::size_t q = 0; q < n; ++q) tr[q] += v * wc[q];
    } else {
      const double h = 0.5 * v;
      double* tr = t.row(pos[r]);
      double* tc = t.row(pos[c]);
      const double* wr = w.row(r);
      const double* wc = w.row(c);
      for (std::size_t q = 0; q < n; ++q) {
        tr[q] += h * wc[q];
        tc[q] += h * wr[q];
      }
    }
  }
  if (g.rows() != n || g.cols() != n) g = RealMatrix(n, n);
  else std::fill(g.data().begin(), g.data().end(), 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    double* gp = g.row(p);
    const double* wp = w.row(p);
    for (std::size_t k = 0; k < s; ++k) {
      const double wpk = wp[part.support[k]];
      if (wpk == 0.0) continue;
      const double* tk = t.row(k);
      for (std::size_t q = 0; q < n; ++q) gp[q] += wpk * tk[q];
    }
  }
  for (std::size_t k = 0; k < s; ++k) pos[part.support[k]] = -1;
}

RealMatrix densify(const BlockPart& part, std::size_t n) {
  RealMatrix a(n, n);
  for (std::size_t e = 0; e < part.value.size(); ++e) {
    const int r = part.row[e];
    const int c = part.col[e];
    if (r == c) {
      a(r, r) += part.value[e];
    } else {
      a(r, c) += 0.5 * part.value[e];
      a(c, r) += 0.5 * part.value[e];
    }
  }
  return a;
}

void symmetrize(RealMatrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
}

}  // namespace

void schur_parallel(std::span<const SparseConstraint> a, const BlockIncidence& inc, std::span<const RealMatrix> w,
                    RealMatrix& m) {
  const std::size_t mm = a.size();
  if (m.rows() != mm || m.cols() != mm) m = RealMatrix(mm, mm);
  else std::fill(m.data().begin(), m.data().end(), 0.0);

  const long long count = static_cast<long long>(mm);
#pragma omp parallel
  {
    std::vector<int> pos;
    RealMatrix t;
    RealMatrix g;
#pragma omp for schedule(dynamic, 8)
    for (long long j = 0; j < count; ++j) {
      double* mj = m.row(static_cast<std::size_t>(j));
      for (const auto& part : a[j].parts) {
        sandwich(part, w[part.block], pos, t, g);
        for (const auto& [i, p] : inc.users[part.block]) mj[i] += inner(a[i].parts[p], g);
      }
    }
  }
  symmetrize(m);
}

void schur_serial(std::span<const SparseConstraint> a, std::span<const RealMatrix> w, RealMatrix& m) {
  const std::size_t mm = a.size();
  m = RealMatrix(mm, mm);
  for (std::size_t j = 0; j < mm; ++j) {
    for (const auto& pj : a[j].parts) {
      const RealMatrix& wb = w[pj.block];
      const RealMatrix g = wb * densify(pj, wb.rows()) * wb;
      for (std::size_t i = 0; i < mm; ++i)
        for (const auto& pi : a[i].parts) {
          if (pi.block != pj.block) continue;
          const RealMatrix ai = densify(pi, wb.rows());
          double s = 0.0;
          for (std::size_t e = 0; e < g.data().size(); ++e) s += ai.data()[e] * g.data()[e];
          m(i, j) += s;
        }
    }
  }
  symmetrize(m);
}

bool cholesky_serial(RealMatrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    const double* aj = a.row(j);
    double d = aj[j];
    for (std::size_t k = 0; k < j; ++k) d -= aj[k] * aj[k];
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double* ai = a.row(i);
      double s = ai[j];
      for (std::size_t k = 0; k < j; ++k) s -= ai[k] * aj[k];
      ai[j] = s / ljj;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

bool cholesky_parallel(RealMatrix& a, std::size_t block) {
  const std::size_t n = a.rows();
  if (block == 0) block = 64;
  for (std::size_t kb = 0; kb < n; kb += block) {
    const std::size_t e = std::min(kb + block, n);
    // Diagonal block, unblocked.
    for (std::size_t j = kb; j < e; ++j) {
      const double* aj = a.row(j);
      double d = aj[j];
      for (std::size_t k = kb; k < j; ++k) d -= aj[k] * aj[k];
      if (!(d > 0.0) || !std::isfinite(d)) return false;
      const double ljj = std::sqrt(d);
      a(j, j) = ljj;
      for (std::size_t i = j + 1; i < e; ++i) {
        double* ai = a.row(i);
        double s = ai[j];
        for (std::size_t k = kb; k < j; ++k) s -= ai[k] * aj[k];
        ai[j] = s / ljj;
      }
    }
    const long long first = static_cast<long long>(e);
    const long long last = static_cast<long long>(n);
    // Panel below the diagonal block: row-wise triangular solves.
#pragma omp parallel for schedule(static)
    for (long long ii = first; ii < last; ++ii) {
      double* ai = a.row(static_cast<std::size_t>(ii));
      for (std::size_t j = kb; j < e; ++j) {
        const double* aj = a.row(j);
        double s = ai[j];
        for (std::size_t k = kb; k < j; ++k) s -= ai[k] * aj[k];
        ai[j] = s / aj[j];
      }
    }
    // Trailing lower triangle.
#pragma omp parallel for schedule(dynamic, 4)
    for (long long ii = first; ii < last; ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      double* ai = a.row(i);
      for (std::size_t j = e; j <= i; ++j) {
        const double* aj = a.row(j);
        double s = 0.0;
        for (std::size_t k = kb; k < e; ++k) s += ai[k] * aj[k];
        ai[j] -= s;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

void cholesky_solve(const RealMatrix& l, std::span<double> b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = l.row(i);
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s / li[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    b[i] /= l(i, i);
    const double bi = b[i];
    for (std::size_t k = 0; k < i; ++k) b[k] -= l(i, k) * bi;
  }
}

}  // namespace gme::kernels
