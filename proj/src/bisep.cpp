#include "gme/bisep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gme/witness.hpp"

namespace gme {

namespace {

constexpr int kQubits = 3;
constexpr std::size_t kDim = 8;
constexpr std::size_t kLocal = 6;  // qubit (x) triplet

const std::vector<int> kQubitDims{2, 2, 2};
const std::vector<int> kLocalDims{2, 3};

// Columns a*3 + s: qubit k in state a, the other two in triplet state s
// (|00>, (|01> + |10>)/sqrt2, |11>).
ComplexMatrix isometry(int k) {
  const double h = 1.0 / std::sqrt(2.0);
  int others[2];
  int c = 0;
  for (int q = 0; q < kQubits; ++q)
    if (q != k) others[c++] = q;
  auto index = [&](int a, int b1, int b2) {
    std::size_t i = 0;
    i |= a ? qubit_bit(kQubits, k) : 0;
    i |= b1 ? qubit_bit(kQubits, others[0]) : 0;
    i |= b2 ? qubit_bit(kQubits, others[1]) : 0;
    return i;
  };
  ComplexMatrix v(kDim, kLocal);
  for (int a = 0; a < 2; ++a) {
    v(index(a, 0, 0), a * 3 + 0) = 1.0;
    v(index(a, 0, 1), a * 3 + 1) = h;
    v(index(a, 1, 0), a * 3 + 1) = h;
    v(index(a, 1, 1), a * 3 + 2) = 1.0;
  }
  return v;
}

// Hermitian basis of d x d matrices; the real symmetric ones only when asked.
std::vector<ComplexMatrix> hermitian_basis(std::size_t d, bool real_only) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      ComplexMatrix e(d, d);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      out.push_back(std::move(e));
      if (i != j && !real_only) {
        ComplexMatrix f(d, d);
        f(i, j) = cplx(0.0, 1.0);
        f(j, i) = cplx(0.0, -1.0);
        out.push_back(std::move(f));
      }
    }
  return out;
}

double trace_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s.real();
}

// 1 - (1 + SWAP)/2 on the two qubits other than k.
ComplexMatrix outside_symmetric(int k) {
  int others[2];
  int c = 0;
  for (int q = 0; q < kQubits; ++q)
    if (q != k) others[c++] = q;
  const std::uint64_t b1 = qubit_bit(kQubits, others[0]);
  const std::uint64_t b2 = qubit_bit(kQubits, others[1]);
  ComplexMatrix p(kDim, kDim);
  for (std::uint64_t i = 0; i < kDim; ++i) {
    std::uint64_t j = i & ~(b1 | b2);
    if (i & b1) j |= b2;
    if (i & b2) j |= b1;
    p(i, i) += 0.5;
    p(j, i) -= 0.5;
  }
  return p;
}

}  // namespace

std::optional<BisepDecomposition> certify_biseparable_sym(const DensityMatrix& rho, const SdpSettings& settings) {
  if (rho.op().dims() != kQubitDims) throw DimensionError("certify_biseparable_sym needs a three-qubit state");
  const bool cpx = rho.imaginary_part() > 1e-13;
  const int side = static_cast<int>(cpx ? 2 * kLocal : kLocal);

  SdpProblem prob;
  int sigma[kQubits];
  int tau[kQubits];
  ComplexMatrix v[kQubits];
  for (int k = 0; k < kQubits; ++k) {
    sigma[k] = prob.add_block(side);
    tau[k] = prob.add_block(side);
    v[k] = isometry(k);
  }
  // sum_k V_k sigma_k V_k^dag = rho, tested against a Hermitian basis.
  for (const auto& e : hermitian_basis(kDim, !cpx)) {
    std::vector<SdpTerm> terms;
    for (int k = 0; k < kQubits; ++k) add_trace_terms(terms, sigma[k], adjoint(v[k]) * e * v[k], cpx);
    prob.add_constraint(std::move(terms), trace_real(e, rho.matrix()));
  }
  // tau_k = sigma_k^{T_A}, using tr(F sigma^{T_A}) = tr(F^{T_A} sigma).
  const Bipartition qubit_side(2, {0});
  for (const auto& f : hermitian_basis(kLocal, !cpx)) {
    const ComplexMatrix ft = partial_transpose(f, kLocalDims, qubit_side);
    for (int k = 0; k < kQubits; ++k) {
      std::vector<SdpTerm> terms;
      add_trace_terms(terms, tau[k], f, cpx);
      add_trace_terms(terms, sigma[k], ft, cpx, -1.0);
      prob.add_constraint(std::move(terms), 0.0);
    }
  }

  SdpSettings s = settings;
  s.presolve = true;
  const SdpSolution sol = solve(prob, s);
  if (sol.status == SdpStatus::Infeasible) return std::nullopt;
  if (sol.status != SdpStatus::Optimal)
    throw SolverError(sol.status, "biseparability SDP ended with status " + to_string(sol.status) + " (" + sol.message + ")");

  BisepDecomposition d{{}, rho};
  for (int k = 0; k < kQubits; ++k) {
    const ComplexMatrix local = block_value(sol.x[sigma[k]], cpx);
    double w = 0.0;
    for (std::size_t i = 0; i < kLocal; ++i) w += local(i, i).real();
    if (w <= 1e-12) continue;
    const ComplexMatrix full = v[k] * local * adjoint(v[k]);
    d.parts.push_back({Bipartition(kQubits, {k}), w, DensityMatrix(HermitianOperator::hermitized(kQubitDims, (1.0 / w) * full))});
  }
  return d;
}

double critical_p_w3() {
  const double s3 = std::sqrt(3.0);
  return (367.0 - 71.0 * s3 - std::sqrt(2894.0 * s3 - 2988.0)) / 382.0;
}

DensityMatrix w3_noisy(double p) { return white_noise_mix(w_state(3), p); }

HermitianOperator w3_component(double a, double p) {
  if (std::abs(a) > 1.0) throw std::invalid_argument("w3_component: |a| must not exceed 1");
  const double h = 1.0 / std::sqrt(2.0);
  StateVector chi1(kDim), chi2(kDim), chi3(kDim), chi4(kDim);
  chi1[0b000] = 1.0;
  chi2[0b111] = 1.0;
  // (2 sqrt2 |1>|psi+> - |011>) / 3
  chi3[0b101] = 2.0 * std::sqrt(2.0) * h / 3.0;
  chi3[0b110] = 2.0 * std::sqrt(2.0) * h / 3.0;
  chi3[0b011] = -1.0 / 3.0;
  // a |0>|psi+> + sqrt(1 - a^2) |100>
  chi4[0b001] = a * h;
  chi4[0b010] = a * h;
  chi4[0b100] = std::sqrt(std::max(0.0, 1.0 - a * a));
  const ComplexMatrix m = (p / 8.0) * projector(chi1) + (p / 8.0) * projector(chi2) + (3.0 * p / 8.0) * projector(chi3) +
                          (1.0 - 5.0 * p / 8.0) * projector(chi4);
  return HermitianOperator(kQubitDims, m);
}

namespace {

HermitianOperator relabel(const HermitianOperator& op, int k) {
  if (k == 0) return op;
  std::vector<int> perm{0, 1, 2};
  std::swap(perm[0], perm[static_cast<std::size_t>(k)]);
  return permute_parties(op, perm);
}

ComplexMatrix average_of_relabelings(double a, double p) {
  const HermitianOperator c = w3_component(a, p);
  ComplexMatrix sum = c.matrix();
  sum += relabel(c, 1).matrix();
  sum += relabel(c, 2).matrix();
  return (1.0 / 3.0) * sum;
}

}  // namespace

W3Analytic w3_analytic_decomposition(double p, double tolerance) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("w3_analytic_decomposition: p must lie in [0, 1]");
  const DensityMatrix target = w3_noisy(p);
  // The (001, 010) element is the one the relabelings leave free; the others
  // match for every a and are checked afterwards.
  auto f = [&](double a) { return (average_of_relabelings(a, p) - target.matrix())(1, 2).real(); };

  const int grid = 4000;
  std::vector<double> roots;
  double xa = -1.0;
  double fa = f(xa);
  for (int i = 1; i <= grid; ++i) {
    const double xb = -1.0 + 2.0 * i / grid;
    const double fb = f(xb);
    if (fa == 0.0) roots.push_back(xa);
    else if (fa * fb < 0.0) {
      double lo = xa, hi = xb, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    xa = xb;
    fa = fb;
  }
  if (fa == 0.0) roots.push_back(xa);

  const Bipartition first(kQubits, {0});
  std::optional<W3Analytic> best;
  double best_residual = std::numeric_limits<double>::infinity();
  double best_pt = -std::numeric_limits<double>::infinity();
  for (const double a : roots) {
    const HermitianOperator c = w3_component(a, p);
    const double pt = min_eigenvalue(partial_transpose(c, first));
    const double residual = max_abs_diff(average_of_relabelings(a, p), target.matrix());
    best_pt = std::max(best_pt, pt);
    if (pt < -tolerance || residual >= best_residual) continue;
    best_residual = residual;
    W3Analytic r;
    r.a = a;
    r.decomposition.target = target;
    for (int k = 0; k < kQubits; ++k)
      r.decomposition.parts.push_back({Bipartition(kQubits, {k}), 1.0 / 3.0, DensityMatrix(relabel(c, k))});
    best = std::move(r);
  }
  if (!best)
    throw std::domain_error("no PPT symmetric decomposition of the noisy W state at p = " + std::to_string(p) +
                            " (largest minimal partial-transpose eigenvalue " + std::to_string(best_pt) + ")");
  return *best;
}

BisepReport verify_decomposition(const BisepDecomposition& d, double reconstruction_tol, double ppt_tol,
                                 double support_tol) {
  BisepReport r;
  auto fail = [&r](std::string msg) {
    r.passed = false;
    r.failures.push_back(std::move(msg));
  };
  if (d.target.op().dims() != kQubitDims) {
    fail("target is not a three-qubit state");
    return r;
  }
  double total = 0.0;
  r.min_weight = std::numeric_limits<double>::infinity();
  r.min_pt_eigenvalue = std::numeric_limits<double>::infinity();
  ComplexMatrix sum(kDim, kDim);
  for (const auto& part : d.parts) {
    if (part.m.parties() != kQubits || part.m.members().size() != 1 || part.state.op().dims() != kQubitDims) {
      fail("component for " + part.m.to_string() + " is not a single-qubit cut of three qubits");
      continue;
    }
    total += part.weight;
    r.min_weight = std::min(r.min_weight, part.weight);
    sum += part.weight * part.state.matrix();
    const double pt = min_eigenvalue(partial_transpose(part.state.op(), part.m));
    r.min_pt_eigenvalue = std::min(r.min_pt_eigenvalue, pt);
    if (pt < -ppt_tol) fail("component for " + part.m.to_string() + " is not PPT (" + std::to_string(pt) + ")");
    const ComplexMatrix out = outside_symmetric(part.m.members().front());
    const double support = (out * part.state.matrix() * out).max_abs();
    r.support_residual = std::max(r.support_residual, support);
    if (support > support_tol) fail("component for " + part.m.to_string() + " leaves the symmetric subspace");
  }
  if (d.parts.empty()) {
    fail("no components");
    r.min_weight = r.min_pt_eigenvalue = 0.0;
  }
  if (r.min_weight < 0.0) fail("negative weight");
  r.weight_defect = std::abs(total - 1.0);
  if (r.weight_defect > 1e-9) fail("weights sum to " + std::to_string(total));
  r.reconstruction_residual = max_abs_diff(sum, d.target.matrix());
  if (r.reconstruction_residual > reconstruction_tol)
    fail("components do not reproduce the state (residual " + std::to_string(r.reconstruction_residual) + ")");
  return r;
}

}  // namespace gme
