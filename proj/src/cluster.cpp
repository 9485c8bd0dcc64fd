#include "gme/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gme {

BSet::BSet(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (members_.size() < 2) throw std::invalid_argument("a B-set needs at least two qubits");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 0 || members_[i] >= n_)
      throw std::invalid_argument("B-set member " + std::to_string(members_[i]) + " outside the chain");
    // On a chain the closed neighbourhoods [b-1, b+1] are disjoint iff members differ by at least 3.
    if (i > 0 && members_[i] - members_[i - 1] < 3)
      throw std::invalid_argument("B-set members " + std::to_string(members_[i - 1]) + " and " +
                                  std::to_string(members_[i]) + " have overlapping neighbourhoods");
  }
}

BSet default_bset(int n) {
  if (n <= 3) throw std::invalid_argument("the cluster witness construction needs at least four qubits");
  std::vector<int> m;
  for (int q = 0; q < n; q += 3) m.push_back(q);
  return BSet(n, std::move(m));
}

std::string label_string(int n, std::uint64_t label) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) s[static_cast<std::size_t>(q)] = label_bit(n, label, q) ? '1' : '0';
  return s;
}

HermitianOperator graph_projector_sum(int n, const std::vector<std::uint64_t>& labels) {
  const GraphSpec g = GraphSpec::linear(n);
  const std::size_t d = std::size_t{1} << n;
  RealMatrix acc(d, d);
  for (const auto label : labels) {
    const StateVector v = graph_basis_vector(g, label);
    for (std::size_t i = 0; i < d; ++i) {
      const double vi = v[i].real();
      if (vi == 0.0) continue;
      double* row = acc.row(i);
      for (std::size_t j = 0; j < d; ++j) row[j] += vi * v[j].real();
    }
  }
  return HermitianOperator(std::vector<int>(static_cast<std::size_t>(n), 2), to_complex(acc));
}

HermitianOperator build_pplus(const BSet& b) {
  const int n = b.qubits();
  std::vector<std::uint64_t> labels;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    int excited = 0;
    for (int q : b.members()) excited += label_bit(n, a, q);
    if (excited >= 2) labels.push_back(a);
  }
  return graph_projector_sum(n, labels);
}

HermitianOperator build_cluster_witness(const BSet& b) {
  const int n = b.qubits();
  const std::size_t d = std::size_t{1} << n;
  const HermitianOperator half(std::vector<int>(static_cast<std::size_t>(n), 2), 0.5 * ComplexMatrix::identity(d));
  return half - graph_projector_sum(n, {0}) - 0.5 * build_pplus(b);
}

std::string to_string(PmCase c) {
  switch (c) {
    case PmCase::EdgeFlip: return "edge-flip";
    case PmCase::EdgeKeep: return "edge-keep";
    case PmCase::FlipRight: return "flip-right";
    case PmCase::FlipBoth: return "flip-both";
    case PmCase::FlipLeft: return "flip-left";
    case PmCase::Keep: return "keep";
  }
  return "unknown";
}

bool changes(PmCase c) noexcept { return c != PmCase::EdgeKeep && c != PmCase::Keep; }

PmConstruction construct_pm(const BSet& b, const Bipartition& m) {
  const int n = b.qubits();
  if (m.parties() != n) throw DimensionError("bipartition and B-set differ in qubit count");
  PmConstruction out{m, {}, 0, 0, {}, {}};

  std::vector<std::uint64_t> current{0};
  std::vector<std::uint64_t> before_last;  // running labels before the latest change
  for (const int beta : b.members()) {
    PmStep step;
    step.beta = beta;
    const int lo = std::max(0, beta - 1);
    const int hi = std::min(n - 1, beta + 1);
    for (int q = lo; q <= hi; ++q) step.window += m.contains(q) ? '1' : '0';

    if (step.window.size() == 2) {
      const int neighbour = beta == 0 ? 1 : n - 2;
      if (step.window[0] != step.window[1]) {
        step.kind = PmCase::EdgeFlip;
        step.flips = {neighbour};
      } else {
        step.kind = PmCase::EdgeKeep;
      }
    } else {
      const std::string& w = step.window;
      if (w == "110" || w == "001") {
        step.kind = PmCase::FlipRight;
        step.flips = {beta + 1};
      } else if (w == "010" || w == "101") {
        step.kind = PmCase::FlipBoth;
        step.flips = {beta - 1, beta + 1};
      } else if (w == "100" || w == "011") {
        step.kind = PmCase::FlipLeft;
        step.flips = {beta - 1};
      } else {
        step.kind = PmCase::Keep;
      }
    }

    if (changes(step.kind)) {
      // P <- P + Z P Z, where Z flips the listed label bits.
      std::uint64_t flip = 0;
      for (int q : step.flips) flip |= qubit_bit(n, q);
      before_last = current;
      const std::size_t k = current.size();
      for (std::size_t i = 0; i < k; ++i) current.push_back(current[i] ^ flip);
      ++out.r;
      out.t = static_cast<int>(out.steps.size()) + 1;
    }
    out.steps.push_back(std::move(step));
  }

  if (out.r > 1) {
    for (const auto label : before_last)
      if (label != 0) out.labels.push_back(label);
    std::sort(out.labels.begin(), out.labels.end());
  }
  out.p_m = graph_projector_sum(n, out.labels);
  return out;
}

namespace {

double min_eig(const ComplexMatrix& a) {
  bool real = true;
  for (const auto& x : a.data()) real = real && x.imag() == 0.0;
  if (!real) return hermitian_eigenvalues(a).front();
  RealMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) r.data()[i] = a.data()[i].real();
  const auto e = symmetric_eigen(r, false);
  return *std::min_element(e.values.begin(), e.values.end());
}

}  // namespace

DecomposabilityReport verify_full_decomposability(const HermitianOperator& w, const BSet& b, double tolerance,
                                                  int jobs) {
  const int n = b.qubits();
  if (w.parties() != n || !w.all_qubits()) throw DimensionError("witness and B-set differ in qubit count");
  const auto parts = canonical_bipartitions(n);
  DecomposabilityReport rep;
  rep.checks.resize(parts.size(), BipartitionCheck{parts.front(), 0, 0.0, 0.0, false});
  const long long count = static_cast<long long>(parts.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (long long i = 0; i < count; ++i) {
    const Bipartition& m = parts[static_cast<std::size_t>(i)];
    const PmConstruction pm = construct_pm(b, m);
    const ComplexMatrix q = partial_transpose(w.matrix() - pm.p_m.matrix(), w.dims(), m);
    BipartitionCheck c{m, pm.r, pm.labels.empty() ? 0.0 : min_eig(pm.p_m.matrix()), min_eig(q), false};
    c.passed = c.min_eig_p >= -tolerance && c.min_eig_q >= -tolerance;
    rep.checks[static_cast<std::size_t>(i)] = std::move(c);
  }
  rep.min_eig_q = rep.min_eig_p = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& c = rep.checks[i];
    if (c.passed) ++rep.passed;
    rep.min_eig_p = std::min(rep.min_eig_p, c.min_eig_p);
    if (c.min_eig_q < rep.min_eig_q) {
      rep.min_eig_q = c.min_eig_q;
      rep.worst = i;
    }
  }
  return rep;
}

double noise_tolerance_formula(int n) {
  if (n < 4) throw std::invalid_argument("the cluster noise tolerance formula needs n >= 4");
  const int k = (n + 2) / 3;
  return 1.0 / (1.0 - std::ldexp(1.0, 1 - n) + (k + 1) * std::ldexp(1.0, -k));
}

}  // namespace gme
