#include "gme/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace gme {

char to_char(Pauli p) noexcept {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

cplx PauliMask::entry(std::uint64_t row) const noexcept {
  static constexpr cplx minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const cplx base = minus_i_pow[ny & 3];
  return (std::popcount(row & z) & 1) ? -base : base;
}

PauliString::PauliString(std::vector<Pauli> letters, cplx coefficient)
    : letters_(std::move(letters)), coefficient_(coefficient) {
  if (letters_.size() > 62) throw DimensionError("Pauli string longer than 62 letters");
}

PauliString PauliString::parse(std::string_view text, cplx coefficient) {
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case 'I': case 'i': case '1': letters.push_back(Pauli::I); break;
      case 'X': case 'x': letters.push_back(Pauli::X); break;
      case 'Y': case 'y': letters.push_back(Pauli::Y); break;
      case 'Z': case 'z': letters.push_back(Pauli::Z); break;
      default: throw std::invalid_argument("invalid Pauli letter '" + std::string(1, ch) + "'");
    }
  }
  if (letters.empty()) throw std::invalid_argument("empty Pauli string");
  return PauliString(std::move(letters), coefficient);
}

PauliString PauliString::identity(int n) { return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I)); }

std::string PauliString::label() const {
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(to_char(p));
  return s;
}

bool PauliString::is_identity() const noexcept {
  return std::all_of(letters_.begin(), letters_.end(), [](Pauli p) { return p == Pauli::I; });
}

int PauliString::weight() const noexcept {
  return static_cast<int>(letters_.size()) - count(Pauli::I);
}

int PauliString::count(Pauli p) const noexcept {
  return static_cast<int>(std::count(letters_.begin(), letters_.end(), p));
}

int PauliString::y_count_in(const Bipartition& m) const {
  if (m.parties() != qubits()) throw DimensionError("bipartition size differs from Pauli string length");
  int c = 0;
  for (int q : m.members()) c += letters_[q] == Pauli::Y;
  return c;
}

PauliMask PauliString::mask() const noexcept {
  PauliMask m;
  const int n = qubits();
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = qubit_bit(n, q);
    switch (letters_[q]) {
      case Pauli::I: break;
      case Pauli::X: m.x |= bit; break;
      case Pauli::Y: m.x |= bit; m.z |= bit; ++m.ny; break;
      case Pauli::Z: m.z |= bit; break;
    }
  }
  return m;
}

PauliString operator*(const PauliString& a, const PauliString& b) {
  if (a.qubits() != b.qubits()) throw DimensionError("Pauli product: length mismatch");
  // Single-qubit table: P_a P_b = phase * P_c.
  static constexpr int product_letter[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  // exponent of i
  static constexpr int product_phase[4][4] = {{0, 0, 0, 0}, {0, 0, 1, 3}, {0, 3, 0, 1}, {0, 1, 3, 0}};
  std::vector<Pauli> letters(a.letters_.size());
  int phase = 0;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const int x = static_cast<int>(a.letters_[q]);
    const int y = static_cast<int>(b.letters_[q]);
    letters[q] = static_cast<Pauli>(product_letter[x][y]);
    phase += product_phase[x][y];
  }
  static constexpr cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return PauliString(std::move(letters), a.coefficient_ * b.coefficient_ * i_pow[phase & 3]);
}

ComplexMatrix pauli_matrix(const PauliString& p) {
  const int n = p.qubits();
  const std::size_t d = std::size_t{1} << n;
  const PauliMask m = p.mask();
  ComplexMatrix out(d, d);
  for (std::uint64_t r = 0; r < d; ++r) out(r, r ^ m.x) = p.coefficient() * m.entry(r);
  return out;
}

HermitianOperator pauli_string_matrix(const PauliString& p) {
  if (std::abs(p.coefficient().imag()) > 1e-14 * (1.0 + std::abs(p.coefficient())))
    throw std::invalid_argument("Pauli string with non-real coefficient is not Hermitian");
  PauliString real = p;
  real.set_coefficient(p.coefficient().real());
  return HermitianOperator::qubits(pauli_matrix(real));
}

cplx pauli_trace(const PauliString& s, const ComplexMatrix& a) {
  const std::size_t d = std::size_t{1} << s.qubits();
  if (a.rows() != d || a.cols() != d) throw DimensionError("pauli_trace: matrix size is not 2^n");
  const PauliMask m = s.mask();
  cplx t{};
  for (std::uint64_t r = 0; r < d; ++r) t += m.entry(r) * a(r ^ m.x, r);
  return t;
}

// ---------------------------------------------------------------------------

void PauliSum::add(const std::string& label, double coefficient) {
  if (static_cast<int>(label.size()) != n_) throw DimensionError("PauliSum: label length differs from qubit count");
  terms_[PauliString::parse(label).label()] += coefficient;
}

double PauliSum::coefficient(const std::string& label) const {
  auto it = terms_.find(label);
  return it == terms_.end() ? 0.0 : it->second;
}

void PauliSum::prune(double cutoff) {
  std::erase_if(terms_, [cutoff](const auto& kv) { return std::abs(kv.second) <= cutoff; });
}

ComplexMatrix PauliSum::matrix() const {
  const std::size_t d = std::size_t{1} << n_;
  ComplexMatrix out(d, d);
  for (const auto& [label, c] : terms_) {
    const PauliMask m = PauliString::parse(label).mask();
    for (std::uint64_t r = 0; r < d; ++r) out(r, r ^ m.x) += c * m.entry(r);
  }
  return out;
}

HermitianOperator PauliSum::op() const { return HermitianOperator::hermitized(std::vector<int>(static_cast<std::size_t>(n_), 2), matrix()); }

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_) throw DimensionError("PauliSum product: qubit count mismatch");
  PauliSum out(a.n_);
  std::map<std::string, cplx> acc;
  for (const auto& [la, ca] : a.terms_)
    for (const auto& [lb, cb] : b.terms_) {
      const PauliString p = PauliString::parse(la, ca) * PauliString::parse(lb, cb);
      acc[p.label()] += p.coefficient();
    }
  for (const auto& [label, c] : acc) {
    if (std::abs(c.imag()) > 1e-12 * (1.0 + std::abs(c)))
      throw std::invalid_argument("PauliSum product is not Hermitian");
    out.terms_[label] = c.real();
  }
  return out;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_) throw DimensionError("PauliSum sum: qubit count mismatch");
  PauliSum out = a;
  for (const auto& [label, c] : b.terms_) out.terms_[label] += c;
  return out;
}

PauliSum operator*(double s, const PauliSum& a) {
  PauliSum out = a;
  for (auto& kv : out.terms_) kv.second *= s;
  return out;
}

PauliSum pauli_expansion(const HermitianOperator& a, double cutoff) {
  if (!a.all_qubits()) throw DimensionError("pauli_expansion: operator is not on qubits");
  const int n = a.parties();
  const double norm = std::ldexp(1.0, -n);
  PauliSum out(n);
  for (const auto& s : all_pauli_strings(n)) {
    const double c = pauli_trace(s, a.matrix()).real() * norm;
    if (std::abs(c) > cutoff) out.add(s.label(), c);
  }
  return out;
}

std::vector<PauliString> all_pauli_strings(int n) {
  if (n < 1 || n > 12) throw DimensionError("all_pauli_strings: n must be in [1, 12]");
  const std::size_t count = std::size_t{1} << (2 * n);
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<Pauli> letters(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) letters[q] = static_cast<Pauli>((code >> (2 * (n - 1 - q))) & 3U);
    out.emplace_back(std::move(letters));
  }
  return out;
}

std::vector<PauliString> identity_closure(const PauliString& s) {
  std::vector<int> support;
  for (int q = 0; q < s.qubits(); ++q)
    if (s.letter(q) != Pauli::I) support.push_back(q);
  std::vector<PauliString> out;
  const std::size_t subsets = std::size_t{1} << support.size();
  out.reserve(subsets);
  for (std::size_t keep = 0; keep < subsets; ++keep) {
    std::vector<Pauli> letters(static_cast<std::size_t>(s.qubits()), Pauli::I);
    for (std::size_t t = 0; t < support.size(); ++t)
      if ((keep >> t) & 1U) letters[support[t]] = s.letter(support[t]);
    out.emplace_back(std::move(letters), s.coefficient());
  }
  std::sort(out.begin(), out.end(), [](const PauliString& a, const PauliString& b) { return a.letters() < b.letters(); });
  return out;
}

std::vector<PauliString> distinct_permutations(const PauliString& s) {
  std::vector<Pauli> letters = s.letters();
  std::sort(letters.begin(), letters.end());
  std::vector<PauliString> out;
  do {
    out.emplace_back(letters, s.coefficient());
  } while (std::next_permutation(letters.begin(), letters.end()));
  return out;
}

PauliString permute_letters(const PauliString& s, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != s.qubits()) throw DimensionError("permute_letters: length mismatch");
  std::vector<Pauli> letters(perm.size());
  std::vector<int> seen(perm.size(), 0);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] < 0 || perm[k] >= s.qubits() || seen[perm[k]]++) throw std::invalid_argument("permute_letters: not a permutation");
    letters[k] = s.letter(perm[k]);
  }
  return PauliString(std::move(letters), s.coefficient());
}

}  // namespace gme
