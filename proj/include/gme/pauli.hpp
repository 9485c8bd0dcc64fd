#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gme/linalg.hpp"

namespace gme {

enum class Pauli : unsigned char { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p) noexcept;

/// Bit masks of a Pauli string over the computational basis index.
/// The matrix has one nonzero per row: entry (r, r ^ x) equals
/// (-i)^ny * (-1)^popcount(r & z).
struct PauliMask {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int ny = 0;
  cplx entry(std::uint64_t row) const noexcept;
};

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters, cplx coefficient = 1.0);
  /// Parses "XZIY"; throws std::invalid_argument on other characters.
  static PauliString parse(std::string_view letters, cplx coefficient = 1.0);
  static PauliString identity(int n);

  int qubits() const noexcept { return static_cast<int>(letters_.size()); }
  const std::vector<Pauli>& letters() const noexcept { return letters_; }
  Pauli letter(int q) const { return letters_.at(static_cast<std::size_t>(q)); }
  cplx coefficient() const noexcept { return coefficient_; }
  void set_coefficient(cplx c) noexcept { coefficient_ = c; }

  std::string label() const;
  bool is_identity() const noexcept;
  int weight() const noexcept;
  int count(Pauli p) const noexcept;
  /// Number of Y letters on the parties of M; the sign of T_M on this string.
  int y_count_in(const Bipartition& m) const;
  PauliMask mask() const noexcept;

  /// Operator product including the phase picked up letter by letter.
  friend PauliString operator*(const PauliString& a, const PauliString& b);
  /// Letters only; coefficients are ignored.
  friend bool same_letters(const PauliString& a, const PauliString& b) noexcept {
    return a.letters_ == b.letters_;
  }

 private:
  std::vector<Pauli> letters_;
  cplx coefficient_ = 1.0;
};

/// coefficient times the tensor product of the letters, as a dense matrix.
ComplexMatrix pauli_matrix(const PauliString& p);
/// Same, wrapped as a qubit operator. Throws std::invalid_argument when the
/// coefficient is not real.
HermitianOperator pauli_string_matrix(const PauliString& p);

/// tr(sigma_s A) for the letters of s (coefficient ignored).
cplx pauli_trace(const PauliString& s, const ComplexMatrix& a);

/// Real linear combination of Pauli strings keyed by their labels.
class PauliSum {
 public:
  explicit PauliSum(int n = 0) : n_(n) {}

  int qubits() const noexcept { return n_; }
  void add(const std::string& label, double coefficient);
  double coefficient(const std::string& label) const;
  const std::map<std::string, double>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  /// Drops terms with |c| <= cutoff.
  void prune(double cutoff);

  ComplexMatrix matrix() const;
  HermitianOperator op() const;

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);
  friend PauliSum operator+(const PauliSum& a, const PauliSum& b);
  friend PauliSum operator*(double s, const PauliSum& a);

 private:
  int n_;
  std::map<std::string, double> terms_;
};

/// A = sum_s c_s sigma_s with c_s = tr(sigma_s A) / 2^n; keeps |c_s| > cutoff.
PauliSum pauli_expansion(const HermitianOperator& a, double cutoff = 1e-14);

/// All 4^n letter strings in lexicographic order over I, X, Y, Z.
std::vector<PauliString> all_pauli_strings(int n);
/// Every string obtained by replacing a subset of the non-identity letters by I.
std::vector<PauliString> identity_closure(const PauliString& s);
/// Distinct rearrangements of the letters, in lexicographic order.
std::vector<PauliString> distinct_permutations(const PauliString& s);
/// Output letter k is input letter perm[k].
PauliString permute_letters(const PauliString& s, std::span<const int> perm);

}  // namespace gme
