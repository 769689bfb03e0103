#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dqc1 {

inline constexpr std::size_t kMaxPauliQubits = 64;

enum class PauliRelation { commute, anticommute };

/// Tensor product of single-qubit Paulis with a global phase i^k.
///
/// Symplectic encoding: qubit j carries (x_j, z_j) with I=(0,0), X=(1,0),
/// Z=(0,1), Y=(1,1). Y is the Hermitian Pauli Y, not XZ. Qubit 0 is the
/// leftmost character of the text form and the most significant tensor
/// factor in dense matrices.
class PauliProduct {
 public:
  PauliProduct() = default;
  explicit PauliProduct(std::size_t num_qubits);
  PauliProduct(std::size_t num_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
               int phase_exponent = 0);

  /// Parses "ZZI", "-XY", "+iZ", "-iXX". Letters are I, X, Y, Z (also '_' for I).
  static PauliProduct parse(std::string_view text);
  static PauliProduct single(std::size_t num_qubits, std::size_t qubit, char pauli);

  std::size_t num_qubits() const { return num_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  /// Global phase is i^phase_exponent(), exponent in [0, 4).
  int phase_exponent() const { return phase_; }
  std::complex<double> phase() const;

  bool is_phase_free() const { return phase_ == 0; }
  bool is_hermitian() const { return phase_ % 2 == 0; }
  bool is_identity() const { return x_ == 0 && z_ == 0; }
  PauliProduct without_phase() const { return {num_qubits_, x_, z_, 0}; }
  PauliProduct with_phase(int phase_exponent) const { return {num_qubits_, x_, z_, phase_exponent}; }

  char factor(std::size_t qubit) const;
  std::size_t weight() const;

  /// Text form; a phase prefix ("-", "i", "-i") is emitted only when non-trivial.
  std::string to_string() const;

  friend bool operator==(const PauliProduct&, const PauliProduct&) = default;

 private:
  std::size_t num_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

PauliProduct multiply(const PauliProduct& a, const PauliProduct& b);
inline PauliProduct operator*(const PauliProduct& a, const PauliProduct& b) { return multiply(a, b); }

/// Symplectic commutation test. Phases are irrelevant to the answer.
PauliRelation commutes(const PauliProduct& a, const PauliProduct& b);

/// Exact trace: 2^n times the phase for the identity, zero otherwise.
std::complex<double> trace(const PauliProduct& p);

struct PauliTerm {
  double coefficient = 0.0;
  PauliProduct product;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Real linear combination of distinct phase-free Pauli products.
///
/// Construction folds ±1 phases into the coefficients, merges duplicates,
/// drops exact zeros and sorts by (z-mask, x-mask). Imaginary phases are
/// rejected because the result would not be Hermitian.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t num_qubits);
  PauliSum(std::size_t num_qubits, std::vector<PauliTerm> terms);

  /// Parses `0.3*"ZI" + 0.7*"XX" - "IZ"`. Quotes around products are optional.
  static PauliSum parse(std::string_view text);
  static PauliSum single(const PauliProduct& product, double coefficient = 1.0);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::span<const PauliTerm> terms() const { return terms_; }
  const PauliTerm& operator[](std::size_t i) const { return terms_[i]; }

  /// Σ e_μ², i.e. tr[H²]/2^n by pseudo-orthogonality of distinct products.
  double schmidt_weight() const;
  /// Σ |e_μ|, an upper bound on the spectral norm.
  double coefficient_l1() const;

  std::string to_string() const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// [A, B] with A, B given as sums, checked against 2i·C term by term.
bool commutator_equals(const PauliSum& a, const PauliSum& b, const PauliSum& c, double tolerance);

/// True iff [H0,H1] = 2iH2, [H1,H2] = 2iH0 and [H2,H0] = 2iH1 all hold.
bool check_su2_triple(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                      double tolerance = 1e-12);

struct Su2Partner {
  std::size_t term_index = 0;
  /// σ2 = -i σ_μ σ1. Hermitian; the phase exponent is 0 or 2.
  PauliProduct partner;
};

/// Builds the Appendix-style partner σ2 for σ1 against H0.
///
/// Requires all terms of h0 to commute mutually and exactly one of them to
/// anticommute with sigma1. The diagnostic names the offending terms.
Su2Partner find_su2_partner(const PauliSum& h0, const PauliProduct& sigma1);

/// (H + σHσ)/2: keeps the terms of h commuting with sigma.
PauliSum decouple_hamiltonian(const PauliSum& h, const PauliProduct& sigma);

}  // namespace dqc1
