#include "dqc1/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <fmt/core.h>

#include "dqc1/errors.hpp"

namespace dqc1 {
namespace {

std::uint64_t qubit_bit(std::size_t num_qubits, std::size_t qubit) {
  return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

std::uint64_t full_mask(std::size_t num_qubits) {
  return num_qubits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_qubits) - 1;
}

int popcount(std::uint64_t v) { return std::popcount(v); }

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(fmt::format("{}: qubit counts differ ({} vs {})", what, a, b));
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Keyed by (z, x) so that std::map iteration yields the canonical term order.
using TermKey = std::pair<std::uint64_t, std::uint64_t>;

TermKey key_of(const PauliProduct& p) { return {p.z_mask(), p.x_mask()}; }

// Real coefficient carried by the phase i^k, k even.
double real_phase_sign(int k) { return k == 0 ? 1.0 : -1.0; }

// Symbolic [A, B] as a map from products to complex coefficients. Commuting
// pairs drop out; anticommuting pairs contribute 2·a·b·P·Q.
std::map<TermKey, std::complex<double>> symbolic_commutator(const PauliSum& a, const PauliSum& b) {
  std::map<TermKey, std::complex<double>> out;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (commutes(ta.product, tb.product) == PauliRelation::commute) continue;
      const PauliProduct pq = ta.product * tb.product;
      out[key_of(pq)] += 2.0 * ta.coefficient * tb.coefficient * pq.phase();
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PauliProduct

PauliProduct::PauliProduct(std::size_t num_qubits) : PauliProduct(num_qubits, 0, 0, 0) {}

PauliProduct::PauliProduct(std::size_t num_qubits, std::uint64_t x_mask, std::uint64_t z_mask,
                           int phase_exponent)
    : num_qubits_(num_qubits), x_(x_mask), z_(z_mask), phase_(((phase_exponent % 4) + 4) % 4) {
  if (num_qubits == 0 || num_qubits > kMaxPauliQubits) {
    throw DimensionError(fmt::format("Pauli product needs 1..{} qubits, got {}", kMaxPauliQubits,
                                     num_qubits));
  }
  const std::uint64_t mask = full_mask(num_qubits);
  if ((x_mask & ~mask) != 0 || (z_mask & ~mask) != 0) {
    throw DimensionError("Pauli product masks have bits beyond the qubit count");
  }
}

PauliProduct PauliProduct::parse(std::string_view text) {
  std::string_view s = trim(text);
  int phase = 0;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    if (s.front() == '-') phase = 2;
    s.remove_prefix(1);
  }
  if (!s.empty() && s.front() == 'i') {
    phase += 1;
    s.remove_prefix(1);
  }
  if (s.empty()) throw PreconditionError(fmt::format("empty Pauli product in '{}'", text));
  if (s.size() > kMaxPauliQubits) {
    throw DimensionError(fmt::format("Pauli product '{}' exceeds {} qubits", text, kMaxPauliQubits));
  }
  const std::size_t n = s.size();
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = qubit_bit(n, q);
    switch (s[q]) {
      case 'I': case '_': break;
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default:
        throw PreconditionError(fmt::format("invalid Pauli letter '{}' in '{}'", s[q], text));
    }
  }
  return {n, x, z, phase};
}

PauliProduct PauliProduct::single(std::size_t num_qubits, std::size_t qubit, char pauli) {
  if (qubit >= num_qubits) {
    throw DimensionError(fmt::format("qubit {} out of range for {} qubits", qubit, num_qubits));
  }
  std::string text(num_qubits, 'I');
  text[qubit] = pauli;
  return parse(text);
}

std::complex<double> PauliProduct::phase() const {
  static constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[phase_];
}

char PauliProduct::factor(std::size_t qubit) const {
  if (qubit >= num_qubits_) throw DimensionError("factor index out of range");
  const std::uint64_t bit = qubit_bit(num_qubits_, qubit);
  const bool xb = (x_ & bit) != 0;
  const bool zb = (z_ & bit) != 0;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::size_t PauliProduct::weight() const { return static_cast<std::size_t>(popcount(x_ | z_)); }

std::string PauliProduct::to_string() const {
  static constexpr const char* prefix[4] = {"", "i", "-", "-i"};
  std::string out = prefix[phase_];
  for (std::size_t q = 0; q < num_qubits_; ++q) out.push_back(factor(q));
  return out;
}

PauliProduct multiply(const PauliProduct& a, const PauliProduct& b) {
  require_same_size(a.num_qubits(), b.num_qubits(), "multiply");
  const std::uint64_t x1 = a.x_mask(), z1 = a.z_mask();
  const std::uint64_t x2 = b.x_mask(), z2 = b.z_mask();
  // Per-site phase exponents of the single-qubit table, summed by category:
  //   Y·(x2,z2) -> z2 - x2,  X·(x2,z2) -> z2(2x2 - 1),  Z·(x2,z2) -> x2(1 - 2z2).
  const std::uint64_t ys = x1 & z1;
  const std::uint64_t xs = x1 & ~z1;
  const std::uint64_t zs = ~x1 & z1;
  const int g = popcount(ys & z2) - popcount(ys & x2) + 2 * popcount(xs & z2 & x2) -
                popcount(xs & z2) + popcount(zs & x2) - 2 * popcount(zs & x2 & z2);
  return {a.num_qubits(), x1 ^ x2, z1 ^ z2, a.phase_exponent() + b.phase_exponent() + g};
}

PauliRelation commutes(const PauliProduct& a, const PauliProduct& b) {
  require_same_size(a.num_qubits(), b.num_qubits(), "commutes");
  const int odd = popcount((a.x_mask() & b.z_mask()) ^ (a.z_mask() & b.x_mask())) & 1;
  return odd ? PauliRelation::anticommute : PauliRelation::commute;
}

std::complex<double> trace(const PauliProduct& p) {
  if (!p.is_identity()) return {0.0, 0.0};
  return std::ldexp(1.0, static_cast<int>(p.num_qubits())) * p.phase();
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(std::size_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits == 0 || num_qubits > kMaxPauliQubits) {
    throw DimensionError(fmt::format("Pauli sum needs 1..{} qubits, got {}", kMaxPauliQubits,
                                     num_qubits));
  }
}

PauliSum::PauliSum(std::size_t num_qubits, std::vector<PauliTerm> terms) : PauliSum(num_qubits) {
  std::map<TermKey, std::pair<double, PauliProduct>> merged;
  for (const auto& t : terms) {
    require_same_size(num_qubits, t.product.num_qubits(), "PauliSum term");
    if (!t.product.is_hermitian()) {
      throw PreconditionError(fmt::format(
          "term {} carries an imaginary phase; the sum would not be Hermitian",
          t.product.to_string()));
    }
    if (!std::isfinite(t.coefficient)) {
      throw PreconditionError(fmt::format("non-finite coefficient on {}", t.product.to_string()));
    }
    const PauliProduct bare = t.product.without_phase();
    auto [it, inserted] = merged.try_emplace(key_of(bare), 0.0, bare);
    it->second.first += real_phase_sign(t.product.phase_exponent()) * t.coefficient;
  }
  for (auto& [key, entry] : merged) {
    if (entry.first != 0.0) terms_.push_back({entry.first, entry.second});
  }
}

PauliSum PauliSum::parse(std::string_view text) {
  std::vector<PauliTerm> terms;
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  bool first = true;
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    double sign = 1.0;
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1.0;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw PreconditionError(
          fmt::format("expected '+' or '-' at offset {} of '{}'", pos, text));
    }
    first = false;

    double coefficient = 1.0;
    if (pos < text.size() &&
        (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
      const char* begin = text.data() + pos;
      const char* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(begin, end, coefficient);
      if (ec != std::errc{}) {
        throw PreconditionError(fmt::format("bad coefficient at offset {} of '{}'", pos, text));
      }
      pos += static_cast<std::size_t>(ptr - begin);
      skip_ws();
      if (pos >= text.size() || text[pos] != '*') {
        throw PreconditionError(fmt::format("expected '*' after coefficient in '{}'", text));
      }
      ++pos;
      skip_ws();
    }

    std::string_view product_text;
    if (pos < text.size() && text[pos] == '"') {
      const std::size_t close = text.find('"', pos + 1);
      if (close == std::string_view::npos) {
        throw PreconditionError(fmt::format("unterminated quote in '{}'", text));
      }
      product_text = text.substr(pos + 1, close - pos - 1);
      pos = close + 1;
    } else {
      const std::size_t start = pos;
      while (pos < text.size() && std::string_view("IXYZ_").find(text[pos]) != std::string_view::npos) {
        ++pos;
      }
      product_text = text.substr(start, pos - start);
    }
    if (product_text.empty()) {
      throw PreconditionError(fmt::format("missing Pauli product at offset {} of '{}'", pos, text));
    }
    terms.push_back({sign * coefficient, PauliProduct::parse(product_text)});
  }
  if (terms.empty()) throw PreconditionError("empty Pauli sum");
  const std::size_t n = terms.front().product.num_qubits();
  return PauliSum(n, std::move(terms));
}

PauliSum PauliSum::single(const PauliProduct& product, double coefficient) {
  return PauliSum(product.num_qubits(), {{coefficient, product}});
}

double PauliSum::schmidt_weight() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coefficient * t.coefficient;
  return s;
}

double PauliSum::coefficient_l1() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

std::string PauliSum::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& t : terms_) {
    const double c = t.coefficient;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    out << std::abs(c) << "*\"" << t.product.to_string() << "\"";
    first = false;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// su(2) structure

bool commutator_equals(const PauliSum& a, const PauliSum& b, const PauliSum& c, double tolerance) {
  require_same_size(a.num_qubits(), b.num_qubits(), "commutator");
  require_same_size(a.num_qubits(), c.num_qubits(), "commutator");
  auto residual = symbolic_commutator(a, b);
  for (const auto& t : c.terms()) {
    residual[key_of(t.product)] -= std::complex<double>(0.0, 2.0 * t.coefficient);
  }
  double scale = 1.0;
  for (const auto& t : c.terms()) scale = std::max(scale, std::abs(t.coefficient));
  return std::all_of(residual.begin(), residual.end(), [&](const auto& kv) {
    return std::abs(kv.second) <= tolerance * scale;
  });
}

bool check_su2_triple(const PauliSum& h0, const PauliSum& h1, const PauliSum& h2,
                      double tolerance) {
  require_same_size(h0.num_qubits(), h1.num_qubits(), "check_su2_triple");
  require_same_size(h0.num_qubits(), h2.num_qubits(), "check_su2_triple");
  if (h0.empty() || h1.empty() || h2.empty()) return false;
  return commutator_equals(h0, h1, h2, tolerance) && commutator_equals(h1, h2, h0, tolerance) &&
         commutator_equals(h2, h0, h1, tolerance);
}

Su2Partner find_su2_partner(const PauliSum& h0, const PauliProduct& sigma1) {
  require_same_size(h0.num_qubits(), sigma1.num_qubits(), "find_su2_partner");
  if (!sigma1.is_phase_free()) {
    throw PreconditionError("find_su2_partner: sigma1 must be phase-free");
  }
  for (std::size_t i = 0; i < h0.size(); ++i) {
    for (std::size_t j = i + 1; j < h0.size(); ++j) {
      if (commutes(h0[i].product, h0[j].product) == PauliRelation::anticommute) {
        throw PreconditionError(fmt::format(
            "find_su2_partner: terms of H0 must commute, but {} and {} anticommute",
            h0[i].product.to_string(), h0[j].product.to_string()));
      }
    }
  }
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < h0.size(); ++i) {
    if (commutes(h0[i].product, sigma1) == PauliRelation::anticommute) hits.push_back(i);
  }
  if (hits.size() != 1) {
    std::string listing;
    for (std::size_t i : hits) {
      if (!listing.empty()) listing += ", ";
      listing += h0[i].product.to_string();
    }
    throw PreconditionError(fmt::format(
        "find_su2_partner: exactly one term of H0 must anticommute with {}, found {}{}{}",
        sigma1.to_string(), hits.size(), hits.empty() ? "" : ": ", listing));
  }
  const std::size_t mu = hits.front();
  // -i = i^3.
  PauliProduct partner = h0[mu].product * sigma1;
  partner = partner.with_phase(partner.phase_exponent() + 3);
  return {mu, partner};
}

PauliSum decouple_hamiltonian(const PauliSum& h, const PauliProduct& sigma) {
  require_same_size(h.num_qubits(), sigma.num_qubits(), "decouple_hamiltonian");
  if (!sigma.is_phase_free()) {
    throw PreconditionError("decouple_hamiltonian: sigma must be phase-free");
  }
  std::vector<PauliTerm> kept;
  for (const auto& t : h.terms()) {
    if (commutes(t.product, sigma) == PauliRelation::commute) kept.push_back(t);
  }
  return PauliSum(h.num_qubits(), std::move(kept));
}

}  // namespace dqc1
