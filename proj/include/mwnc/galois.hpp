#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mwnc {

/// A symbol of GF(2^q), stored in the low q bits.
using Symbol = std::uint32_t;

/// Thrown for inversion or division by the zero element.
class FieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Carry-less product of two polynomials over GF(2) (no reduction).
std::uint64_t clmul(std::uint32_t a, std::uint32_t b);

/// Reduces a polynomial over GF(2) modulo `poly`.
std::uint64_t poly_mod(std::uint64_t value, std::uint64_t poly);

/// True when `poly` (degree given by its top bit) has no factor of lower degree.
bool is_irreducible(std::uint64_t poly);

/// The reduction polynomial used when none is given for exponent `q`.
std::uint64_t default_polynomial(unsigned q);

/// Arithmetic in GF(2^q) for q in {4, 8, 16, 32}.
///
/// Small fields (q <= 8) use exp/log tables; the wide fields multiply with a
/// carry-less product followed by reduction. Immutable after construction.
class GaloisField {
 public:
  explicit GaloisField(unsigned q = 8);
  GaloisField(unsigned q, std::uint64_t polynomial);

  unsigned exponent() const { return q_; }
  std::uint64_t polynomial() const { return poly_; }
  /// Number of nonzero elements, 2^q - 1.
  std::uint64_t multiplicative_order() const { return (std::uint64_t{1} << q_) - 1; }
  Symbol max_symbol() const { return static_cast<Symbol>(multiplicative_order()); }
  bool uses_tables() const { return !exp_.empty(); }

  static Symbol add(Symbol a, Symbol b) { return a ^ b; }
  static Symbol sub(Symbol a, Symbol b) { return a ^ b; }

  Symbol mul(Symbol a, Symbol b) const {
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return slow_mul(a, b);
  }
  Symbol inv(Symbol a) const;
  Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

  /// y[k] += a * x[k] for every k.
  void axpy(std::span<Symbol> y, Symbol a, std::span<const Symbol> x) const;
  /// y[k] *= a for every k.
  void scale(std::span<Symbol> y, Symbol a) const;

  /// Table accessors, empty for the wide fields.
  std::span<const Symbol> exp_table() const { return exp_; }
  std::span<const std::uint32_t> log_table() const { return log_; }

 private:
  Symbol slow_mul(Symbol a, Symbol b) const {
    return static_cast<Symbol>(poly_mod(clmul(a, b), poly_));
  }
  Symbol pow(Symbol a, std::uint64_t e) const;
  void build_tables();

  unsigned q_;
  std::uint64_t poly_;
  // exp_ is doubled so log(a)+log(b) never needs a modulo.
  std::vector<Symbol> exp_;
  std::vector<std::uint32_t> log_;
};

}  // namespace mwnc
