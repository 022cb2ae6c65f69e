#include "mwnc/galois.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace mwnc {

std::uint64_t clmul(std::uint32_t a, std::uint32_t b) {
  std::uint64_t acc = 0;
  std::uint64_t wide = a;
  while (b != 0) {
    if (b & 1u) acc ^= wide;
    wide <<= 1;
    b >>= 1;
  }
  return acc;
}

std::uint64_t poly_mod(std::uint64_t value, std::uint64_t poly) {
  const int deg = 63 - std::countl_zero(poly);
  while (value != 0) {
    const int top = 63 - std::countl_zero(value);
    if (top < deg) break;
    value ^= poly << (top - deg);
  }
  return value;
}

bool is_irreducible(std::uint64_t poly) {
  if (poly < 2) return false;
  const int deg = 63 - std::countl_zero(poly);
  if (deg < 1) return false;
  // Trial division by every polynomial of degree 1..deg/2.
  for (int d = 1; d <= deg / 2; ++d) {
    const std::uint64_t lo = std::uint64_t{1} << d;
    const std::uint64_t hi = std::uint64_t{1} << (d + 1);
    for (std::uint64_t f = lo; f < hi; ++f) {
      if (poly_mod(poly, f) == 0) return false;
    }
  }
  return true;
}

std::uint64_t default_polynomial(unsigned q) {
  switch (q) {
    case 4: return 0x13;             // x^4 + x + 1
    case 8: return 0x11B;            // x^8 + x^4 + x^3 + x + 1
    case 16: return 0x1002B;         // x^16 + x^5 + x^3 + x + 1
    case 32: return 0x10000008DULL;  // x^32 + x^7 + x^3 + x^2 + 1
    default:
      throw std::invalid_argument("unsupported field exponent q=" + std::to_string(q) +
                                  " (expected 4, 8, 16 or 32)");
  }
}

GaloisField::GaloisField(unsigned q) : GaloisField(q, default_polynomial(q)) {}

GaloisField::GaloisField(unsigned q, std::uint64_t polynomial) : q_(q), poly_(polynomial) {
  if (q != 4 && q != 8 && q != 16 && q != 32) {
    throw std::invalid_argument("unsupported field exponent q=" + std::to_string(q));
  }
  if (63 - std::countl_zero(polynomial) != static_cast<int>(q)) {
    throw std::invalid_argument("reduction polynomial degree does not match q");
  }
  if (!is_irreducible(polynomial)) {
    throw std::invalid_argument("reduction polynomial is not irreducible");
  }
  if (q <= 8) build_tables();
}

void GaloisField::build_tables() {
  const std::uint64_t order = multiplicative_order();
  // 0x11B has x of order 51, so search for a primitive element instead of assuming x.
  for (Symbol g = 2; g <= max_symbol(); ++g) {
    std::uint64_t period = 0;
    Symbol v = 1;
    do {
      v = slow_mul(v, g);
      ++period;
    } while (v != 1 && period <= order);
    if (period != order) continue;

    exp_.assign(2 * order, 0);
    log_.assign(order + 1, 0);
    v = 1;
    for (std::uint64_t k = 0; k < order; ++k) {
      exp_[k] = v;
      exp_[k + order] = v;
      log_[v] = static_cast<std::uint32_t>(k);
      v = slow_mul(v, g);
    }
    return;
  }
  throw std::logic_error("no primitive element found");
}

Symbol GaloisField::pow(Symbol a, std::uint64_t e) const {
  Symbol result = 1;
  while (e != 0) {
    if (e & 1u) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

Symbol GaloisField::inv(Symbol a) const {
  if (a == 0) throw FieldError("inverse of zero in GF(2^" + std::to_string(q_) + ")");
  if (!exp_.empty()) return exp_[multiplicative_order() - log_[a]];
  // a^(2^q - 2) = a^-1 by Fermat.
  return pow(a, multiplicative_order() - 1);
}

void GaloisField::axpy(std::span<Symbol> y, Symbol a, std::span<const Symbol> x) const {
  if (a == 0) return;
  const std::size_t n = std::min(y.size(), x.size());
  if (!exp_.empty()) {
    const std::uint32_t la = log_[a];
    for (std::size_t k = 0; k < n; ++k) {
      if (x[k] != 0) y[k] ^= exp_[la + log_[x[k]]];
    }
    return;
  }
  for (std::size_t k = 0; k < n; ++k) y[k] ^= mul(a, x[k]);
}

void GaloisField::scale(std::span<Symbol> y, Symbol a) const {
  for (auto& v : y) v = mul(v, a);
}

}  // namespace mwnc
