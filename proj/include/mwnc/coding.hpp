#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mwnc/galois.hpp"

namespace mwnc {

/// Exact non-negative rational num/den in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  /// Accepts "p/q", integers and plain decimals such as "0.54" (parsed exactly).
  static Rational parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// A[t] counted in units of 1/unit packets, so all queue arithmetic is integral.
struct ArrivalCount {
  std::int64_t ticks = 0;
  std::int64_t unit = 1;

  /// floor(A[t]), the number of fully assembled packets.
  std::int64_t whole() const { return ticks / unit; }
  double value() const { return static_cast<double>(ticks) / static_cast<double>(unit); }
};

enum class InjectionKind { constant, bernoulli };

std::string_view to_string(InjectionKind kind);
InjectionKind parse_injection_kind(std::string_view text);

/// i.i.d. per-slot injection a[t] with mean lambda packets/slot.
///
/// constant: a[t] = lambda exactly. bernoulli: a[t] = 1 with probability lambda.
struct InjectionProcess {
  InjectionKind kind = InjectionKind::constant;
  Rational lambda{1, 2};
  std::uint64_t seed = 0;

  /// The denominator shared by every a[t] of this process.
  std::int64_t unit() const { return lambda.den; }
  /// a[t] in ticks of 1/unit().
  std::int64_t ticks(std::int64_t t) const;
  void validate() const;
};

struct Packet {
  std::int64_t id = 0;  // 1-based assembly order
  std::vector<Symbol> symbols;

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// Deterministic payload bytes: symbol k of packet m is a hash of (seed, m, k).
class PayloadSource {
 public:
  PayloadSource(std::uint64_t seed, std::size_t symbols_per_packet, unsigned q);

  Packet make(std::int64_t id) const;
  std::size_t symbols_per_packet() const { return symbols_; }

 private:
  std::uint64_t seed_;
  std::size_t symbols_;
  Symbol mask_;
};

/// Coefficients alpha_{t,m}, uniform on GF(2^q) \ {0}, regenerable from (seed, t, m).
class CoefficientStream {
 public:
  CoefficientStream(std::uint64_t seed, const GaloisField& field)
      : seed_(seed), nonzero_(field.multiplicative_order()) {}

  Symbol at(std::int64_t t, std::int64_t m) const;
  /// Writes alpha_{t,lo..hi} into out (out.size() == hi - lo + 1).
  void fill(std::int64_t t, std::int64_t lo, std::span<Symbol> out) const;

 private:
  std::uint64_t seed_;
  std::uint64_t nonzero_;
};

/// x[t] = sum_{m=lo}^{hi} alpha_{t,m} p_m with lo = Z[t-1]+1 and hi = floor(A[t]).
struct CodedPacket {
  std::int64_t slot = 0;
  std::int64_t lo = 1;
  std::int64_t hi = 0;
  std::vector<Symbol> payload;
  std::vector<Symbol> coefficients;  // indexed lo..hi

  std::int64_t window() const { return hi >= lo ? hi - lo + 1 : 0; }
  bool idle() const { return hi < lo; }
};

/// Maps packet ids to the slot in which they were assembled.
class AssemblyLog {
 public:
  void record(std::int64_t id, std::int64_t slot);
  std::int64_t slot_of(std::int64_t id) const;
  /// Forgets every id <= id.
  void drop_through(std::int64_t id);
  std::int64_t last_id() const { return base_ + static_cast<std::int64_t>(slots_.size()); }

 private:
  std::int64_t base_ = 0;  // ids <= base_ were dropped
  std::deque<std::int64_t> slots_;
};

/// The moving-window encoder: accumulates A[t], keeps packets Z+1..floor(A), emits x[t].
///
/// With a null payload source only the counters are maintained (no packet buffer).
class Encoder {
 public:
  Encoder(InjectionProcess injection, const GaloisField& field, std::uint64_t coefficient_seed,
          const PayloadSource* payload);

  /// Applies a[t]; returns the number of packets newly assembled in slot t.
  std::int64_t inject(std::int64_t t);
  /// Builds x[t] over the current window. Requires payload mode.
  CodedPacket encode(std::int64_t t) const;
  /// W[t] = floor(A[t]) - Z[t-1] for the current slot.
  std::int64_t window() const { return arrivals_.whole() - departed_; }
  void remove_oldest(std::int64_t count);

  const ArrivalCount& arrivals() const { return arrivals_; }
  std::int64_t last_injection_ticks() const { return last_ticks_; }
  std::int64_t assembled() const { return arrivals_.whole(); }
  std::int64_t departed() const { return departed_; }
  std::int64_t slot() const { return slot_; }
  const std::deque<Packet>& buffer() const { return buffer_; }
  bool carries_payload() const { return payload_ != nullptr; }

 private:
  InjectionProcess injection_;
  const GaloisField& field_;
  CoefficientStream coefficients_;
  const PayloadSource* payload_;
  ArrivalCount arrivals_;
  std::int64_t last_ticks_ = 0;
  std::int64_t departed_ = 0;
  std::int64_t slot_ = 0;
  std::deque<Packet> buffer_;
};

}  // namespace mwnc
