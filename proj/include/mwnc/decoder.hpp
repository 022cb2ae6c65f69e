#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "mwnc/coding.hpp"
#include "mwnc/galois.hpp"

namespace mwnc {

/// Raised when the reduced system at a decoding moment has a zero pivot.
///
/// With nonzero coefficients the leading unseen coefficient of every stored row
/// is nonzero when it arrives, but elimination against earlier rows can still
/// cancel it with probability about 2^-q per elimination.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(std::size_t receiver, std::int64_t slot, std::int64_t packet);

  std::size_t receiver() const { return receiver_; }
  std::int64_t slot() const { return slot_; }
  std::int64_t packet() const { return packet_; }

 private:
  std::size_t receiver_;
  std::int64_t slot_;
  std::int64_t packet_;
};

/// Global packet-index range [lo, hi] of a stored coded packet.
struct RowSpan {
  std::int64_t lo = 1;
  std::int64_t hi = 0;
};

/// Multiply-add counts for one batch decode. One operation is one field
/// multiplication plus one addition on a coefficient-matrix entry.
struct DecodeOps {
  std::uint64_t step1 = 0;  // substituting already-decoded packets
  std::uint64_t step2 = 0;  // Gauss-Jordan on the reduced K x K system

  std::uint64_t total() const { return step1 + step2; }
  friend bool operator==(const DecodeOps&, const DecodeOps&) = default;
};

/// Exact operation count of the two-step decode, from row spans alone.
///
/// Step 2 eliminates pivot c from every later row whose span reaches column c,
/// normalizes each pivot and back-substitutes from the highest packet down.
/// The full-coding decoder performs exactly these loops, so both modes agree.
DecodeOps count_decode_ops(std::span<const RowSpan> rows, std::int64_t decoded_through,
                           std::vector<std::int64_t>& scratch);
DecodeOps count_decode_ops(std::span<const RowSpan> rows, std::int64_t decoded_through);

/// Upper bound on the step-2 count for a K x K system.
std::uint64_t step2_ceiling(std::int64_t k);

/// One renewal interval of a receiver: the slots between decoding moments
/// t_j and t_{j+1} and the packets K_j decoded at t_{j+1}.
struct RenewalRecord {
  std::size_t receiver = 0;
  std::int64_t end_slot = 0;     // t_{j+1}
  std::int64_t interval = 0;     // T_j
  std::int64_t packets = 0;      // K_j
  std::int64_t start_queue = 0;  // Q_i[t_j] in ticks of 1/unit
  std::int64_t unit = 1;
  /// floor(A) at t_j; the packets decoded are first_id()..first_id()+packets-1.
  std::int64_t start_decoded = 0;

  std::int64_t first_id() const { return start_decoded + 1; }
  friend bool operator==(const RenewalRecord&, const RenewalRecord&) = default;
};

struct DecodeResult {
  std::int64_t first_id = 1;
  std::int64_t last_id = 0;  // empty when last_id < first_id
  DecodeOps ops;
  RenewalRecord record;
  std::vector<Packet> packets;  // full-coding mode only
};

/// Per-receiver decoder state: seen counter S_i, mirror Z_i, rows stored since
/// the last decoding moment, and operation accounting.
class Receiver {
 public:
  Receiver(std::size_t index, const GaloisField& field, std::uint64_t coefficient_seed,
           bool carry_payload);

  /// Data sub-slot: S_i[t] = S_i[t-1] + c * 1{A[t] - S_i[t-1] >= 1}.
  /// Stores the coded packet when S_i advances; returns whether it did.
  bool on_receive(const CodedPacket& cp, bool delivered, const ArrivalCount& arrivals);

  /// floor(A[t]) == S_i[t].
  bool at_decoding_moment(const ArrivalCount& arrivals) const {
    return arrivals.whole() == seen_;
  }

  /// Decodes every packet seen since the previous decoding moment.
  DecodeResult decode_batch(std::int64_t t, const ArrivalCount& arrivals);

  /// Beacon sub-slot: adopt the transmitter's Z[t].
  void sync_mirror(std::int64_t z);

  std::size_t index() const { return index_; }
  std::int64_t seen() const { return seen_; }
  std::int64_t z_mirror() const { return z_mirror_; }
  std::int64_t decoded_through() const { return decoded_through_; }
  std::uint64_t op_count() const { return op_count_; }
  std::int64_t last_moment() const { return last_moment_slot_; }
  std::span<const RowSpan> pending_rows() const { return spans_; }
  bool carries_payload() const { return carry_; }

  /// Q_i[t] = A[t] - S_i[t] in ticks.
  std::int64_t queue_ticks(const ArrivalCount& arrivals) const {
    return arrivals.ticks - seen_ * arrivals.unit;
  }

 private:
  struct StoredRow {
    std::vector<Symbol> coefficients;  // over the row span
    std::vector<Symbol> payload;
  };

  const Packet& decoded_packet(std::int64_t id) const;
  void eliminate(std::int64_t t, DecodeResult& out);

  std::size_t index_;
  const GaloisField* field_;
  CoefficientStream coefficients_;
  bool carry_;

  std::int64_t seen_ = 0;
  std::int64_t z_mirror_ = 0;
  std::int64_t decoded_through_ = 0;
  std::int64_t last_moment_slot_ = 0;
  std::int64_t last_moment_queue_ = 0;
  std::uint64_t op_count_ = 0;

  std::vector<RowSpan> spans_;
  std::vector<StoredRow> rows_;
  std::deque<Packet> decoded_;  // ids decoded_base_+1 .. decoded_through_
  std::int64_t decoded_base_ = 0;
  std::vector<std::int64_t> scratch_;
};

}  // namespace mwnc
