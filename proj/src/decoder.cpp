#include "mwnc/decoder.hpp"

#include <algorithm>
#include <string>

namespace mwnc {

SingularSystemError::SingularSystemError(std::size_t receiver, std::int64_t slot,
                                         std::int64_t packet)
    : std::runtime_error("slot " + std::to_string(slot) + ": receiver " +
                         std::to_string(receiver + 1) + " has a zero pivot for packet " +
                         std::to_string(packet) +
                         " (coefficients cancelled; use a wider field such as q=32)"),
      receiver_(receiver),
      slot_(slot),
      packet_(packet) {}

DecodeOps count_decode_ops(std::span<const RowSpan> rows, std::int64_t decoded_through,
                           std::vector<std::int64_t>& reach) {
  DecodeOps ops;
  const auto k = static_cast<std::int64_t>(rows.size());
  reach.resize(rows.size());
  const std::int64_t d = decoded_through;
  for (std::int64_t r = 0; r < k; ++r) {
    const RowSpan& row = rows[static_cast<std::size_t>(r)];
    if (row.lo <= d) ops.step1 += static_cast<std::uint64_t>(d - row.lo + 1);
    const std::int64_t first = std::max<std::int64_t>(row.lo - d - 1, 0);
    std::int64_t hi = row.hi - d - 1;
    for (std::int64_t c = first; c < r; ++c) {
      const std::int64_t rc = reach[static_cast<std::size_t>(c)];
      ops.step2 += static_cast<std::uint64_t>(rc - c + 1);
      hi = std::max(hi, rc);
    }
    ops.step2 += static_cast<std::uint64_t>(hi - r + 1);
    reach[static_cast<std::size_t>(r)] = hi;
  }
  // Back substitution touches every entry right of each pivot once.
  for (std::int64_t r = 0; r < k; ++r) {
    ops.step2 += static_cast<std::uint64_t>(reach[static_cast<std::size_t>(r)] - r);
  }
  return ops;
}

DecodeOps count_decode_ops(std::span<const RowSpan> rows, std::int64_t decoded_through) {
  std::vector<std::int64_t> scratch;
  return count_decode_ops(rows, decoded_through, scratch);
}

std::uint64_t step2_ceiling(std::int64_t k) {
  const auto u = static_cast<std::uint64_t>(std::max<std::int64_t>(k, 0));
  // forward k^2 (k+1)/2, normalization k(k+1), back substitution k(k-1)/2
  return u * u * (u + 1) / 2 + u * (u + 1) + u * (u > 0 ? u - 1 : 0) / 2;
}

Receiver::Receiver(std::size_t index, const GaloisField& field, std::uint64_t coefficient_seed,
                   bool carry_payload)
    : index_(index), field_(&field), coefficients_(coefficient_seed, field), carry_(carry_payload) {}

bool Receiver::on_receive(const CodedPacket& cp, bool delivered, const ArrivalCount& arrivals) {
  if (!delivered) return false;
  // A[t] - S_i[t-1] >= 1, i.e. the window holds an unseen packet.
  if (arrivals.ticks - seen_ * arrivals.unit < arrivals.unit) return false;
  ++seen_;
  spans_.push_back({cp.lo, cp.hi});
  if (carry_) {
    StoredRow row;
    row.coefficients.resize(static_cast<std::size_t>(cp.window()));
    coefficients_.fill(cp.slot, cp.lo, row.coefficients);
    row.payload = cp.payload;
    rows_.push_back(std::move(row));
  }
  return true;
}

const Packet& Receiver::decoded_packet(std::int64_t id) const {
  if (id <= decoded_base_ || id > decoded_through_) {
    throw std::logic_error("receiver " + std::to_string(index_ + 1) + " no longer holds packet " +
                           std::to_string(id));
  }
  return decoded_[static_cast<std::size_t>(id - decoded_base_ - 1)];
}

DecodeResult Receiver::decode_batch(std::int64_t t, const ArrivalCount& arrivals) {
  if (!at_decoding_moment(arrivals)) {
    throw std::logic_error("decode_batch outside a decoding moment at slot " + std::to_string(t));
  }
  DecodeResult out;
  out.first_id = decoded_through_ + 1;
  out.last_id = seen_;
  if (static_cast<std::int64_t>(spans_.size()) != seen_ - decoded_through_) {
    throw std::logic_error("pending rows do not match the seen counter");
  }

  out.ops = count_decode_ops(spans_, decoded_through_, scratch_);
  if (carry_) eliminate(t, out);

  out.record.receiver = index_;
  out.record.end_slot = t;
  out.record.interval = t - last_moment_slot_;
  out.record.packets = seen_ - decoded_through_;
  out.record.start_queue = last_moment_queue_;
  out.record.unit = arrivals.unit;
  out.record.start_decoded = decoded_through_;

  op_count_ += out.ops.total();
  decoded_through_ = seen_;
  last_moment_slot_ = t;
  last_moment_queue_ = queue_ticks(arrivals);
  spans_.clear();
  rows_.clear();
  return out;
}

void Receiver::eliminate(std::int64_t t, DecodeResult& out) {
  const GaloisField& f = *field_;
  const std::int64_t d = decoded_through_;
  const auto k = static_cast<std::int64_t>(spans_.size());
  const auto uk = static_cast<std::size_t>(k);

  std::vector<Symbol> m(uk * uk, 0);
  auto at = [&](std::int64_t r, std::int64_t c) -> Symbol& {
    return m[static_cast<std::size_t>(r) * uk + static_cast<std::size_t>(c)];
  };
  std::vector<std::int64_t> reach(uk);
  DecodeOps counted;

  // Step 1: move the contribution of already-decoded packets to the right-hand side.
  for (std::int64_t r = 0; r < k; ++r) {
    const RowSpan span = spans_[static_cast<std::size_t>(r)];
    auto& row = rows_[static_cast<std::size_t>(r)];
    for (std::int64_t id = span.lo; id <= span.hi; ++id) {
      const Symbol coef = row.coefficients[static_cast<std::size_t>(id - span.lo)];
      if (id <= d) {
        f.axpy(row.payload, coef, decoded_packet(id).symbols);
        ++counted.step1;
      } else {
        at(r, id - d - 1) = coef;
      }
    }
  }

  // Step 2, forward: row r becomes the pivot for packet d+1+r.
  for (std::int64_t r = 0; r < k; ++r) {
    const RowSpan span = spans_[static_cast<std::size_t>(r)];
    auto& payload = rows_[static_cast<std::size_t>(r)].payload;
    std::int64_t hi = span.hi - d - 1;
    for (std::int64_t c = std::max<std::int64_t>(span.lo - d - 1, 0); c < r; ++c) {
      const Symbol factor = at(r, c);
      const std::int64_t rc = reach[static_cast<std::size_t>(c)];
      for (std::int64_t col = c + 1; col <= rc; ++col) at(r, col) ^= f.mul(factor, at(c, col));
      f.axpy(payload, factor, rows_[static_cast<std::size_t>(c)].payload);
      at(r, c) = 0;
      counted.step2 += static_cast<std::uint64_t>(rc - c + 1);
      hi = std::max(hi, rc);
    }
    const Symbol pivot = at(r, r);
    if (pivot == 0) throw SingularSystemError(index_, t, d + 1 + r);
    const Symbol inverse = f.inv(pivot);
    for (std::int64_t col = r + 1; col <= hi; ++col) at(r, col) = f.mul(at(r, col), inverse);
    f.scale(payload, inverse);
    at(r, r) = 1;
    counted.step2 += static_cast<std::uint64_t>(hi - r + 1);
    reach[static_cast<std::size_t>(r)] = hi;
  }

  // Back substitution: the highest packet is decoded first, then substituted downward.
  for (std::int64_t c = k - 1; c >= 0; --c) {
    const auto& solved = rows_[static_cast<std::size_t>(c)].payload;
    for (std::int64_t r = 0; r < c; ++r) {
      if (reach[static_cast<std::size_t>(r)] < c) continue;
      f.axpy(rows_[static_cast<std::size_t>(r)].payload, at(r, c), solved);
      ++counted.step2;
    }
  }

  if (!(counted == out.ops)) throw std::logic_error("decode operation count mismatch");

  out.packets.reserve(uk);
  for (std::int64_t r = 0; r < k; ++r) {
    Packet p{d + 1 + r, std::move(rows_[static_cast<std::size_t>(r)].payload)};
    decoded_.push_back(p);
    out.packets.push_back(std::move(p));
  }
}

void Receiver::sync_mirror(std::int64_t z) {
  z_mirror_ = z;
  if (!carry_) return;
  // Keep every decoded packet a pending or future row may still reference.
  std::int64_t keep_from = z + 1;
  if (!spans_.empty()) keep_from = std::min(keep_from, spans_.front().lo);
  while (decoded_base_ + 1 < keep_from && !decoded_.empty()) {
    decoded_.pop_front();
    ++decoded_base_;
  }
}

}  // namespace mwnc
