#include "mwnc/simulator.hpp"

#include <algorithm>
#include <limits>

namespace mwnc {

std::string_view to_string(Mode mode) { return mode == Mode::full ? "full" : "dynamics"; }

Mode parse_mode(std::string_view text) {
  if (text == "dynamics" || text == "dynamics_only") return Mode::dynamics;
  if (text == "full" || text == "full_coding") return Mode::full;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (dynamics|full)");
}

double SimConfig::rho() const {
  return injection.lambda.value() / ChannelConfig{gammas, channel_seed}.bottleneck();
}

void SimConfig::validate() const {
  ChannelConfig{gammas, channel_seed}.validate();
  injection.validate();
  feedback.validate();
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  if (warmup < 0) throw std::invalid_argument("warmup must be >= 0");
  const double gamma = ChannelConfig{gammas, channel_seed}.bottleneck();
  // lambda < gamma, compared exactly enough: lambda is rational, gamma a double.
  if (!(static_cast<long double>(injection.lambda.num) <
        static_cast<long double>(gamma) * static_cast<long double>(injection.lambda.den))) {
    throw std::invalid_argument("stability requires lambda < min gamma_i (lambda = " +
                                injection.lambda.str() + ", gamma = " + std::to_string(gamma) +
                                ")");
  }
  if (mode == Mode::full && symbols_per_packet == 0) {
    throw std::invalid_argument("full mode needs symbols_per_packet >= 1");
  }
  for (std::size_t r : renewal_receivers) {
    if (r >= n()) throw std::invalid_argument("renewal receiver index out of range");
  }
}

Simulator::Simulator(SimConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      field_(cfg_.polynomial == 0 ? std::make_unique<GaloisField>(cfg_.q)
                                  : std::make_unique<GaloisField>(cfg_.q, cfg_.polynomial)),
      channel_(ChannelConfig{cfg_.gammas, cfg_.channel_seed}),
      metrics_(cfg_.n()) {
  const bool full = cfg_.mode == Mode::full;
  if (full) payload_ = std::make_unique<PayloadSource>(cfg_.payload_seed, cfg_.symbols_per_packet, cfg_.q);
  encoder_ = std::make_unique<Encoder>(cfg_.injection, *field_, cfg_.coefficient_seed, payload_.get());
  receivers_.reserve(cfg_.n());
  for (std::size_t i = 0; i < cfg_.n(); ++i) {
    receivers_.emplace_back(i, *field_, cfg_.coefficient_seed, full);
  }
  delivered_.assign(cfg_.n(), 0);
  tracked_.assign(cfg_.n(), 0);
  for (std::size_t r : cfg_.renewal_receivers) tracked_[r] = 1;
  window_at_moment_.assign(cfg_.n(), 0);
  shadow_queue_.assign(cfg_.n(), 0);
  metrics_.payload_checked = full;
}

void Simulator::violation(std::uint64_t& counter, const char* what) {
  ++counter;
  if (cfg_.abort_on_violation) throw InvariantViolation(t_, what);
}

void Simulator::record_decode(Receiver& r, const DecodeResult& res) {
  const std::size_t i = r.index();
  ReceiverMetrics& rm = metrics_.receivers[i];
  const std::int64_t k = res.record.packets;
  rm.interval_sum += res.record.interval;
  rm.packet_sum += k;
  rm.last_moment = t_;

  if (cfg_.check_invariants) {
    if (res.ops.step1 > static_cast<std::uint64_t>(k * window_at_moment_[i])) {
      violation(metrics_.invariants.step1_ceiling, "step-1 operations exceed K * W");
    }
    if (res.ops.step2 > step2_ceiling(k)) {
      violation(metrics_.invariants.step2_ceiling, "step-2 operations exceed the cubic ceiling");
    }
  }
  window_at_moment_[i] = encoder_->window();

  if (payload_) {
    for (const Packet& p : res.packets) {
      if (p == payload_->make(p.id)) {
        ++metrics_.payload_verified;
      } else {
        ++metrics_.payload_mismatched;
      }
    }
  }

  if (t_ <= cfg_.warmup) return;
  ++rm.decoding_moments;
  rm.step1_ops += res.ops.step1;
  rm.step2_ops += res.ops.step2;
  rm.renewal.add(res.record.interval, k);
  if (tracked_[i] != 0) metrics_.renewals.push_back(res.record);
  for (std::int64_t id = res.first_id; id <= res.last_id; ++id) {
    const std::int64_t d = t_ - assembly_.slot_of(id);
    rm.delay.add(d);
    if (cfg_.keep_delay_log) rm.delay_log.push_back(d);
  }
  rm.decoded += static_cast<std::uint64_t>(k);
}

void Simulator::check_slot(std::int64_t window) {
  InvariantCounts& ic = metrics_.invariants;
  ++ic.slots_checked;
  const ArrivalCount& a = encoder_->arrivals();
  const std::int64_t z = encoder_->departed();
  std::int64_t min_seen = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_queue = 0;
  bool mirror_ok = true;
  bool recurrence_ok = true;
  for (std::size_t i = 0; i < receivers_.size(); ++i) {
    const Receiver& r = receivers_[i];
    min_seen = std::min(min_seen, r.seen());
    max_queue = std::max(max_queue, r.queue_ticks(a));
    mirror_ok = mirror_ok && r.z_mirror() == z;
    recurrence_ok = recurrence_ok && shadow_queue_[i] == r.queue_ticks(a);
  }
  if (!recurrence_ok) violation(ic.queue_recurrence, "queue recurrence disagrees with A - S_i");
  if (!mirror_ok) violation(ic.mirror, "a receiver mirror differs from Z");
  if (z > min_seen) violation(ic.safety, "Z exceeds min_i S_i");
  if (z % cfg_.feedback.b_af != 0) violation(ic.frame_multiple, "Z is not a multiple of b_af");
  if (cfg_.feedback.b_af == 1) {
    if (z != min_seen) violation(ic.min_seen, "Z differs from min_i S_i");
    const std::int64_t diff = window * a.unit - max_queue;
    if (diff < -a.unit || diff > a.unit) violation(ic.window_bounds, "W outside max Q +- 1");
  }
}

void Simulator::step() {
  ++t_;
  const std::int64_t z_prev = encoder_->departed();
  const std::int64_t before = encoder_->assembled();
  encoder_->inject(t_);
  for (std::int64_t id = before + 1; id <= encoder_->assembled(); ++id) assembly_.record(id, t_);
  const ArrivalCount& a = encoder_->arrivals();
  const std::int64_t a_ticks = encoder_->last_injection_ticks();
  const std::int64_t window = encoder_->window();
  packet_ = encoder_->encode(t_);

  const bool measured = t_ > cfg_.warmup;
  if (measured) {
    ++metrics_.slots;
    metrics_.encoder_ops += static_cast<std::uint64_t>(window);
    metrics_.window.add(window);
  }

  channel_.draw_slot(t_, delivered_);
  for (std::size_t i = 0; i < receivers_.size(); ++i) {
    Receiver& r = receivers_[i];
    if (cfg_.check_invariants) {
      std::int64_t& q = shadow_queue_[i];
      q += a_ticks;
      if (delivered_[i] != 0 && q >= a.unit) q -= a.unit;
    }
    r.on_receive(packet_, delivered_[i] != 0, a);
    if (r.at_decoding_moment(a)) record_decode(r, r.decode_batch(t_, a));
    if (measured) metrics_.receivers[i].queue.add(r.queue_ticks(a) / a.unit);
  }

  bool round = false;
  bool held = false;
  if (cfg_.feedback.is_frame_end(t_)) {
    const BeaconOutcome out = beacon_round(receivers_, *encoder_, t_, cfg_.feedback);
    round = true;
    held = out.held;
    ++metrics_.beacon_rounds;
    if (out.held) ++metrics_.beacon_holds;
    metrics_.removed += static_cast<std::uint64_t>(out.removed);
  }

  if ((t_ & 255) == 0) {
    std::int64_t low = std::numeric_limits<std::int64_t>::max();
    for (const Receiver& r : receivers_) low = std::min(low, r.decoded_through());
    assembly_.drop_through(low);
  }

  if (cfg_.check_invariants) check_slot(window);

  if (observer_) {
    SlotView v;
    v.t = t_;
    v.a_ticks = a_ticks;
    v.arrivals = a;
    v.window = window;
    v.z_prev = z_prev;
    v.z = encoder_->departed();
    v.receivers = receivers_;
    v.delivered = delivered_;
    v.packet = payload_ ? &packet_ : nullptr;
    v.beacon_round = round;
    v.held = held;
    observer_(v);
  }
}

void Simulator::run() {
  while (t_ < cfg_.slots) step();
}

Metrics run(const SimConfig& cfg) {
  Simulator sim(cfg);
  sim.run();
  return sim.take_metrics();
}

}  // namespace mwnc
