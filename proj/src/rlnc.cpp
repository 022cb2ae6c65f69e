#include "mwnc/rlnc.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mwnc/channel.hpp"

namespace mwnc {

void RlncConfig::validate() const {
  ChannelConfig{gammas, channel_seed}.validate();
  injection.validate();
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  if (warmup < 0) throw std::invalid_argument("warmup must be >= 0");
}

std::int64_t rlnc_saturation_threshold(std::int64_t batch_size, std::int64_t assembled) {
  return 2 * batch_size + std::max<std::int64_t>(100, assembled / 100);
}

Metrics run_rlnc(const RlncConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.gammas.size();
  const std::int64_t b = cfg.batch_size;
  const std::uint64_t cost = static_cast<std::uint64_t>(b) * static_cast<std::uint64_t>(b);
  ErasureChannel channel(ChannelConfig{cfg.gammas, cfg.channel_seed});
  Metrics m(n);
  ArrivalCount a{0, cfg.injection.unit()};
  AssemblyLog assembly;
  std::vector<std::uint8_t> delivered(n, 0);
  std::vector<std::int64_t> rank(n, 0);
  std::vector<std::int64_t> decoded_through(n, 0);

  std::int64_t batch_base = 0;  // packets in completed batches
  std::int64_t finished = 0;    // receivers done with the current batch
  bool start_next = false;

  for (std::int64_t t = 1; t <= cfg.slots; ++t) {
    if (start_next) {
      batch_base += b;
      std::fill(rank.begin(), rank.end(), 0);
      finished = 0;
      start_next = false;
    }
    const std::int64_t before = a.whole();
    a.ticks += cfg.injection.ticks(t);
    for (std::int64_t id = before + 1; id <= a.whole(); ++id) assembly.record(id, t);

    const std::int64_t available = std::clamp<std::int64_t>(a.whole() - batch_base, 0, b);
    const bool measured = t > cfg.warmup;
    if (measured) {
      ++m.slots;
      m.encoder_ops += static_cast<std::uint64_t>(available);
      m.window.add(available);
    }

    channel.draw_slot(t, delivered);
    for (std::size_t i = 0; i < n; ++i) {
      if (delivered[i] != 0 && rank[i] < available) {
        if (++rank[i] == b) {
          ++finished;
          const std::int64_t first = batch_base + 1;
          const std::int64_t last = batch_base + b;
          decoded_through[i] = last;
          if (measured) {
            ReceiverMetrics& rm = m.receivers[i];
            for (std::int64_t id = first; id <= last; ++id) rm.delay.add(t - assembly.slot_of(id));
            rm.decoded += static_cast<std::uint64_t>(b);
            rm.step2_ops += cost * static_cast<std::uint64_t>(b);
            ++rm.decoding_moments;
          }
        }
      }
      if (measured) m.receivers[i].queue.add(a.whole() - decoded_through[i]);
    }
    if (finished == static_cast<std::int64_t>(n)) {
      start_next = true;
      assembly.drop_through(batch_base + b);
    }
  }

  const std::int64_t completed = batch_base + (start_next ? b : 0);
  const std::int64_t backlog = a.whole() - completed;
  m.backlog = static_cast<std::uint64_t>(backlog);
  m.saturated = backlog >= rlnc_saturation_threshold(b, a.whole());
  return m;
}

RlncSweep sweep_batch_sizes(const RlncConfig& base, const std::vector<std::int64_t>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty batch-size grid");
  RlncSweep sweep;
  for (std::int64_t bsz : grid) {
    RlncConfig cfg = base;
    cfg.batch_size = bsz;
    const Metrics m = run_rlnc(cfg);
    RlncPoint p;
    p.batch_size = bsz;
    p.saturated = m.saturated;
    p.decoded = m.decoded();
    const bool all_decoded = std::all_of(m.receivers.begin(), m.receivers.end(),
                                         [](const ReceiverMetrics& r) { return r.decoded > 0; });
    if (!m.saturated && all_decoded) {
      const Scalars s = estimate_scalars(m);
      p.mean_delay = s.mean_delay.front();
      p.mean_delay_worst = s.mean_delay_worst;
      p.mean_window = s.mean_window;
    } else {
      p.saturated = true;
    }
    sweep.points.push_back(p);
    const auto idx = static_cast<int>(sweep.points.size() - 1);
    if (!p.saturated && (sweep.best < 0 || p.mean_delay < sweep.points[static_cast<std::size_t>(sweep.best)].mean_delay)) {
      sweep.best = idx;
    }
  }
  return sweep;
}

}  // namespace mwnc
