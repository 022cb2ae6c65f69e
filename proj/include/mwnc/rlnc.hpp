#pragma once

#include <cstdint>
#include <vector>

#include "mwnc/coding.hpp"
#include "mwnc/metrics.hpp"

namespace mwnc {

/// Batch RLNC over an idealized large field: every received combination of
/// the current batch is innovative while the receiver's rank is below the
/// number of batch packets already assembled.
struct RlncConfig {
  std::vector<double> gammas{0.6};
  InjectionProcess injection;
  std::int64_t batch_size = 16;
  std::int64_t slots = 100000;
  std::int64_t warmup = 10000;
  std::uint64_t channel_seed = 2;

  void validate() const;
};

/// Delay of packet m is the slot its batch decodes at the receiver minus its
/// assembly slot. Decode cost is B^2 per packet; W[t] is the number of batch
/// packets the slot's combination covers. A new batch starts the slot after
/// every receiver has decoded the previous one.
Metrics run_rlnc(const RlncConfig& cfg);

/// Backlog (packets assembled but not in a completed batch) at which a run is
/// flagged as saturated: 2B + max(100, floor(A) / 100).
std::int64_t rlnc_saturation_threshold(std::int64_t batch_size, std::int64_t assembled);

struct RlncPoint {
  std::int64_t batch_size = 0;
  bool saturated = false;
  double mean_delay = 0;  // receiver 1
  double mean_delay_worst = 0;
  double mean_window = 0;
  std::uint64_t decoded = 0;
};

struct RlncSweep {
  std::vector<RlncPoint> points;
  /// Index into points of the feasible batch size with the smallest mean delay, or -1.
  int best = -1;
};

RlncSweep sweep_batch_sizes(const RlncConfig& base, const std::vector<std::int64_t>& grid);

}  // namespace mwnc
