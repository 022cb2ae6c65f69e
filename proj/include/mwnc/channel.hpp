#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mwnc {

struct ChannelConfig {
  std::vector<double> gammas;  // per-receiver success probability, each in (0, 1]
  std::uint64_t seed = 1;

  void validate() const;
  /// gamma = min_i gamma_i.
  double bottleneck() const;
};

/// i.i.d. Bernoulli erasure broadcast channel; c_i[t] is a pure function of (seed, i, t).
class ErasureChannel {
 public:
  explicit ErasureChannel(ChannelConfig cfg);

  bool delivered(std::size_t receiver, std::int64_t t) const;
  /// Writes c_i[t] for every receiver into out.
  void draw_slot(std::int64_t t, std::span<std::uint8_t> out) const;

  std::size_t receivers() const { return thresholds_.size(); }
  const ChannelConfig& config() const { return cfg_; }

 private:
  ChannelConfig cfg_;
  std::vector<std::uint64_t> stream_keys_;
  // delivered iff hash < threshold; UINT64_MAX with always_ marks gamma = 1.
  std::vector<std::uint64_t> thresholds_;
  std::vector<std::uint8_t> always_;
};

}  // namespace mwnc
