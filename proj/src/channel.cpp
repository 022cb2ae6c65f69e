#include "mwnc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mwnc/random.hpp"

namespace mwnc {

void ChannelConfig::validate() const {
  if (gammas.empty()) throw std::invalid_argument("channel needs at least one receiver");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const double g = gammas[i];
    if (!(g > 0.0 && g <= 1.0)) {
      throw std::invalid_argument("gamma_" + std::to_string(i + 1) + " = " + std::to_string(g) +
                                  " outside (0, 1]");
    }
  }
}

double ChannelConfig::bottleneck() const {
  if (gammas.empty()) throw std::invalid_argument("channel needs at least one receiver");
  return *std::min_element(gammas.begin(), gammas.end());
}

ErasureChannel::ErasureChannel(ChannelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const std::size_t n = cfg_.gammas.size();
  stream_keys_.resize(n);
  thresholds_.resize(n);
  always_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    stream_keys_[i] = rng::mix64(cfg_.seed ^ rng::mix64(rng::kChannelStreamBase + i));
    const double g = cfg_.gammas[i];
    always_[i] = g >= 1.0 ? 1 : 0;
    thresholds_[i] = g >= 1.0 ? UINT64_MAX : static_cast<std::uint64_t>(std::ldexp(g, 64));
  }
}

bool ErasureChannel::delivered(std::size_t receiver, std::int64_t t) const {
  if (always_[receiver] != 0) return true;
  const std::uint64_t h = rng::mix64(stream_keys_[receiver] ^ rng::mix64(static_cast<std::uint64_t>(t)));
  return h < thresholds_[receiver];
}

void ErasureChannel::draw_slot(std::int64_t t, std::span<std::uint8_t> out) const {
  const std::uint64_t slot_key = rng::mix64(static_cast<std::uint64_t>(t));
  const std::size_t n = std::min(out.size(), thresholds_.size());
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (always_[i] != 0 || rng::mix64(stream_keys_[i] ^ slot_key) < thresholds_[i]) ? 1 : 0;
  }
}

}  // namespace mwnc
