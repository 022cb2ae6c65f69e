#include "mwnc/feedback.hpp"

#include <stdexcept>
#include <string>

namespace mwnc {

void FeedbackConfig::validate() const {
  if (b_af < 1) throw std::invalid_argument("b_af must be >= 1, got " + std::to_string(b_af));
}

BeaconOutcome beacon_round(std::span<Receiver> receivers, Encoder& encoder, std::int64_t t,
                           const FeedbackConfig& cfg) {
  if (!cfg.is_frame_end(t)) {
    throw std::logic_error("beacon round at slot " + std::to_string(t) + " is not a frame end");
  }
  BeaconBus bus;
  for (const Receiver& r : receivers) bus.post(wants_beacon(r, cfg));

  BeaconOutcome out;
  out.beacons = bus.beacons;
  out.held = bus.any_beacon;
  if (!bus.any_beacon) {
    encoder.remove_oldest(cfg.b_af);
    out.removed = cfg.b_af;
  }
  out.z = encoder.departed();
  for (Receiver& r : receivers) r.sync_mirror(out.z);
  return out;
}

}  // namespace mwnc
