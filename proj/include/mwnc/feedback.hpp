#pragma once

#include <cstdint>
#include <span>

#include "mwnc/coding.hpp"
#include "mwnc/decoder.hpp"

namespace mwnc {

struct FeedbackConfig {
  std::int64_t b_af = 1;  // frame length; 1 runs the beacon round every slot

  void validate() const;
  bool is_frame_end(std::int64_t t) const { return t % b_af == 0; }
};

/// Receiver-side beacon decision: removing b_af more packets would drop one
/// this receiver has not seen yet. For b_af = 1 this is S_i[t] = Z_i[t-1].
inline bool wants_beacon(const Receiver& r, const FeedbackConfig& cfg) {
  return r.seen() < r.z_mirror() + cfg.b_af;
}

/// Ideal OR of all beacons, relayed by the transmitter.
struct BeaconBus {
  bool any_beacon = false;
  std::size_t beacons = 0;  // receivers that beaconed; the transmitter never learns this

  void reset() { *this = {}; }
  void post(bool beacon) {
    any_beacon = any_beacon || beacon;
    beacons += beacon ? 1 : 0;
  }
};

struct BeaconOutcome {
  bool held = false;  // true when Z stayed put, false when b_af packets left the encoder
  std::int64_t removed = 0;
  std::int64_t z = 0;
  std::size_t beacons = 0;
};

/// Beacon sub-slot: collects beacons, advances Z by b_af when nobody objects,
/// and synchronizes every mirror Z_i to Z[t]. Must only be called at frame ends.
BeaconOutcome beacon_round(std::span<Receiver> receivers, Encoder& encoder, std::int64_t t,
                           const FeedbackConfig& cfg);

}  // namespace mwnc
