#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mwnc/channel.hpp"
#include "mwnc/coding.hpp"
#include "mwnc/decoder.hpp"
#include "mwnc/feedback.hpp"
#include "mwnc/galois.hpp"
#include "mwnc/metrics.hpp"

namespace mwnc {

enum class Mode { dynamics, full };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct SimConfig {
  std::vector<double> gammas{0.6};
  InjectionProcess injection;
  unsigned q = 8;
  std::uint64_t polynomial = 0;  // 0 selects the default for q
  FeedbackConfig feedback;
  std::int64_t slots = 100000;
  std::int64_t warmup = 10000;
  std::uint64_t coefficient_seed = 1;
  std::uint64_t channel_seed = 2;
  std::uint64_t payload_seed = 3;
  Mode mode = Mode::dynamics;
  std::size_t symbols_per_packet = 8;  // L / q in full mode

  bool check_invariants = false;
  bool abort_on_violation = true;
  std::vector<std::size_t> renewal_receivers{0};  // receivers whose records are kept
  bool keep_delay_log = false;

  std::size_t n() const { return gammas.size(); }
  double rho() const;
  /// Throws std::invalid_argument naming the violated condition.
  void validate() const;
};

/// Thrown by the slot loop when an invariant check fails and aborting is enabled.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::int64_t slot, const std::string& what)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
  std::int64_t slot() const { return slot_; }

 private:
  std::int64_t slot_;
};

/// Everything an observer may inspect at the end of slot t.
struct SlotView {
  std::int64_t t = 0;
  std::int64_t a_ticks = 0;  // a[t]
  ArrivalCount arrivals;     // A[t]
  std::int64_t window = 0;   // W[t]
  std::int64_t z_prev = 0;   // Z[t-1]
  std::int64_t z = 0;        // Z[t]
  std::span<const Receiver> receivers;
  std::span<const std::uint8_t> delivered;  // c_i[t]
  const CodedPacket* packet = nullptr;      // full mode only
  bool beacon_round = false;
  bool held = false;
};

class Simulator {
 public:
  using Observer = std::function<void(const SlotView&)>;

  explicit Simulator(SimConfig cfg);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  void set_observer(Observer obs) { observer_ = std::move(obs); }

  /// Runs slot t = slot() + 1.
  void step();
  /// Runs until slot() == cfg.slots.
  void run();

  std::int64_t slot() const { return t_; }
  const SimConfig& config() const { return cfg_; }
  const Metrics& metrics() const { return metrics_; }
  Metrics take_metrics() { return std::move(metrics_); }
  const Encoder& encoder() const { return *encoder_; }
  std::span<const Receiver> receivers() const { return receivers_; }
  const GaloisField& field() const { return *field_; }

 private:
  void violation(std::uint64_t& counter, const char* what);
  void record_decode(Receiver& r, const DecodeResult& res);
  void check_slot(std::int64_t window);

  SimConfig cfg_;
  std::unique_ptr<GaloisField> field_;
  std::unique_ptr<PayloadSource> payload_;
  std::unique_ptr<Encoder> encoder_;
  ErasureChannel channel_;
  std::vector<Receiver> receivers_;
  AssemblyLog assembly_;
  Metrics metrics_;
  Observer observer_;

  std::int64_t t_ = 0;
  std::vector<std::uint8_t> delivered_;
  std::vector<std::uint8_t> tracked_;
  std::vector<std::int64_t> window_at_moment_;
  std::vector<std::int64_t> shadow_queue_;  // Q_i by the recurrence, in ticks
  CodedPacket packet_;
};

/// Runs cfg from slot 1 to cfg.slots.
Metrics run(const SimConfig& cfg);

}  // namespace mwnc
