#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mwnc/decoder.hpp"

namespace mwnc {

/// Counts of non-negative integer observations, grown on demand.
class Histogram {
 public:
  void add(std::int64_t k, std::uint64_t count = 1) {
    const auto idx = static_cast<std::size_t>(k);
    if (k < 0 || idx >= counts_.size()) grow(k);
    counts_[idx] += count;
    total_ += count;
    sum_ += static_cast<std::uint64_t>(k) * count;
  }
  void merge(const Histogram& other);

  std::uint64_t total() const { return total_; }
  /// Sum of k over all observations.
  std::uint64_t sum() const { return sum_; }
  double mean() const;
  std::uint64_t count(std::int64_t k) const;
  /// Largest observed value, -1 when empty.
  std::int64_t max_value() const { return static_cast<std::int64_t>(counts_.size()) - 1; }
  /// P(X > k) for k = 0..max_value(); empty histogram gives an empty vector.
  std::vector<double> ccdf() const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  void grow(std::int64_t k);

  std::uint64_t total_ = 0;
  std::uint64_t sum_ = 0;
};

/// Power sums of renewal intervals, enough for moments and a delta-method error.
struct RenewalMoments {
  std::uint64_t count = 0;
  long double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
  long double k1 = 0;

  void add(std::int64_t interval, std::int64_t packets);
  void merge(const RenewalMoments& o);
  friend bool operator==(const RenewalMoments&, const RenewalMoments&) = default;
};

struct ReceiverMetrics {
  Histogram delay;  // D_{i,m}
  Histogram queue;  // floor(Q_i[t])
  std::uint64_t decoded = 0;
  std::uint64_t step1_ops = 0;
  std::uint64_t step2_ops = 0;
  std::uint64_t decoding_moments = 0;
  RenewalMoments renewal;
  std::vector<std::int64_t> delay_log;  // optional raw delays in decode order

  // Unfiltered by warm-up, for consistency checks over the whole run.
  std::int64_t interval_sum = 0;
  std::int64_t packet_sum = 0;
  std::int64_t last_moment = 0;

  std::uint64_t ops() const { return step1_ops + step2_ops; }
  friend bool operator==(const ReceiverMetrics&, const ReceiverMetrics&) = default;
};

/// Per-slot checks of the protocol invariants; each field counts failing slots.
struct InvariantCounts {
  std::uint64_t slots_checked = 0;
  std::uint64_t min_seen = 0;         // Z[t] = min_i S_i[t] (b_af = 1)
  std::uint64_t safety = 0;           // Z[t] <= min_i S_i[t]
  std::uint64_t mirror = 0;           // Z_i[t] = Z[t]
  std::uint64_t window_bounds = 0;    // max Q - 1 <= W <= max Q + 1 (b_af = 1)
  std::uint64_t queue_recurrence = 0; // Q_i from the recurrence = A - S_i
  std::uint64_t frame_multiple = 0;   // Z[t] multiple of b_af
  std::uint64_t step1_ceiling = 0;    // step 1 ops <= K * W at the previous moment
  std::uint64_t step2_ceiling = 0;

  std::uint64_t violations() const {
    return min_seen + safety + mirror + window_bounds + queue_recurrence + frame_multiple +
           step1_ceiling + step2_ceiling;
  }
  void merge(const InvariantCounts& o);
  friend bool operator==(const InvariantCounts&, const InvariantCounts&) = default;
};

struct Metrics {
  std::vector<ReceiverMetrics> receivers;
  Histogram window;  // W[t]
  std::uint64_t slots = 0;        // measured slots after warm-up
  std::uint64_t encoder_ops = 0;  // sum of W[t] over measured slots
  std::uint64_t beacon_rounds = 0;
  std::uint64_t beacon_holds = 0;
  std::uint64_t removed = 0;
  std::vector<RenewalRecord> renewals;  // for the tracked receivers only
  InvariantCounts invariants;
  bool payload_checked = false;
  std::uint64_t payload_verified = 0;
  std::uint64_t payload_mismatched = 0;
  bool saturated = false;
  std::uint64_t backlog = 0;  // RLNC only: packets waiting for a batch at the end

  explicit Metrics(std::size_t n = 0) : receivers(n) {}
  std::size_t n() const { return receivers.size(); }
  std::uint64_t decoded() const;
  /// Associative merge of an independent replica with the same receiver count.
  void merge(const Metrics& other);
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// P(D_i > k) for k = 0..max delay.
std::vector<double> estimate_delay_ccdf(const Metrics& m, std::size_t receiver);

struct Scalars {
  std::vector<double> mean_delay;  // per receiver
  double mean_delay_worst = 0;
  double mean_window = 0;
  std::vector<double> window_ccdf;
  std::vector<double> omega;  // decode ops per decoded packet, per receiver
  double omega_first = 0;
  double omega_worst = 0;
};

Scalars estimate_scalars(const Metrics& m);

struct WaldCheck {
  bool conclusive = false;
  std::uint64_t records = 0;
  double mean_t = 0;
  double mean_t2 = 0;
  double ratio = 0;           // E[T^2] / E[T]
  double ratio_stderr = 0;    // delta method
  double bound = 0;           // gamma(1-gamma)/(gamma-lambda)^2 + 2/(gamma-lambda)
  bool within(double slack_se) const { return conclusive && ratio <= bound + slack_se * ratio_stderr; }
};

/// Sample moments of T_j for one receiver against the bound for (lambda, gamma).
WaldCheck empirical_wald_check(const Metrics& m, std::size_t receiver, double lambda,
                               double gamma, std::uint64_t min_records = 10000);

/// Histogram as TSV with header "k\tcount\tccdf".
void write_histogram_tsv(std::ostream& os, const Histogram& h);

}  // namespace mwnc
