#include "mwnc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mwnc {

void Histogram::grow(std::int64_t k) {
  if (k < 0) throw std::invalid_argument("histogram value must be >= 0, got " + std::to_string(k));
  counts_.resize(static_cast<std::size_t>(k) + 1, 0);
}

void Histogram::merge(const Histogram& other) {
  if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
  for (std::size_t k = 0; k < other.counts_.size(); ++k) counts_[k] += other.counts_[k];
  total_ += other.total_;
  sum_ += other.sum_;
}

double Histogram::mean() const {
  if (total_ == 0) throw std::domain_error("mean of an empty histogram");
  return static_cast<double>(static_cast<long double>(sum_) / static_cast<long double>(total_));
}

std::uint64_t Histogram::count(std::int64_t k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= counts_.size()) return 0;
  return counts_[static_cast<std::size_t>(k)];
}

std::vector<double> Histogram::ccdf() const {
  std::vector<double> out(counts_.size(), 0.0);
  if (total_ == 0) return {};
  std::uint64_t above = total_;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    above -= counts_[k];
    out[k] = static_cast<double>(above) / static_cast<double>(total_);
  }
  return out;
}

void RenewalMoments::add(std::int64_t interval, std::int64_t packets) {
  const auto t = static_cast<long double>(interval);
  ++count;
  t1 += t;
  t2 += t * t;
  t3 += t * t * t;
  t4 += t * t * t * t;
  k1 += static_cast<long double>(packets);
}

void RenewalMoments::merge(const RenewalMoments& o) {
  count += o.count;
  t1 += o.t1;
  t2 += o.t2;
  t3 += o.t3;
  t4 += o.t4;
  k1 += o.k1;
}

void InvariantCounts::merge(const InvariantCounts& o) {
  slots_checked += o.slots_checked;
  min_seen += o.min_seen;
  safety += o.safety;
  mirror += o.mirror;
  window_bounds += o.window_bounds;
  queue_recurrence += o.queue_recurrence;
  frame_multiple += o.frame_multiple;
  step1_ceiling += o.step1_ceiling;
  step2_ceiling += o.step2_ceiling;
}

std::uint64_t Metrics::decoded() const {
  std::uint64_t total = 0;
  for (const auto& r : receivers) total += r.decoded;
  return total;
}

void Metrics::merge(const Metrics& o) {
  if (o.receivers.size() != receivers.size()) {
    throw std::invalid_argument("cannot merge metrics of " + std::to_string(o.receivers.size()) +
                                " receivers into " + std::to_string(receivers.size()));
  }
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    auto& a = receivers[i];
    const auto& b = o.receivers[i];
    a.delay.merge(b.delay);
    a.queue.merge(b.queue);
    a.decoded += b.decoded;
    a.step1_ops += b.step1_ops;
    a.step2_ops += b.step2_ops;
    a.decoding_moments += b.decoding_moments;
    a.renewal.merge(b.renewal);
    a.delay_log.insert(a.delay_log.end(), b.delay_log.begin(), b.delay_log.end());
    a.interval_sum += b.interval_sum;
    a.packet_sum += b.packet_sum;
    a.last_moment += b.last_moment;
  }
  window.merge(o.window);
  slots += o.slots;
  encoder_ops += o.encoder_ops;
  beacon_rounds += o.beacon_rounds;
  beacon_holds += o.beacon_holds;
  removed += o.removed;
  renewals.insert(renewals.end(), o.renewals.begin(), o.renewals.end());
  invariants.merge(o.invariants);
  payload_checked = payload_checked || o.payload_checked;
  payload_verified += o.payload_verified;
  payload_mismatched += o.payload_mismatched;
  saturated = saturated || o.saturated;
  backlog += o.backlog;
}

std::vector<double> estimate_delay_ccdf(const Metrics& m, std::size_t receiver) {
  if (receiver >= m.n()) throw std::out_of_range("receiver index out of range");
  const Histogram& h = m.receivers[receiver].delay;
  if (h.total() == 0) throw std::domain_error("no decoded packets for the delay ccdf");
  return h.ccdf();
}

Scalars estimate_scalars(const Metrics& m) {
  if (m.slots == 0) throw std::domain_error("no measured slots");
  Scalars s;
  s.mean_window = static_cast<double>(m.encoder_ops) / static_cast<double>(m.slots);
  s.window_ccdf = m.window.ccdf();
  for (const auto& r : m.receivers) {
    if (r.decoded == 0) throw std::domain_error("a receiver decoded no packets");
    s.mean_delay.push_back(r.delay.mean());
    s.omega.push_back(static_cast<double>(r.ops()) / static_cast<double>(r.decoded));
  }
  if (!s.mean_delay.empty()) {
    s.mean_delay_worst = *std::max_element(s.mean_delay.begin(), s.mean_delay.end());
    s.omega_first = s.omega.front();
    s.omega_worst = *std::max_element(s.omega.begin(), s.omega.end());
  }
  return s;
}

WaldCheck empirical_wald_check(const Metrics& m, std::size_t receiver, double lambda,
                               double gamma, std::uint64_t min_records) {
  if (receiver >= m.n()) throw std::out_of_range("receiver index out of range");
  if (!(lambda < gamma)) throw std::domain_error("Wald bound needs lambda < gamma");
  WaldCheck w;
  const RenewalMoments& r = m.receivers[receiver].renewal;
  const double mu = gamma - lambda;
  w.bound = gamma * (1.0 - gamma) / (mu * mu) + 2.0 / mu;
  w.records = r.count;
  if (r.count < 2) return w;
  const long double n = static_cast<long double>(r.count);
  const long double m1 = r.t1 / n, m2 = r.t2 / n, m3 = r.t3 / n, m4 = r.t4 / n;
  w.mean_t = static_cast<double>(m1);
  w.mean_t2 = static_cast<double>(m2);
  w.ratio = static_cast<double>(m2 / m1);
  const long double v11 = m2 - m1 * m1;
  const long double v22 = m4 - m2 * m2;
  const long double v12 = m3 - m1 * m2;
  const long double g1 = -m2 / (m1 * m1);
  const long double g2 = 1.0L / m1;
  const long double var = (g1 * g1 * v11 + 2 * g1 * g2 * v12 + g2 * g2 * v22) / n;
  w.ratio_stderr = static_cast<double>(std::sqrt(std::max(var, 0.0L)));
  w.conclusive = r.count >= min_records;
  return w;
}

void write_histogram_tsv(std::ostream& os, const Histogram& h) {
  os << "k\tcount\tccdf\n";
  const auto tail = h.ccdf();
  for (std::size_t k = 0; k < h.counts().size(); ++k) {
    if (h.counts()[k] == 0) continue;
    os << k << '\t' << h.counts()[k] << '\t' << tail[k] << '\n';
  }
}

}  // namespace mwnc
