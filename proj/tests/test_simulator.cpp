#include <gtest/gtest.h>

#include <cmath>

#include "mwnc/simulator.hpp"

using namespace mwnc;

namespace {

SimConfig make(std::vector<double> gammas, Rational lambda, std::int64_t slots) {
  SimConfig cfg;
  cfg.gammas = std::move(gammas);
  cfg.injection = {InjectionKind::constant, lambda, 0};
  cfg.slots = slots;
  cfg.warmup = 0;
  return cfg;
}

// Slot in which packet m is assembled under constant injection num/den.
std::int64_t assembly_slot(std::int64_t m, const Rational& r) {
  return (m * r.den + r.num - 1) / r.num;
}

}  // namespace

TEST(Simulator, PerfectChannelHalfRate) {
  SimConfig cfg = make({1.0}, Rational(1, 2), 100);
  cfg.check_invariants = true;
  const Metrics m = run(cfg);
  EXPECT_EQ(m.receivers[0].decoded, 50u);
  EXPECT_EQ(m.receivers[0].delay.count(0), 50u);
  EXPECT_EQ(m.receivers[0].delay.max_value(), 0);
  EXPECT_EQ(m.window.count(0) + m.window.count(1), 100u);
  EXPECT_EQ(m.window.max_value(), 1);
  EXPECT_EQ(m.invariants.violations(), 0u);
}

TEST(Simulator, ValidationRejectsUnstableRates) {
  EXPECT_THROW(Simulator(make({0.5}, Rational(1, 2), 10)), std::invalid_argument);
  EXPECT_THROW(Simulator(make({0.6, 0.4}, Rational(1, 2), 10)), std::invalid_argument);
  SimConfig bad = make({0.9}, Rational(1, 2), 10);
  bad.renewal_receivers = {3};
  EXPECT_THROW(Simulator(std::move(bad)), std::invalid_argument);
  EXPECT_EQ(parse_mode("full_coding"), Mode::full);
  EXPECT_THROW(parse_mode("fast"), std::invalid_argument);
}

TEST(Simulator, FullAndDynamicsModesAgree) {
  SimConfig cfg = make({0.7, 0.8, 0.75}, Rational(1, 2), 20000);
  cfg.q = 32;
  cfg.warmup = 1000;
  cfg.check_invariants = true;
  const Metrics dyn = run(cfg);
  cfg.mode = Mode::full;
  Metrics full = run(cfg);
  EXPECT_GT(full.payload_verified, 0u);
  EXPECT_EQ(full.payload_mismatched, 0u);
  full.payload_checked = false;
  full.payload_verified = 0;
  EXPECT_TRUE(full == dyn);
  EXPECT_EQ(full.receivers[1].step2_ops, dyn.receivers[1].step2_ops);
}

TEST(Simulator, DelayHistogramMatchesRawLog) {
  SimConfig cfg = make({0.6, 0.7}, Rational(27, 50), 50000);
  cfg.warmup = 5000;
  cfg.keep_delay_log = true;
  const Metrics m = run(cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& rm = m.receivers[i];
    Histogram h;
    for (std::int64_t d : rm.delay_log) h.add(d);
    EXPECT_TRUE(h == rm.delay);
    EXPECT_EQ(rm.delay_log.size(), rm.decoded);
    const auto tail = estimate_delay_ccdf(m, i);
    std::uint64_t above = 0;
    for (std::int64_t d : rm.delay_log) above += d > 3 ? 1 : 0;
    EXPECT_DOUBLE_EQ(tail[3], static_cast<double>(above) / static_cast<double>(rm.decoded));
  }
}

TEST(Simulator, RenewalRecordsReconstructDelays) {
  const Rational lambda(27, 50);
  SimConfig cfg = make({0.6, 0.65}, lambda, 40000);
  const Metrics m = run(cfg);
  Histogram rebuilt;
  std::int64_t slots = 0, packets = 0, last = 0;
  for (const RenewalRecord& r : m.renewals) {
    ASSERT_EQ(r.receiver, 0u);
    slots += r.interval;
    packets += r.packets;
    last = r.end_slot;
    for (std::int64_t id = r.first_id(); id < r.first_id() + r.packets; ++id) {
      rebuilt.add(r.end_slot - assembly_slot(id, lambda));
    }
  }
  EXPECT_TRUE(rebuilt == m.receivers[0].delay);
  EXPECT_EQ(slots, last);
  EXPECT_EQ(packets, last * lambda.num / lambda.den);
  EXPECT_EQ(m.receivers[0].interval_sum, m.receivers[0].last_moment);
  const auto& r1 = m.receivers[1];
  EXPECT_EQ(r1.packet_sum, r1.last_moment * lambda.num / lambda.den);
}

TEST(Simulator, WaldRatioIsOneOnAPerfectLink) {
  const Metrics m = run(make({1.0}, Rational(1, 2), 1000));
  const WaldCheck w = empirical_wald_check(m, 0, 0.5, 1.0, 100);
  ASSERT_TRUE(w.conclusive);
  EXPECT_DOUBLE_EQ(w.ratio, 1.0);
  EXPECT_DOUBLE_EQ(w.bound, 4.0);
  EXPECT_TRUE(w.within(0));
  const Metrics one = run(make({1.0}, Rational(1, 2), 1));
  EXPECT_FALSE(empirical_wald_check(one, 0, 0.5, 1.0).conclusive);
}

TEST(Simulator, Deterministic) {
  SimConfig cfg = make(std::vector<double>(5, 0.7), Rational(3, 5), 30000);
  cfg.injection.kind = InjectionKind::bernoulli;
  cfg.injection.seed = 9;
  const Metrics a = run(cfg);
  const Metrics b = run(cfg);
  EXPECT_TRUE(a == b);
  cfg.channel_seed = 77;
  EXPECT_FALSE(run(cfg) == a);
}

TEST(Simulator, ReceiverQueuesAreUncorrelated) {
  SimConfig cfg = make({0.6, 0.6}, Rational(27, 50), 1000000);
  std::vector<double> q1, q2;
  Simulator sim(cfg);
  sim.set_observer([&](const SlotView& v) {
    if (v.t % 1000 != 0) return;
    q1.push_back(static_cast<double>(v.receivers[0].queue_ticks(v.arrivals) / v.arrivals.unit));
    q2.push_back(static_cast<double>(v.receivers[1].queue_ticks(v.arrivals) / v.arrivals.unit));
  });
  sim.run();
  const double n = static_cast<double>(q1.size());
  double m1 = 0, m2 = 0;
  for (std::size_t k = 0; k < q1.size(); ++k) {
    m1 += q1[k] / n;
    m2 += q2[k] / n;
  }
  double c = 0, v1 = 0, v2 = 0;
  for (std::size_t k = 0; k < q1.size(); ++k) {
    c += (q1[k] - m1) * (q2[k] - m2);
    v1 += (q1[k] - m1) * (q1[k] - m1);
    v2 += (q2[k] - m2) * (q2[k] - m2);
  }
  const double corr = c / std::sqrt(v1 * v2);
  EXPECT_LE(std::fabs(corr), 4.0 / std::sqrt(n)) << corr;
}

TEST(Metrics, MergeIsAssociative) {
  SimConfig cfg = make({0.7, 0.8}, Rational(1, 2), 5000);
  cfg.warmup = 100;
  std::vector<Metrics> parts;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    cfg.channel_seed = s;
    parts.push_back(run(cfg));
  }
  Metrics left = parts[0];
  left.merge(parts[1]);
  left.merge(parts[2]);
  Metrics right_tail = parts[1];
  right_tail.merge(parts[2]);
  Metrics right = parts[0];
  right.merge(right_tail);
  EXPECT_TRUE(left == right);
  EXPECT_EQ(left.slots, 3u * 4900u);
  EXPECT_THROW(left.merge(Metrics(5)), std::invalid_argument);
}

TEST(Metrics, WarmupExcludesEarlySlots) {
  SimConfig cfg = make({0.8}, Rational(1, 2), 3000);
  cfg.warmup = 1000;
  const Metrics m = run(cfg);
  EXPECT_EQ(m.slots, 2000u);
  EXPECT_EQ(m.window.total(), 2000u);
  EXPECT_EQ(m.receivers[0].queue.total(), 2000u);
  EXPECT_LE(m.receivers[0].decoded, 1000u + 10u);
}
