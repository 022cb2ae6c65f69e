#include <gtest/gtest.h>

#include <cmath>

#include "mwnc/rlnc.hpp"
#include "support/oracles.hpp"

using namespace mwnc;

namespace {

RlncConfig make(std::vector<double> gammas, Rational lambda, std::int64_t b, std::int64_t slots) {
  RlncConfig cfg;
  cfg.gammas = std::move(gammas);
  cfg.injection = {InjectionKind::constant, lambda, 0};
  cfg.batch_size = b;
  cfg.slots = slots;
  cfg.warmup = 0;
  return cfg;
}

}  // namespace

TEST(Rlnc, SinglePacketBatchesOnAPerfectLinkHaveNoDelay) {
  const Metrics m = run_rlnc(make({1.0}, Rational(1, 2), 1, 1000));
  EXPECT_EQ(m.receivers[0].decoded, 500u);
  EXPECT_EQ(m.receivers[0].delay.count(0), 500u);
  EXPECT_FALSE(m.saturated);
}

TEST(Rlnc, FullRateBatchOfFour) {
  const Metrics m = run_rlnc(make({1.0}, Rational(1, 1), 4, 400));
  const auto& d = m.receivers[0].delay;
  EXPECT_EQ(d.total(), 400u);
  for (std::int64_t k = 0; k < 4; ++k) EXPECT_EQ(d.count(k), 100u) << k;
  EXPECT_EQ(m.receivers[0].step2_ops, 400u * 16u);
}

TEST(Rlnc, HalfRateBatchOfFour) {
  // Packets of a batch arrive every other slot and decode with the last one.
  const Metrics m = run_rlnc(make({1.0}, Rational(1, 2), 4, 800));
  const auto& d = m.receivers[0].delay;
  EXPECT_EQ(d.total(), 400u);
  for (std::int64_t k : {0, 2, 4, 6}) EXPECT_EQ(d.count(k), 100u) << k;
  EXPECT_DOUBLE_EQ(d.mean(), 3.0);
}

TEST(Rlnc, SlowestReceiverGatesTheNextBatch) {
  const Metrics m = run_rlnc(make({1.0, 0.7}, Rational(1, 2), 8, 200000));
  EXPECT_EQ(m.receivers[0].decoded, m.receivers[1].decoded);
  EXPECT_LT(m.receivers[0].delay.mean(), m.receivers[1].delay.mean());
}

TEST(Rlnc, CollectionTimeOfABufferedBatch) {
  // With lambda = 1 and gamma small the batch is complete long before the
  // receiver collects B combinations, so collection takes about B / gamma slots.
  const std::int64_t b = 8;
  const double gamma = 0.2;
  const Metrics m = run_rlnc(make({gamma}, Rational(1, 1), b, 400000));
  const double batches = static_cast<double>(m.receivers[0].decoding_moments);
  const double per_batch = 400000.0 / batches;
  const double mean = b / gamma;
  const double sd = std::sqrt(b * (1 - gamma)) / gamma;
  EXPECT_NEAR(per_batch, mean, 4 * sd / std::sqrt(batches) + 1.0);
  EXPECT_TRUE(m.saturated);
}

TEST(Rlnc, SaturationThreshold) {
  EXPECT_EQ(rlnc_saturation_threshold(16, 5000), 132);
  EXPECT_EQ(rlnc_saturation_threshold(16, 100000), 1032);
  const Metrics ok = run_rlnc(make({0.9}, Rational(1, 2), 16, 100000));
  EXPECT_FALSE(ok.saturated);
  EXPECT_LT(ok.backlog, 2u * 16u + 100u);
}

TEST(Rlnc, SweepSkipsSaturatedBatchSizes) {
  RlncConfig cfg = make(std::vector<double>(20, 0.6), Rational(27, 50), 1, 200000);
  cfg.warmup = 10000;
  const RlncSweep s = sweep_batch_sizes(cfg, {2, 128, 256});
  ASSERT_EQ(s.points.size(), 3u);
  EXPECT_TRUE(s.points[0].saturated);
  ASSERT_GE(s.best, 1);
  const auto& best = s.points[static_cast<std::size_t>(s.best)];
  for (const auto& p : s.points) {
    if (!p.saturated) EXPECT_LE(best.mean_delay, p.mean_delay);
  }
  EXPECT_THROW(sweep_batch_sizes(cfg, {}), std::invalid_argument);
}

TEST(Rlnc, Validation) {
  EXPECT_THROW(run_rlnc(make({0.6}, Rational(1, 2), 0, 10)), std::invalid_argument);
  EXPECT_THROW(run_rlnc(make({}, Rational(1, 2), 1, 10)), std::invalid_argument);
}
