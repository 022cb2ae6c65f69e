#include <gtest/gtest.h>

#include <cmath>

#include "mwnc/theory.hpp"

using namespace mwnc;
using namespace mwnc::theory;

namespace {

// Brute-force supremum of the rate objective over a dense theta grid on [-30, 0].
double grid_sup(InjectionKind kind, double lambda, double gamma) {
  double best = 0;
  for (int k = 0; k <= 300000; ++k) {
    best = std::max(best, phi_objective(kind, lambda, gamma, -30.0 * k / 300000.0));
  }
  return best;
}

// Bracket of the sign change of g found by scanning, independent of bisection.
double grid_root(double lambda, double gamma) {
  const double top = -std::log(1.0 - gamma);
  const int steps = 2000000;
  double prev = theta_function(lambda, gamma, top * 1e-6);
  for (int k = 1; k < steps; ++k) {
    const double th = top * k / steps;
    const double cur = theta_function(lambda, gamma, th);
    if ((prev < 0) != (cur < 0) && k > 1) return th;
    prev = cur;
  }
  return -1;
}

}  // namespace

TEST(Theory, ConstantRateIsTheBernoulliDivergence) {
  EXPECT_NEAR(phi_rate(InjectionKind::constant, 0.5, 0.6), 0.020410997260, 1e-11);
  EXPECT_NEAR(phi_rate(InjectionKind::constant, 0.54, 0.6), 0.007395815037, 1e-11);
  for (double lambda : {0.2, 0.5, 0.54, 0.7}) {
    for (double gamma : {0.75, 0.8, 0.95}) {
      if (lambda >= gamma) continue;
      EXPECT_NEAR(phi_rate(InjectionKind::constant, lambda, gamma),
                  grid_sup(InjectionKind::constant, lambda, gamma), 1e-9)
          << lambda << " " << gamma;
    }
  }
}

TEST(Theory, BernoulliRateMatchesGridAndIsSmaller) {
  for (double lambda : {0.3, 0.5, 0.54}) {
    for (double gamma : {0.6, 0.8}) {
      const double b = phi_rate(InjectionKind::bernoulli, lambda, gamma);
      EXPECT_NEAR(b, grid_sup(InjectionKind::bernoulli, lambda, gamma), 1e-9);
      EXPECT_LT(b, phi_rate(InjectionKind::constant, lambda, gamma));
      EXPECT_GT(b, 0.0);
    }
  }
}

TEST(Theory, RatesRejectUnstableInputs) {
  EXPECT_THROW(phi_rate(InjectionKind::constant, 0.6, 0.6), std::domain_error);
  EXPECT_THROW(eta_rate(0.7, 0.6), std::domain_error);
  EXPECT_THROW(delay_bound(0.0, 0.6), std::domain_error);
}

TEST(Theory, EtaRootFrozenValues) {
  const EtaResult r = eta_rate(0.54, 0.6);
  EXPECT_NEAR(r.theta_star, 0.263873494160, 1e-10);
  EXPECT_NEAR(r.eta, 0.488654618816, 1e-10);
  EXPECT_NEAR(std::fabs(theta_function(0.54, 0.6, r.theta_star)), 0.0, 1e-12);
  // lambda = 1/2, gamma = 0.6: the root is log(3/2) exactly.
  EXPECT_NEAR(eta_rate(0.5, 0.6).theta_star, std::log(1.5), 1e-11);
  EXPECT_NEAR(eta_rate(0.5, 0.6).eta, 0.810930216216, 1e-10);
  EXPECT_NEAR(eta_rate(0.57, 0.6).eta, 0.246519092181, 1e-10);
}

TEST(Theory, EtaAgreesWithGridScan) {
  for (double lambda : {0.3, 0.5, 0.54}) {
    for (double gamma : {0.6, 0.9}) {
      const double scan = grid_root(lambda, gamma);
      const double top = -std::log(1.0 - gamma);
      EXPECT_NEAR(eta_rate(lambda, gamma).theta_star, scan, 2 * top / 2000000) << lambda << " " << gamma;
    }
  }
}

TEST(Theory, DelayBoundValuesAndMonotonicity) {
  EXPECT_NEAR(delay_bound(0.54, 0.6), 54.62962962963, 1e-9);
  EXPECT_NEAR(delay_bound(0.5, 0.6), 27.0, 1e-12);
  double prev = 0;
  for (double lambda = 0.30; lambda < 0.599; lambda += 0.01) {
    const double b = delay_bound(lambda, 0.6);
    if (lambda > 0.45) EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(Theory, HeavyTrafficRatioApproachesLimit) {
  const double gamma = 0.6;
  EXPECT_DOUBLE_EQ(asymptotic_const_ratio(gamma), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(asymptotic_bern_ratio(gamma), 2.0 * asymptotic_const_ratio(gamma));
  double gap = 1e9;
  for (double rho : {0.9, 0.99, 0.999}) {
    const double scaled = delay_bound(rho * gamma, gamma) * (1 - rho) * (1 - rho);
    const double err = std::fabs(scaled - 1.0 / 3.0);
    EXPECT_LT(err, gap) << rho;
    gap = err;
  }
  EXPECT_LT(gap, 3e-3);
}

TEST(Fit, RecoversASyntheticExponential) {
  std::vector<double> ccdf;
  for (int k = 0; k < 60; ++k) ccdf.push_back(std::exp(-0.3 * k - 0.1));
  const FitResult f = fit_decay_rate(ccdf, 10, 40);
  EXPECT_NEAR(f.slope, 0.3, 1e-9);
  EXPECT_NEAR(f.intercept, 0.1, 1e-9);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.points, 31u);
  const FitResult t = fit_tail(ccdf);
  EXPECT_NEAR(t.slope, 0.3, 1e-9);
  std::int64_t a = 0, b = 0;
  ASSERT_TRUE(tail_window(ccdf, 1e-5, 1e-2, a, b));
  EXPECT_EQ(a, 16);  // first k with exp(-0.3k-0.1) <= 1e-2
  EXPECT_EQ(b, 38);  // last k with exp(-0.3k-0.1) >= 1e-5
}

TEST(Fit, RejectsZerosAndShortRanges) {
  std::vector<double> ccdf{1, 0.5, 0.25, 0.0, 0.05, 0.01, 0.001};
  EXPECT_THROW(fit_decay_rate(ccdf, 0, 6), std::invalid_argument);
  EXPECT_THROW(fit_decay_rate(ccdf, 0, 2), std::invalid_argument);
  std::int64_t a = 0, b = 0;
  EXPECT_FALSE(tail_window({1.0, 0.5}, 1e-5, 1e-2, a, b));
}

TEST(Report, SerializesKeyValueLines) {
  const TheoryReport r = make_report(InjectionKind::constant, 0.54, {0.6, 0.8});
  EXPECT_EQ(r.gamma, 0.6);
  ASSERT_EQ(r.phi.size(), 2u);
  EXPECT_GT(r.phi[1], r.phi[0]);
  EXPECT_NEAR(r.predicted_window, std::log(2.0) / r.eta, 1e-12);
  const std::string s = r.serialize();
  EXPECT_NE(s.find("phi_1=0.00739581503"), std::string::npos) << s;
  EXPECT_NE(s.find("eta=0.48865461"), std::string::npos) << s;
}
