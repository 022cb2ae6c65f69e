#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mwnc/coding.hpp"

namespace mwnc::theory {

/// Delay-tail decay rate Phi_i = sup_theta {-log E[e^{-theta a}] - log(gamma e^theta + 1 - gamma)}.
/// Constant injection has the closed form KL(Bernoulli(lambda) || Bernoulli(gamma)).
double phi_rate(InjectionKind kind, double lambda, double gamma);

/// The objective inside phi_rate's supremum, exposed for grid checks.
double phi_objective(InjectionKind kind, double lambda, double gamma, double theta);

/// g(theta) = theta (1 - 1/lambda) + log gamma - log(1 - (1 - gamma) e^theta).
double theta_function(double lambda, double gamma, double theta);

struct EtaResult {
  double theta_star = 0;
  double eta = 0;
};

/// Encoder-queue decay rate: theta* is the non-trivial root of g on
/// (eps, -log(1 - gamma) - eps), found by bisection; eta = theta* / lambda.
EtaResult eta_rate(double lambda, double gamma);

/// Average-delay bound for constant injection:
/// gamma(1-gamma) / (2 (gamma-lambda)^2) + 1/(gamma-lambda) + 5/(2 lambda).
double delay_bound(double lambda, double gamma);

/// (1 - gamma) / (2 gamma): limit of delay_bound * (1 - rho)^2 as rho -> 1.
double asymptotic_const_ratio(double gamma);
/// (1 - gamma) / gamma: the same limit under Bernoulli injection.
double asymptotic_bern_ratio(double gamma);

struct FitResult {
  double slope = 0;      // decay rate: slope of -log ccdf(k) against k
  double intercept = 0;
  double r_squared = 0;
  double rms_residual = 0;
  std::size_t points = 0;
  std::int64_t k_min = 0;
  std::int64_t k_max = 0;
};

/// Least-squares slope of -log ccdf[k] over k_min..k_max. Needs at least five
/// points, all strictly positive.
FitResult fit_decay_rate(const std::vector<double>& ccdf, std::int64_t k_min, std::int64_t k_max);

/// The k range where lo <= ccdf[k] <= hi, from the first k at or below hi to
/// the last k at or above lo. Returns false when the range is empty.
bool tail_window(const std::vector<double>& ccdf, double lo, double hi, std::int64_t& k_min,
                 std::int64_t& k_max);

/// Fits over the tail window [lo, hi], default 1e-5..1e-2.
FitResult fit_tail(const std::vector<double>& ccdf, double lo = 1e-5, double hi = 1e-2);

struct TheoryReport {
  double lambda = 0;
  double gamma = 0;  // bottleneck
  double rho = 0;
  InjectionKind kind = InjectionKind::constant;
  std::vector<double> phi;  // per receiver
  double theta_star = 0;
  double eta = 0;
  double delay_bound = 0;  // for the bottleneck receiver, constant injection
  double asymptotic_const_ratio = 0;
  double asymptotic_bern_ratio = 0;
  double predicted_window = 0;  // (1/eta) log n
  double wald_bound = 0;

  /// key=value lines.
  std::string serialize() const;
};

TheoryReport make_report(InjectionKind kind, double lambda, const std::vector<double>& gammas);

}  // namespace mwnc::theory
