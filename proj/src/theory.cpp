#include "mwnc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mwnc::theory {

namespace {

void require_stable(double lambda, double gamma) {
  if (!(lambda > 0.0 && gamma > 0.0 && gamma <= 1.0)) {
    throw std::domain_error("need 0 < lambda and 0 < gamma <= 1");
  }
  if (!(lambda < gamma)) throw std::domain_error("need lambda < gamma");
}

double xlogy_ratio(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

}  // namespace

double phi_objective(InjectionKind kind, double lambda, double gamma, double theta) {
  const double mgf = kind == InjectionKind::constant
                         ? -theta * lambda
                         : std::log(1.0 - lambda + lambda * std::exp(-theta));
  return -mgf - std::log(gamma * std::exp(theta) + 1.0 - gamma);
}

double phi_rate(InjectionKind kind, double lambda, double gamma) {
  require_stable(lambda, gamma);
  if (kind == InjectionKind::constant) {
    if (gamma == 1.0) return -std::log(lambda);
    return xlogy_ratio(lambda, gamma) + xlogy_ratio(1.0 - lambda, 1.0 - gamma);
  }
  // Concave in theta with the maximizer at theta < 0 (the objective is 0 at 0
  // and its derivative there is lambda - gamma < 0).
  double lo = -60.0, hi = 0.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = phi_objective(kind, lambda, gamma, x1), f2 = phi_objective(kind, lambda, gamma, x2);
  for (int it = 0; it < 300 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = phi_objective(kind, lambda, gamma, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = phi_objective(kind, lambda, gamma, x1);
    }
  }
  return std::max(0.0, phi_objective(kind, lambda, gamma, 0.5 * (lo + hi)));
}

double theta_function(double lambda, double gamma, double theta) {
  return theta * (1.0 - 1.0 / lambda) + std::log(gamma) -
         std::log(1.0 - (1.0 - gamma) * std::exp(theta));
}

EtaResult eta_rate(double lambda, double gamma) {
  require_stable(lambda, gamma);
  if (!(gamma < 1.0)) throw std::domain_error("eta_rate needs gamma < 1");
  constexpr double eps = 1e-9;
  double lo = eps;
  double hi = -std::log(1.0 - gamma) - eps;
  const double glo = theta_function(lambda, gamma, lo);
  const double ghi = theta_function(lambda, gamma, hi);
  if (!(glo < 0.0 && ghi > 0.0)) {
    throw std::domain_error("no sign change of g on the bracket; check lambda < gamma < 1");
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    const double gm = theta_function(lambda, gamma, mid);
    if (gm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  EtaResult r;
  r.theta_star = 0.5 * (lo + hi);
  r.eta = r.theta_star / lambda;
  return r;
}

double delay_bound(double lambda, double gamma) {
  require_stable(lambda, gamma);
  const double mu = gamma - lambda;
  return gamma * (1.0 - gamma) / (2.0 * mu * mu) + 1.0 / mu + 5.0 / (2.0 * lambda);
}

double asymptotic_const_ratio(double gamma) { return (1.0 - gamma) / (2.0 * gamma); }
double asymptotic_bern_ratio(double gamma) { return (1.0 - gamma) / gamma; }

FitResult fit_decay_rate(const std::vector<double>& ccdf, std::int64_t k_min, std::int64_t k_max) {
  if (k_min < 0 || k_max >= static_cast<std::int64_t>(ccdf.size()) || k_max < k_min) {
    throw std::invalid_argument("fit window outside the ccdf");
  }
  if (k_max - k_min + 1 < 5) throw std::invalid_argument("fit needs at least 5 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  std::vector<double> ys;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const double p = ccdf[static_cast<std::size_t>(k)];
    if (!(p > 0.0)) throw std::invalid_argument("ccdf is zero at k = " + std::to_string(k));
    const double x = static_cast<double>(k), y = -std::log(p);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ys.push_back(y);
    ++n;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  FitResult f;
  f.slope = (dn * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / dn;
  f.points = n;
  f.k_min = k_min;
  f.k_max = k_max;
  const double ybar = sy / dn;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(k_min) + static_cast<double>(j);
    const double e = ys[j] - (f.intercept + f.slope * x);
    ss_res += e * e;
    ss_tot += (ys[j] - ybar) * (ys[j] - ybar);
  }
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.rms_residual = std::sqrt(ss_res / dn);
  return f;
}

bool tail_window(const std::vector<double>& ccdf, double lo, double hi, std::int64_t& k_min,
                 std::int64_t& k_max) {
  k_min = -1;
  k_max = -1;
  for (std::size_t k = 0; k < ccdf.size(); ++k) {
    if (k_min < 0 && ccdf[k] <= hi && ccdf[k] > 0.0) k_min = static_cast<std::int64_t>(k);
    if (ccdf[k] >= lo) k_max = static_cast<std::int64_t>(k);
  }
  return k_min >= 0 && k_max >= k_min;
}

FitResult fit_tail(const std::vector<double>& ccdf, double lo, double hi) {
  std::int64_t k_min = 0, k_max = 0;
  if (!tail_window(ccdf, lo, hi, k_min, k_max)) {
    throw std::invalid_argument("ccdf never enters the tail window");
  }
  return fit_decay_rate(ccdf, k_min, k_max);
}

std::string TheoryReport::serialize() const {
  std::ostringstream os;
  os.precision(12);
  os << "injection=" << to_string(kind) << '\n';
  os << "lambda=" << lambda << '\n';
  os << "gamma=" << gamma << '\n';
  os << "rho=" << rho << '\n';
  for (std::size_t i = 0; i < phi.size(); ++i) os << "phi_" << (i + 1) << '=' << phi[i] << '\n';
  os << "theta_star=" << theta_star << '\n';
  os << "eta=" << eta << '\n';
  os << "delay_bound=" << delay_bound << '\n';
  os << "asymptotic_const_ratio=" << asymptotic_const_ratio << '\n';
  os << "asymptotic_bern_ratio=" << asymptotic_bern_ratio << '\n';
  os << "predicted_window=" << predicted_window << '\n';
  os << "wald_bound=" << wald_bound << '\n';
  return os.str();
}

TheoryReport make_report(InjectionKind kind, double lambda, const std::vector<double>& gammas) {
  if (gammas.empty()) throw std::invalid_argument("no receivers");
  TheoryReport r;
  r.kind = kind;
  r.lambda = lambda;
  r.gamma = *std::min_element(gammas.begin(), gammas.end());
  r.rho = lambda / r.gamma;
  for (double g : gammas) r.phi.push_back(phi_rate(kind, lambda, g));
  if (r.gamma < 1.0) {
    const EtaResult e = eta_rate(lambda, r.gamma);
    r.theta_star = e.theta_star;
    r.eta = e.eta;
    r.predicted_window = std::log(static_cast<double>(gammas.size())) / e.eta;
  }
  r.delay_bound = delay_bound(lambda, r.gamma);
  r.asymptotic_const_ratio = asymptotic_const_ratio(r.gamma);
  r.asymptotic_bern_ratio = asymptotic_bern_ratio(r.gamma);
  const double mu = r.gamma - lambda;
  r.wald_bound = r.gamma * (1.0 - r.gamma) / (mu * mu) + 2.0 / mu;
  return r;
}

}  // namespace mwnc::theory
