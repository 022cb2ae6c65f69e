#include "mwnc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <thread>

namespace mwnc {

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// The fit window reaches ccdf = lo, so at least ten observations must lie beyond it.
bool resolves(const Histogram& h, double lo) {
  return static_cast<double>(h.total()) * lo >= 10.0;
}

bool within(double value, double target, double tol) {
  return std::fabs(value - target) <= tol * std::fabs(target);
}

}  // namespace

bool ExperimentResult::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  for (const auto& p : points) {
    for (const auto& c : p.checks) {
      if (!c.pass) return false;
    }
  }
  return true;
}

Metrics run_replicas(const SimConfig& cfg, int replicas, int threads) {
  if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  std::vector<Metrics> parts(static_cast<std::size_t>(replicas));
  std::vector<std::exception_ptr> errors(parts.size());
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(replicas));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < replicas; r = next++) {
      try {
        parts[static_cast<std::size_t>(r)] = run(replica_config(cfg, r));
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Metrics merged = std::move(parts.front());
  for (std::size_t r = 1; r < parts.size(); ++r) merged.merge(parts[r]);
  return merged;
}

std::vector<Check> point_checks(const PointResult& p, const ExperimentSpec& spec) {
  std::vector<Check> out;
  const double lambda = p.sim.injection.lambda.value();
  const bool constant = p.sim.injection.kind == InjectionKind::constant;
  const double gamma1 = p.sim.gammas.front();

  if (p.sim.check_invariants) {
    const auto& ic = p.metrics.invariants;
    out.push_back({"invariants", ic.violations() == 0,
                   std::to_string(ic.violations()) + " violations over " +
                       std::to_string(ic.slots_checked) + " slots"});
  }
  if (p.metrics.payload_checked) {
    out.push_back({"payload", p.metrics.payload_mismatched == 0 && p.metrics.payload_verified > 0,
                   std::to_string(p.metrics.payload_verified) + " verified, " +
                       std::to_string(p.metrics.payload_mismatched) + " mismatched"});
  }
  if (constant) {
    const double bound = theory::delay_bound(lambda, gamma1);
    const double d = p.scalars.mean_delay.front();
    out.push_back({"mean_delay_bound", d <= bound, fmt("D1=%.4f bound=%.4f", d, bound)});
    const WaldCheck w = empirical_wald_check(p.metrics, 0, lambda, gamma1);
    if (w.conclusive) {
      out.push_back({"wald_ratio", w.within(3.0),
                     fmt("E[T^2]/E[T]=%.4f se=%.4f bound=%.4f", w.ratio, w.ratio_stderr, w.bound)});
    }
  }
  if (p.delay_fit) {
    const double phi = p.theory.phi.front();
    out.push_back({"delay_decay_rate", within(p.delay_fit->slope, phi, spec.rate_tolerance),
                   fmt("slope=%.6f phi=%.6f rel=%+.4f", p.delay_fit->slope, phi,
                       p.delay_fit->slope / phi - 1.0)});
  }
  if (p.window_fit && p.theory.eta > 0 && p.sim.n() > 1 && p.sim.feedback.b_af == 1) {
    const double eta = p.theory.eta;
    const double slope = p.window_fit->slope;
    // Heterogeneous channels may only decay faster than the bottleneck rate.
    const bool hetero = p.params.heterogeneous;
    const bool ok = hetero ? slope >= (1.0 - spec.rate_tolerance) * eta
                           : within(slope, eta, spec.rate_tolerance);
    out.push_back({"window_decay_rate", ok, fmt("slope=%.6f eta=%.6f rel=%+.4f", slope, eta, slope / eta - 1.0)});
  }
  return out;
}

std::optional<double> window_log_slope(const std::vector<PointResult>& points) {
  if (points.size() < 3) return std::nullopt;
  const auto& ref = points.front().sim;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::map<std::size_t, int> distinct;
  for (const auto& p : points) {
    if (p.sim.injection.lambda != ref.injection.lambda || p.sim.gammas.front() != ref.gammas.front() ||
        p.sim.injection.kind != ref.injection.kind || p.sim.feedback.b_af != ref.feedback.b_af ||
        p.params.heterogeneous) {
      return std::nullopt;
    }
    const double x = std::log(static_cast<double>(p.sim.n()));
    const double y = p.scalars.mean_window;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++distinct[p.sim.n()];
  }
  if (distinct.size() < 3) return std::nullopt;
  const double k = static_cast<double>(points.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

ExperimentResult execute(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult res;
  res.name = spec.name;
  for (const auto& point : expand_sweep(spec)) {
    PointResult p;
    p.label = point.label;
    p.params = point.params;
    p.sim = build_sim(point.params);
    p.metrics = run_replicas(p.sim, spec.replicas, spec.threads);
    p.scalars = estimate_scalars(p.metrics);
    p.theory = theory::make_report(p.sim.injection.kind, p.sim.injection.lambda.value(), p.sim.gammas);
    const auto delay_ccdf = p.metrics.receivers.front().delay.ccdf();
    std::int64_t a = 0, b = 0;
    if (resolves(p.metrics.receivers.front().delay, spec.tail_lo) &&
        theory::tail_window(delay_ccdf, spec.tail_lo, spec.tail_hi, a, b) && b - a >= 4) {
      p.delay_fit = theory::fit_decay_rate(delay_ccdf, a, b);
    }
    if (resolves(p.metrics.window, spec.tail_lo) &&
        theory::tail_window(p.scalars.window_ccdf, spec.tail_lo, spec.tail_hi, a, b) && b - a >= 4) {
      p.window_fit = theory::fit_decay_rate(p.scalars.window_ccdf, a, b);
    }
    p.checks = point_checks(p, spec);
    res.points.push_back(std::move(p));
  }
  if (auto slope = window_log_slope(res.points)) {
    const double inv_eta = 1.0 / res.points.front().theory.eta;
    res.checks.push_back({"window_log_n_slope", within(*slope, inv_eta, spec.scaling_tolerance),
                          fmt("slope=%.4f 1/eta=%.4f rel=%+.4f", *slope, inv_eta, *slope / inv_eta - 1.0)});
  }
  return res;
}

BaselineResult compare_baseline(const ExperimentSpec& spec) {
  spec.validate();
  BaselineResult out;
  SystemParams params = spec.system;
  params.injection = InjectionKind::constant;
  PointResult& p = out.mwnc;
  p.label = spec.name;
  p.params = params;
  p.sim = build_sim(params);
  p.metrics = run_replicas(p.sim, spec.replicas, spec.threads);
  p.scalars = estimate_scalars(p.metrics);
  p.theory = theory::make_report(p.sim.injection.kind, p.sim.injection.lambda.value(), p.sim.gammas);

  const RlncConfig base = build_rlnc(params);
  const std::vector<std::int64_t> grid =
      params.batch_size > 0 ? std::vector<std::int64_t>{params.batch_size} : params.batch_grid;
  out.rlnc = sweep_batch_sizes(base, grid);
  const double mw = p.scalars.mean_delay.front();
  if (out.rlnc.best < 0) {
    out.checks.push_back({"rlnc_delay_exceeds_mwnc", false, "no feasible batch size in the grid"});
  } else {
    const RlncPoint& best = out.rlnc.points[static_cast<std::size_t>(out.rlnc.best)];
    out.checks.push_back({"rlnc_delay_exceeds_mwnc", best.mean_delay > mw,
                          fmt("rlnc(B=%.0f)=%.4f mwnc=%.4f", static_cast<double>(best.batch_size),
                              best.mean_delay, mw)});
  }
  return out;
}

}  // namespace mwnc
