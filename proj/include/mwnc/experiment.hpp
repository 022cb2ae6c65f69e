#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwnc/config.hpp"
#include "mwnc/metrics.hpp"
#include "mwnc/rlnc.hpp"
#include "mwnc/theory.hpp"

namespace mwnc {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PointResult {
  std::string label;
  SystemParams params;
  SimConfig sim;
  Metrics metrics;
  Scalars scalars;
  theory::TheoryReport theory;
  std::optional<theory::FitResult> delay_fit;   // receiver 1
  std::optional<theory::FitResult> window_fit;
  std::vector<Check> checks;
};

struct ExperimentResult {
  std::string name;
  std::vector<PointResult> points;
  std::vector<Check> checks;  // across points (scaling in n)

  bool passed() const;
};

/// Runs spec.replicas independent replicas of one configuration, merged in
/// replica order. Uses up to threads workers (0 = hardware concurrency).
Metrics run_replicas(const SimConfig& cfg, int replicas, int threads);

/// Runs every sweep point and evaluates the acceptance block.
ExperimentResult execute(const ExperimentSpec& spec);

/// Per-point checks: invariants, payload, delay bound, Wald ratio and tail rates.
std::vector<Check> point_checks(const PointResult& p, const ExperimentSpec& spec);

/// Least-squares slope of W-bar against log n across points sharing lambda and gamma.
std::optional<double> window_log_slope(const std::vector<PointResult>& points);

struct BaselineResult {
  PointResult mwnc;
  RlncSweep rlnc;
  std::vector<Check> checks;
};

/// MWNC-AF with constant injection against batch RLNC on the same channel seed.
BaselineResult compare_baseline(const ExperimentSpec& spec);

}  // namespace mwnc
