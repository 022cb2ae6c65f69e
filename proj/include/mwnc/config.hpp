#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mwnc/coding.hpp"
#include "mwnc/rlnc.hpp"
#include "mwnc/simulator.hpp"

namespace mwnc {

/// Raw experiment parameters as they appear in a config file. lambda may be
/// given directly or as rho, in which case lambda = rho * gamma exactly.
struct SystemParams {
  std::int64_t n = 1;
  std::string gamma = "0.6";
  std::string gamma_high = "0.8";
  bool heterogeneous = false;  // first half gamma, second half gamma_high
  std::string lambda = "0.54";
  std::string rho;  // overrides lambda when set
  InjectionKind injection = InjectionKind::constant;
  std::int64_t b_af = 1;

  unsigned q = 8;
  std::uint64_t polynomial = 0;
  std::size_t symbols = 8;

  std::int64_t slots = 1000000;
  std::int64_t warmup = 10000;
  Mode mode = Mode::dynamics;
  bool check_invariants = false;

  std::uint64_t seed = 1;

  std::int64_t batch_size = 0;  // RLNC; 0 sweeps batch_grid
  std::vector<std::int64_t> batch_grid{8, 16, 32, 64, 128, 192, 256, 320, 384, 512, 768, 1024};

  Rational lambda_exact() const;
  std::vector<double> gammas() const;
};

SimConfig build_sim(const SystemParams& p);
RlncConfig build_rlnc(const SystemParams& p);

/// Seeds for replica r: replica 0 keeps the configured seeds.
SimConfig replica_config(const SimConfig& base, int replica);

struct SweepAxis {
  std::string key;  // e.g. "system.n"
  std::vector<std::string> values;
};

struct ExperimentSpec {
  std::string name = "run";
  std::string preset;
  SystemParams system;
  int replicas = 1;
  int threads = 0;  // 0 uses the hardware concurrency
  std::string output = "out";
  std::vector<SweepAxis> sweep;  // cartesian product, first axis outermost

  double tail_lo = 1e-5;
  double tail_hi = 1e-2;
  double rate_tolerance = 0.15;
  double scaling_tolerance = 0.20;

  void validate() const;
};

/// Sets one dotted key ("section.name") from its text value.
void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// INI-style config with [sections] and key = value lines.
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec load_config(const std::string& path);

const std::vector<std::string>& preset_names();
ExperimentSpec make_preset(std::string_view name);

/// Every parameter point of a spec's sweep, each as (label, params).
struct SweepPoint {
  std::string label;
  SystemParams params;
};
std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec);

std::vector<std::string> split_list(std::string_view text);

}  // namespace mwnc
