#include "mwnc/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mwnc {

namespace fs = std::filesystem;

namespace {

constexpr double kNoFit = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::setprecision(10);
  return os;
}

}  // namespace

void write_summary(std::ostream& os, const PointResult& p) {
  const auto& s = p.scalars;
  const auto& m = p.metrics;
  os << "key\tvalue\n";
  os << "label\t" << p.label << '\n';
  os << "n\t" << p.sim.n() << '\n';
  os << "lambda\t" << p.sim.injection.lambda.str() << '\n';
  os << "injection\t" << to_string(p.sim.injection.kind) << '\n';
  os << "gamma_min\t" << p.theory.gamma << '\n';
  os << "rho\t" << p.theory.rho << '\n';
  os << "b_af\t" << p.sim.feedback.b_af << '\n';
  os << "mode\t" << to_string(p.sim.mode) << '\n';
  os << "slots\t" << p.sim.slots << '\n';
  os << "warmup\t" << p.sim.warmup << '\n';
  os << "measured_slots\t" << m.slots << '\n';
  os << "mean_window\t" << s.mean_window << '\n';
  os << "mean_delay_1\t" << s.mean_delay.front() << '\n';
  os << "mean_delay_worst\t" << s.mean_delay_worst << '\n';
  os << "omega_1\t" << s.omega_first << '\n';
  os << "omega_worst\t" << s.omega_worst << '\n';
  os << "step1_ops_1\t" << m.receivers.front().step1_ops << '\n';
  os << "step2_ops_1\t" << m.receivers.front().step2_ops << '\n';
  os << "decoded_1\t" << m.receivers.front().decoded << '\n';
  os << "decoded_total\t" << m.decoded() << '\n';
  os << "beacon_rounds\t" << m.beacon_rounds << '\n';
  os << "beacon_holds\t" << m.beacon_holds << '\n';
  os << "removed\t" << m.removed << '\n';
  if (p.delay_fit) os << "delay_tail_slope\t" << p.delay_fit->slope << '\n';
  if (p.window_fit) os << "window_tail_slope\t" << p.window_fit->slope << '\n';
  if (m.payload_checked) {
    os << "payload_verified\t" << m.payload_verified << '\n';
    os << "payload_mismatched\t" << m.payload_mismatched << '\n';
  }
  if (p.sim.check_invariants) os << "invariant_violations\t" << m.invariants.violations() << '\n';
}

void write_checks(std::ostream& os, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << '\t' << c.name << '\t' << c.detail << '\n';
  }
}

void write_sweep_table(std::ostream& os, const ExperimentResult& r) {
  os << "label\tn\tlambda\tinjection\tb_af\tmean_window\tmean_delay_1\tomega_1\tomega_worst"
        "\tdelay_tail_slope\twindow_tail_slope\tphi_1\teta\n";
  for (const auto& p : r.points) {
    os << p.label << '\t' << p.sim.n() << '\t' << p.sim.injection.lambda.str() << '\t'
       << to_string(p.sim.injection.kind) << '\t' << p.sim.feedback.b_af << '\t'
       << p.scalars.mean_window << '\t' << p.scalars.mean_delay.front() << '\t'
       << p.scalars.omega_first << '\t' << p.scalars.omega_worst << '\t'
       << (p.delay_fit ? p.delay_fit->slope : kNoFit) << '\t'
       << (p.window_fit ? p.window_fit->slope : kNoFit) << '\t' << p.theory.phi.front() << '\t'
       << p.theory.eta << '\n';
  }
}

void write_rlnc_table(std::ostream& os, const RlncSweep& s) {
  os << "batch_size\tsaturated\tmean_delay_1\tmean_delay_worst\tmean_window\tbest\n";
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    os << p.batch_size << '\t' << (p.saturated ? 1 : 0) << '\t' << p.mean_delay << '\t'
       << p.mean_delay_worst << '\t' << p.mean_window << '\t'
       << (static_cast<int>(i) == s.best ? 1 : 0) << '\n';
  }
}

namespace {

void write_point(const fs::path& dir, const PointResult& p) {
  fs::create_directories(dir);
  { auto os = open_out(dir / "summary.tsv"); write_summary(os, p); }
  { auto os = open_out(dir / "theory.txt"); os << p.theory.serialize(); }
  { auto os = open_out(dir / "window.tsv"); write_histogram_tsv(os, p.metrics.window); }
  { auto os = open_out(dir / "delay_1.tsv"); write_histogram_tsv(os, p.metrics.receivers.front().delay); }
  { auto os = open_out(dir / "queue_1.tsv"); write_histogram_tsv(os, p.metrics.receivers.front().queue); }
  { auto os = open_out(dir / "acceptance.txt"); write_checks(os, p.checks); }
}

}  // namespace

void write_experiment(const std::string& dir, const ExperimentResult& r) {
  const fs::path root(dir);
  fs::create_directories(root);
  for (const auto& p : r.points) write_point(root / p.label, p);
  { auto os = open_out(root / "sweep.tsv"); write_sweep_table(os, r); }
  auto os = open_out(root / "acceptance.txt");
  for (const auto& p : r.points) {
    for (const auto& c : p.checks) {
      os << (c.pass ? "PASS" : "FAIL") << '\t' << p.label << ':' << c.name << '\t' << c.detail << '\n';
    }
  }
  write_checks(os, r.checks);
}

void write_baseline(const std::string& dir, const BaselineResult& r) {
  const fs::path root(dir);
  write_point(root / "mwnc", r.mwnc);
  { auto os = open_out(root / "rlnc.tsv"); write_rlnc_table(os, r.rlnc); }
  auto os = open_out(root / "acceptance.txt");
  write_checks(os, r.checks);
}

}  // namespace mwnc
