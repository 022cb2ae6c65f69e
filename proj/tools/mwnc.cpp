#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mwnc/config.hpp"
#include "mwnc/experiment.hpp"
#include "mwnc/report.hpp"
#include "mwnc/theory.hpp"

namespace {

struct CommonOptions {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> slots;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<int> replicas;
  std::optional<int> threads;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "INI experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--preset", o.preset, "named preset")
      ->check(CLI::IsMember(mwnc::preset_names()));
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--slots", o.slots, "slots per run");
  cmd->add_option("--mode", o.mode, "dynamics or full")->check(CLI::IsMember({"dynamics", "full"}));
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--replicas", o.replicas, "independent replicas per point");
  cmd->add_option("--threads", o.threads, "worker threads for replicas");
  cmd->add_option("--set", o.sets, "override section.key=value")->take_all();
}

mwnc::ExperimentSpec load_spec(const CommonOptions& o) {
  mwnc::ExperimentSpec spec;
  if (!o.config.empty()) {
    spec = mwnc::load_config(o.config);
  } else if (!o.preset.empty()) {
    spec = mwnc::make_preset(o.preset);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    mwnc::apply_setting(spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) spec.system.seed = *o.seed;
  if (o.slots) spec.system.slots = *o.slots;
  if (o.mode) spec.system.mode = mwnc::parse_mode(*o.mode);
  if (o.out) spec.output = *o.out;
  if (o.replicas) spec.replicas = *o.replicas;
  if (o.threads) spec.threads = *o.threads;
  spec.validate();
  return spec;
}

int report(const mwnc::ExperimentResult& r, const std::string& out) {
  mwnc::write_experiment(out, r);
  std::cout << std::setprecision(8);
  mwnc::write_sweep_table(std::cout, r);
  std::ostringstream acc;
  std::ifstream in(out + "/acceptance.txt");
  acc << in.rdbuf();
  std::cout << "\nacceptance\n" << acc.str();
  std::cout << (r.passed() ? "result: PASS\n" : "result: FAIL\n");
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-window network coding with anonymous feedback: simulator and oracles"};
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, base_opts;
  auto* run = app.add_subcommand("run", "run one configuration (sweep axes ignored)");
  add_common(run, run_opts);
  auto* sweep = app.add_subcommand("sweep", "run every point of a sweep");
  add_common(sweep, sweep_opts);
  auto* base = app.add_subcommand("compare-baseline", "compare against batch RLNC");
  add_common(base, base_opts);

  auto* th = app.add_subcommand("theory", "print analytical rates and bounds");
  std::string th_lambda = "0.54", th_gamma = "0.6", th_kind = "constant";
  th->add_option("--lambda", th_lambda, "injection rate");
  th->add_option("--gamma", th_gamma, "comma-separated success probabilities");
  th->add_option("--injection", th_kind, "constant or bernoulli")
      ->check(CLI::IsMember({"constant", "bernoulli"}));

  auto* fit = app.add_subcommand("fit", "fit the tail decay rate of a histogram table");
  std::string fit_input;
  double fit_lo = 1e-5, fit_hi = 1e-2;
  std::optional<std::int64_t> fit_kmin, fit_kmax;
  fit->add_option("input", fit_input, "TSV with columns k, count, ccdf")->required()->check(CLI::ExistingFile);
  fit->add_option("--lo", fit_lo, "lowest ccdf in the window");
  fit->add_option("--hi", fit_hi, "highest ccdf in the window");
  fit->add_option("--kmin", fit_kmin, "explicit window start");
  fit->add_option("--kmax", fit_kmax, "explicit window end");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      mwnc::ExperimentSpec spec = load_spec(run_opts);
      spec.sweep.clear();
      return report(mwnc::execute(spec), spec.output);
    }
    if (sweep->parsed()) {
      const mwnc::ExperimentSpec spec = load_spec(sweep_opts);
      if (spec.sweep.empty()) throw std::invalid_argument("sweep needs at least one [sweep] axis");
      return report(mwnc::execute(spec), spec.output);
    }
    if (base->parsed()) {
      mwnc::ExperimentSpec spec = load_spec(base_opts);
      spec.sweep.clear();
      const auto r = mwnc::compare_baseline(spec);
      mwnc::write_baseline(spec.output, r);
      std::cout << std::setprecision(8);
      mwnc::write_rlnc_table(std::cout, r.rlnc);
      std::cout << "mwnc_mean_delay_1\t" << r.mwnc.scalars.mean_delay.front() << "\n\nacceptance\n";
      mwnc::write_checks(std::cout, r.checks);
      const bool ok = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.pass; });
      std::cout << (ok ? "result: PASS\n" : "result: FAIL\n");
      return ok ? 0 : 1;
    }
    if (th->parsed()) {
      std::vector<double> gammas;
      for (const auto& g : mwnc::split_list(th_gamma)) gammas.push_back(mwnc::Rational::parse(g).value());
      const auto r = mwnc::theory::make_report(mwnc::parse_injection_kind(th_kind),
                                               mwnc::Rational::parse(th_lambda).value(), gammas);
      std::cout << r.serialize();
      return 0;
    }
    if (fit->parsed()) {
      std::ifstream in(fit_input);
      std::string header;
      std::getline(in, header);
      std::vector<double> ccdf;
      std::int64_t k = 0;
      std::uint64_t count = 0;
      double tail = 0;
      while (in >> k >> count >> tail) {
        if (k < 0) throw std::invalid_argument("negative k in " + fit_input);
        // Rows with zero count are omitted; the ccdf is flat across the gap.
        const double fill = ccdf.empty() ? 1.0 : ccdf.back();
        while (static_cast<std::int64_t>(ccdf.size()) < k) ccdf.push_back(fill);
        ccdf.push_back(tail);
      }
      const auto f = (fit_kmin && fit_kmax) ? mwnc::theory::fit_decay_rate(ccdf, *fit_kmin, *fit_kmax)
                                            : mwnc::theory::fit_tail(ccdf, fit_lo, fit_hi);
      std::cout << std::setprecision(10) << "slope=" << f.slope << "\nintercept=" << f.intercept
                << "\nr_squared=" << f.r_squared << "\nrms_residual=" << f.rms_residual
                << "\npoints=" << f.points << "\nk_min=" << f.k_min << "\nk_max=" << f.k_max << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "mwnc: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
