#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mwnc/config.hpp"
#include "mwnc/experiment.hpp"
#include "mwnc/report.hpp"

using namespace mwnc;

namespace {

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Config, ParsesSectionsAndSweeps) {
  const ExperimentSpec s = parse(
      "[experiment]\nname = demo\nreplicas = 2\n"
      "[system]\nn = 8\ngamma = 0.7\nlambda = 1/2\ninjection = bernoulli\nb_af = 4\n"
      "[field]\nq = 16\n"
      "[run]\nslots = 5000\nwarmup = 100\nmode = full\ncheck_invariants = true\nseed = 9\n"
      "[sweep]\nsystem.n = 2, 4 ,8\nsystem.injection = constant,bernoulli\n");
  EXPECT_EQ(s.name, "demo");
  EXPECT_EQ(s.replicas, 2);
  EXPECT_EQ(s.system.n, 8);
  EXPECT_EQ(s.system.lambda_exact(), Rational(1, 2));
  EXPECT_EQ(s.system.injection, InjectionKind::bernoulli);
  EXPECT_EQ(s.system.b_af, 4);
  EXPECT_EQ(s.system.q, 16u);
  EXPECT_EQ(s.system.mode, Mode::full);
  EXPECT_TRUE(s.system.check_invariants);
  ASSERT_EQ(s.sweep.size(), 2u);
  EXPECT_EQ(s.sweep[0].key, "system.n");
  EXPECT_EQ(s.sweep[0].values, (std::vector<std::string>{"2", "4", "8"}));
  const auto points = expand_sweep(s);
  ASSERT_EQ(points.size(), 6u);
  EXPECT_EQ(points[0].label, "n=2_injection=constant");
  EXPECT_EQ(points[5].label, "n=8_injection=bernoulli");
  EXPECT_EQ(points[5].params.n, 8);
}

TEST(Config, RhoGivesAnExactRate) {
  const ExperimentSpec s = parse("[system]\ngamma = 0.6\nrho = 0.9\n");
  EXPECT_EQ(s.system.lambda_exact(), Rational(27, 50));
  EXPECT_EQ(build_sim(s.system).injection.lambda, Rational(27, 50));
}

TEST(Config, HeterogeneousSplitsReceivers) {
  SystemParams p;
  p.n = 5;
  p.heterogeneous = true;
  EXPECT_EQ(p.gammas(), (std::vector<double>{0.6, 0.6, 0.8, 0.8, 0.8}));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[system]\nbogus = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse("[system]\nn = many\n"), std::invalid_argument);
  EXPECT_THROW(parse("[sweep]\nsystem.n = \n"), std::invalid_argument);
  EXPECT_THROW(parse("[sweep]\nsystem.nope = 1,2\n"), std::invalid_argument);
  EXPECT_THROW(parse("[experiment]\npreset = nothing\n"), std::invalid_argument);
  EXPECT_THROW(make_preset("nothing"), std::invalid_argument);
}

TEST(Config, PresetsExpand) {
  for (const auto& name : preset_names()) {
    const ExperimentSpec s = make_preset(name);
    EXPECT_NO_THROW(s.validate()) << name;
    EXPECT_GE(expand_sweep(s).size(), 2u) << name;
  }
  const ExperimentSpec s = parse("[experiment]\npreset = baf_encoding\n[run]\nslots = 1000\n");
  EXPECT_EQ(s.system.n, 100);
  EXPECT_EQ(s.system.slots, 1000);
  EXPECT_EQ(expand_sweep(s).size(), 5u);
}

TEST(Config, ReplicaSeedsDiffer) {
  const SimConfig base = build_sim(SystemParams{});
  const SimConfig r0 = replica_config(base, 0);
  const SimConfig r1 = replica_config(base, 1);
  EXPECT_EQ(r0.channel_seed, base.channel_seed);
  EXPECT_NE(r1.channel_seed, base.channel_seed);
  EXPECT_NE(r1.coefficient_seed, base.coefficient_seed);
}

TEST(Report, OutputsAreByteIdenticalAcrossRuns) {
  ExperimentSpec s = parse(
      "[system]\nn = 4\nrho = 0.9\n[run]\nslots = 20000\nwarmup = 1000\ncheck_invariants = true\n"
      "[sweep]\nsystem.injection = constant, bernoulli\n");
  s.replicas = 2;
  s.threads = 2;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "mwnc_report_test";
  fs::remove_all(root);
  write_experiment((root / "a").string(), execute(s));
  write_experiment((root / "b").string(), execute(s));
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), root / "a");
    EXPECT_EQ(slurp(e.path()), slurp(root / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 2u * 6u + 2u);
  EXPECT_NE(slurp(root / "a" / "acceptance.txt").find("PASS\tinjection=constant:invariants"),
            std::string::npos);
  fs::remove_all(root);
}
