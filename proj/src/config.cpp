#include "mwnc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "mwnc/random.hpp"

namespace mwnc {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  T v{};
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw std::invalid_argument(std::string(key) + ": not a number: '" + t + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t.rfind("0x", 0) == 0 || t.rfind("0X", 0) == 0) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data() + 2, t.data() + t.size(), v, 16);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      throw std::invalid_argument(std::string(key) + ": bad hex '" + t + "'");
    }
    return v;
  }
  return parse_number<std::uint64_t>(key, t);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw std::invalid_argument(std::string(key) + ": not a boolean: '" + t + "'");
}

Rational multiply(const Rational& a, const Rational& b) {
  return Rational(a.num * b.num, a.den * b.den);
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Rational SystemParams::lambda_exact() const {
  if (!rho.empty()) return multiply(Rational::parse(rho), Rational::parse(gamma));
  return Rational::parse(lambda);
}

std::vector<double> SystemParams::gammas() const {
  if (n < 1) throw std::invalid_argument("system.n must be >= 1");
  const double lo = Rational::parse(gamma).value();
  const double hi = Rational::parse(gamma_high).value();
  std::vector<double> g(static_cast<std::size_t>(n), lo);
  if (heterogeneous) {
    for (std::int64_t i = n / 2; i < n; ++i) g[static_cast<std::size_t>(i)] = hi;
  }
  return g;
}

SimConfig build_sim(const SystemParams& p) {
  SimConfig c;
  c.gammas = p.gammas();
  c.injection.kind = p.injection;
  c.injection.lambda = p.lambda_exact();
  c.injection.seed = rng::hash(p.seed, 0x1A, 0);
  c.q = p.q;
  c.polynomial = p.polynomial;
  c.symbols_per_packet = p.symbols;
  c.feedback.b_af = p.b_af;
  c.slots = p.slots;
  c.warmup = p.warmup;
  c.mode = p.mode;
  c.check_invariants = p.check_invariants;
  c.abort_on_violation = false;
  c.renewal_receivers.clear();
  c.coefficient_seed = rng::hash(p.seed, 0x1B, 0);
  c.channel_seed = rng::hash(p.seed, 0x1C, 0);
  c.payload_seed = rng::hash(p.seed, 0x1D, 0);
  return c;
}

RlncConfig build_rlnc(const SystemParams& p) {
  const SimConfig s = build_sim(p);
  RlncConfig r;
  r.gammas = s.gammas;
  r.injection = s.injection;
  r.batch_size = p.batch_size > 0 ? p.batch_size : 16;
  r.slots = s.slots;
  r.warmup = s.warmup;
  r.channel_seed = s.channel_seed;
  return r;
}

SimConfig replica_config(const SimConfig& base, int replica) {
  if (replica == 0) return base;
  SimConfig c = base;
  const auto r = static_cast<std::uint64_t>(replica);
  c.injection.seed = rng::hash(base.injection.seed, 0x2A, r);
  c.coefficient_seed = rng::hash(base.coefficient_seed, 0x2B, r);
  c.channel_seed = rng::hash(base.channel_seed, 0x2C, r);
  c.payload_seed = rng::hash(base.payload_seed, 0x2D, r);
  return c;
}

void ExperimentSpec::validate() const {
  if (replicas < 1) throw std::invalid_argument("experiment.replicas must be >= 1");
  if (threads < 0) throw std::invalid_argument("experiment.threads must be >= 0");
  for (const auto& axis : sweep) {
    if (axis.values.empty()) throw std::invalid_argument("sweep over " + axis.key + " has no values");
  }
  for (const auto& point : expand_sweep(*this)) {
    try {
      build_sim(point.params).validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("point '" + point.label + "': " + e.what());
    }
  }
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  SystemParams& p = spec.system;
  const std::string v = trim(value);
  if (key == "experiment.name") spec.name = v;
  else if (key == "experiment.preset") spec.preset = v;
  else if (key == "experiment.replicas") spec.replicas = parse_number<int>(key, v);
  else if (key == "experiment.threads") spec.threads = parse_number<int>(key, v);
  else if (key == "experiment.output") spec.output = v;
  else if (key == "system.n") p.n = parse_number<std::int64_t>(key, v);
  else if (key == "system.gamma") p.gamma = v;
  else if (key == "system.gamma_high") p.gamma_high = v;
  else if (key == "system.heterogeneous") p.heterogeneous = parse_bool(key, v);
  else if (key == "system.lambda") { p.lambda = v; p.rho.clear(); }
  else if (key == "system.rho") p.rho = v;
  else if (key == "system.injection") p.injection = parse_injection_kind(v);
  else if (key == "system.b_af") p.b_af = parse_number<std::int64_t>(key, v);
  else if (key == "field.q") p.q = parse_number<unsigned>(key, v);
  else if (key == "field.polynomial") p.polynomial = parse_u64(key, v);
  else if (key == "field.symbols") p.symbols = parse_number<std::size_t>(key, v);
  else if (key == "run.slots") p.slots = parse_number<std::int64_t>(key, v);
  else if (key == "run.warmup") p.warmup = parse_number<std::int64_t>(key, v);
  else if (key == "run.mode") p.mode = parse_mode(v);
  else if (key == "run.check_invariants") p.check_invariants = parse_bool(key, v);
  else if (key == "run.seed") p.seed = parse_u64(key, v);
  else if (key == "rlnc.batch_size") p.batch_size = parse_number<std::int64_t>(key, v);
  else if (key == "rlnc.batch_grid") {
    p.batch_grid.clear();
    for (const auto& item : split_list(v)) p.batch_grid.push_back(parse_number<std::int64_t>(key, item));
    if (p.batch_grid.empty()) throw std::invalid_argument("rlnc.batch_grid is empty");
  }
  else if (key == "acceptance.tail_lo") spec.tail_lo = parse_number<double>(key, v);
  else if (key == "acceptance.tail_hi") spec.tail_hi = parse_number<double>(key, v);
  else if (key == "acceptance.rate_tolerance") spec.rate_tolerance = parse_number<double>(key, v);
  else if (key == "acceptance.scaling_tolerance") spec.scaling_tolerance = parse_number<double>(key, v);
  else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

ExperimentSpec parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  ExperimentSpec spec;
  if (auto preset = tree.get_optional<std::string>("experiment.preset")) {
    spec = make_preset(trim(*preset));
  }
  std::vector<std::pair<std::string, std::string>> axes;
  for (const auto& [section, body] : tree) {
    for (const auto& [name, node] : body) {
      const std::string key = section + "." + name;
      const std::string value = node.get_value<std::string>();
      if (section == "sweep") {
        axes.emplace_back(name, value);
        continue;
      }
      if (key == "experiment.preset") continue;
      apply_setting(spec, key, value);
    }
  }
  if (!axes.empty()) spec.sweep.clear();
  for (const auto& [name, value] : axes) {
    SweepAxis axis{name, split_list(value)};
    if (axis.values.empty()) throw std::invalid_argument("empty sweep list for " + name);
    ExperimentSpec probe = spec;
    apply_setting(probe, axis.key, axis.values.front());
    spec.sweep.push_back(std::move(axis));
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  return parse_config(in);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"delay_decay",   "td_tradeoff",   "w_decay",
                                              "encoding_vs_n", "baf_encoding",  "decoding_vs_n",
                                              "baf_decoding"};
  return names;
}

ExperimentSpec make_preset(std::string_view name) {
  ExperimentSpec s;
  s.name = std::string(name);
  s.preset = std::string(name);
  SystemParams& p = s.system;
  p.gamma = "0.6";
  if (name == "delay_decay") {
    p.n = 1;
    p.slots = 10000000;
    s.sweep = {{"system.lambda", {"0.5", "0.54"}}, {"system.injection", {"constant", "bernoulli"}}};
  } else if (name == "td_tradeoff") {
    p.n = 100;
    p.slots = 1000000;
    s.sweep = {{"system.rho", {"0.5", "0.6", "0.7", "0.8", "0.9", "0.95"}},
               {"system.injection", {"constant", "bernoulli"}}};
  } else if (name == "w_decay") {
    p.rho = "0.9";
    p.slots = 10000000;
    s.sweep = {{"system.n", {"16", "100"}}, {"system.heterogeneous", {"false", "true"}}};
  } else if (name == "encoding_vs_n" || name == "decoding_vs_n") {
    p.rho = "0.9";
    p.slots = 1000000;
    s.sweep = {{"system.n", {"2", "4", "8", "16", "32", "64", "128", "256", "512", "1024"}}};
  } else if (name == "baf_encoding" || name == "baf_decoding") {
    p.n = 100;
    p.rho = "0.9";
    p.slots = 1000000;
    s.sweep = {{"system.b_af", {"1", "5", "10", "20", "40"}}};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec) {
  std::vector<SweepPoint> points{{spec.name, spec.system}};
  bool first = true;
  for (const auto& axis : spec.sweep) {
    if (axis.values.empty()) throw std::invalid_argument("empty sweep list for " + axis.key);
    std::vector<SweepPoint> next;
    for (const auto& base : points) {
      for (const auto& value : axis.values) {
        ExperimentSpec tmp;
        tmp.system = base.params;
        apply_setting(tmp, axis.key, value);
        const auto dot = axis.key.find('.');
        const std::string short_key = dot == std::string::npos ? axis.key : axis.key.substr(dot + 1);
        std::string label = (first ? std::string() : base.label + "_") + short_key + "=" + value;
        next.push_back({std::move(label), tmp.system});
      }
    }
    points = std::move(next);
    first = false;
  }
  return points;
}

}  // namespace mwnc
