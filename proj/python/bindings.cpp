#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "mwnc/config.hpp"
#include "mwnc/galois.hpp"
#include "mwnc/rlnc.hpp"
#include "mwnc/simulator.hpp"
#include "mwnc/theory.hpp"

namespace py = pybind11;
using namespace mwnc;

namespace {

SystemParams make_params(std::int64_t n, const std::string& gamma, const std::string& lambda,
                         const std::optional<std::string>& rho, const std::string& injection,
                         bool heterogeneous, const std::string& gamma_high, std::int64_t b_af,
                         unsigned q, const std::string& mode, std::int64_t slots, std::int64_t warmup,
                         std::uint64_t seed, bool check_invariants) {
  SystemParams p;
  p.n = n;
  p.gamma = gamma;
  p.lambda = lambda;
  if (rho) p.rho = *rho;
  p.injection = parse_injection_kind(injection);
  p.heterogeneous = heterogeneous;
  p.gamma_high = gamma_high;
  p.b_af = b_af;
  p.q = q;
  p.mode = parse_mode(mode);
  p.slots = slots;
  p.warmup = warmup;
  p.seed = seed;
  p.check_invariants = check_invariants;
  return p;
}

py::dict summarize(const Metrics& m) {
  py::dict d;
  py::list delay, omega, decoded, delay_hist;
  for (const auto& r : m.receivers) {
    delay.append(r.decoded ? r.delay.mean() : 0.0);
    omega.append(r.decoded ? static_cast<double>(r.ops()) / static_cast<double>(r.decoded) : 0.0);
    decoded.append(r.decoded);
  }
  d["slots"] = m.slots;
  d["mean_window"] = m.slots ? static_cast<double>(m.encoder_ops) / static_cast<double>(m.slots) : 0.0;
  d["mean_delay"] = delay;
  d["omega"] = omega;
  d["decoded"] = decoded;
  d["window_hist"] = m.window.counts();
  d["delay_hist"] = m.receivers.front().delay.counts();
  d["invariant_violations"] = m.invariants.violations();
  d["payload_verified"] = m.payload_verified;
  d["payload_mismatched"] = m.payload_mismatched;
  d["saturated"] = m.saturated;
  return d;
}

py::dict fit_dict(const theory::FitResult& f) {
  py::dict d;
  d["slope"] = f.slope;
  d["intercept"] = f.intercept;
  d["r_squared"] = f.r_squared;
  d["points"] = f.points;
  d["k_min"] = f.k_min;
  d["k_max"] = f.k_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moving-window network coding with anonymous feedback";

  py::class_<GaloisField>(m, "GaloisField")
      .def(py::init<unsigned>(), py::arg("q") = 8)
      .def(py::init<unsigned, std::uint64_t>(), py::arg("q"), py::arg("polynomial"))
      .def_property_readonly("q", &GaloisField::exponent)
      .def_property_readonly("polynomial", &GaloisField::polynomial)
      .def("mul", &GaloisField::mul)
      .def("inv", &GaloisField::inv)
      .def("div", &GaloisField::div)
      .def_static("add", &GaloisField::add);

  py::register_exception<FieldError>(m, "FieldError", PyExc_ZeroDivisionError);
  py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);

  m.def("phi_rate", [](double lambda, double gamma, const std::string& injection) {
    return theory::phi_rate(parse_injection_kind(injection), lambda, gamma);
  }, py::arg("lam"), py::arg("gamma"), py::arg("injection") = "constant");

  m.def("eta_rate", [](double lambda, double gamma) {
    const auto r = theory::eta_rate(lambda, gamma);
    return py::make_tuple(r.theta_star, r.eta);
  }, py::arg("lam"), py::arg("gamma"), "Returns (theta_star, eta).");

  m.def("delay_bound", &theory::delay_bound, py::arg("lam"), py::arg("gamma"));

  m.def("fit_tail", [](const std::vector<double>& ccdf, double lo, double hi) {
    return fit_dict(theory::fit_tail(ccdf, lo, hi));
  }, py::arg("ccdf"), py::arg("lo") = 1e-5, py::arg("hi") = 1e-2);

  m.def("ccdf", [](const std::vector<std::uint64_t>& counts) {
    Histogram h;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k]) h.add(static_cast<std::int64_t>(k), counts[k]);
    }
    return h.ccdf();
  }, py::arg("counts"), "P(X > k) from a histogram of counts.");

  m.def("simulate", [](std::int64_t n, const std::string& gamma, const std::string& lambda,
                       std::optional<std::string> rho, const std::string& injection, bool heterogeneous,
                       const std::string& gamma_high, std::int64_t b_af, unsigned q, const std::string& mode,
                       std::int64_t slots, std::int64_t warmup, std::uint64_t seed, bool check_invariants) {
    const SimConfig cfg = build_sim(make_params(n, gamma, lambda, rho, injection, heterogeneous, gamma_high,
                                                b_af, q, mode, slots, warmup, seed, check_invariants));
    Metrics out;
    {
      py::gil_scoped_release release;
      out = run(cfg);
    }
    return summarize(out);
  },
  py::arg("n") = 1, py::arg("gamma") = "0.6", py::arg("lam") = "0.54", py::arg("rho") = py::none(),
  py::arg("injection") = "constant", py::arg("heterogeneous") = false, py::arg("gamma_high") = "0.8",
  py::arg("b_af") = 1, py::arg("q") = 8, py::arg("mode") = "dynamics", py::arg("slots") = 100000,
  py::arg("warmup") = 10000, py::arg("seed") = 1, py::arg("check_invariants") = false,
  "Runs one simulation; rates are exact decimal or p/q strings.");

  m.def("rlnc", [](std::int64_t n, const std::string& gamma, const std::string& lambda,
                   std::optional<std::string> rho, std::int64_t batch_size, std::int64_t slots,
                   std::int64_t warmup, std::uint64_t seed) {
    SystemParams p = make_params(n, gamma, lambda, rho, "constant", false, "0.8", 1, 8, "dynamics", slots,
                                 warmup, seed, false);
    p.batch_size = batch_size;
    const RlncConfig cfg = build_rlnc(p);
    Metrics out;
    {
      py::gil_scoped_release release;
      out = run_rlnc(cfg);
    }
    return summarize(out);
  },
  py::arg("n") = 1, py::arg("gamma") = "0.6", py::arg("lam") = "0.54", py::arg("rho") = py::none(),
  py::arg("batch_size") = 16, py::arg("slots") = 100000, py::arg("warmup") = 10000, py::arg("seed") = 1);
}
