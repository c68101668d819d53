#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <fstream>
#include <sstream>

#include "sawsle/commands.hpp"
#include "sawsle/conformal.hpp"
#include "sawsle/errors.hpp"
#include "sawsle/estimators.hpp"
#include "sawsle/observables.hpp"
#include "sawsle/selftest.hpp"

namespace py = pybind11;
using namespace sawsle;

namespace {

using PyWalk = std::vector<std::pair<int, int>>;

LatticeWalk to_walk(const PyWalk& sites) {
  std::vector<Site> out;
  out.reserve(sites.size());
  for (const auto& [x, y] : sites) out.push_back({x, y});
  LatticeWalk walk(std::move(out));
  if (!validate_walk(walk)) throw std::invalid_argument("not a half-plane self-avoiding walk");
  return walk;
}

PyWalk from_walk(const LatticeWalk& walk) {
  PyWalk out;
  out.reserve(walk.sites().size());
  for (const Site s : walk.sites()) out.emplace_back(s.x, s.y);
  return out;
}

Statistic stat_of(const std::string& s) {
  const auto stat = parse_statistic(s);
  if (!stat) throw std::invalid_argument("unknown statistic '" + s + "' (expected X, Y, R or S)");
  return *stat;
}

py::dict stats_dict(const TransformedStats& s) {
  py::dict d;
  d["X"] = s.x_max;
  d["Y"] = s.y_max;
  d["R"] = s.r_max;
  d["S"] = s.s_max;
  d["r_end"] = s.r_end;
  d["theta"] = s.theta;
  return d;
}

py::dict estimates_dict(const Estimates& e) {
  py::dict d;
  for (const CdfEstimate& c : e.cdfs) {
    py::dict cd;
    cd["w"] = c.thresholds;
    cd["ecdf"] = c.ecdf;
    cd["stderr"] = c.std_error;
    d[py::str(std::string(name(c.stat)))] = cd;
  }
  py::dict a;
  a["mid"] = e.angular.mid;
  a["expectation"] = e.angular.expectation;
  a["stderr"] = e.angular.std_error;
  d["angular"] = a;
  d["samples"] = e.samples;
  d["total_weight"] = e.total_weight;
  d["effective_samples"] = e.effective_samples;
  d["error_blocks"] = e.error_blocks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sawsle, m) {
  m.doc() = "Half-plane SAW Monte Carlo tests of radial SLE(8/3)";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<EmptyAccumulatorError>(m, "EmptyAccumulatorError", PyExc_ValueError);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);

  m.def("enumerate_walks", [](std::size_t n) {
        std::vector<PyWalk> out;
        for (const LatticeWalk& w : enumerate_half_plane_saws(n)) out.push_back(from_walk(w));
        return out;
      },
      py::arg("n"), "Every n-step half-plane SAW as a list of (x, y) sites.");
  m.def("is_valid_walk", [](const PyWalk& sites) {
        std::vector<Site> s;
        for (const auto& [x, y] : sites) s.push_back({x, y});
        return validate_walk(LatticeWalk(std::move(s)));
      },
      py::arg("walk"));
  m.def("sample_walks", [](std::size_t n, std::size_t count, std::uint64_t interval, std::uint64_t seed) {
        std::vector<PyWalk> out;
        for (const LatticeWalk& w : sample_walks(n, count, interval, seed)) out.push_back(from_walk(w));
        return out;
      },
      py::arg("n"), py::arg("count"), py::arg("interval") = 100, py::arg("seed") = 1,
      "Walks from one pivot chain started at the rod.");

  m.def("factors", [](const std::string& stat, double w) {
        const SleCdfFactors f = factors(stat_of(stat), w);
        return std::make_pair(f.d0, f.di);
      },
      py::arg("stat"), py::arg("w"), "(|phi'(0)|, |phi'(i)|) for statistic X, Y, R or S.");
  m.def("exact_cdf", [](const std::string& stat, double w) { return exact_cdf(stat_of(stat), w); },
        py::arg("stat"), py::arg("w"));
  m.def("excursion_map", [](const std::string& stat, double w, Complex z) {
        return excursion_map(stat_of(stat), w, z);
      },
      py::arg("stat"), py::arg("w"), py::arg("z"));
  m.def("angular_density", [](double theta) { return angular_density_reference(theta); }, py::arg("theta"));

  m.def("walk_stats", [](const PyWalk& sites, bool fast) {
        const LatticeWalk walk = to_walk(sites);
        return stats_dict(fast ? stats_fast(walk) : stats_bruteforce(walk));
      },
      py::arg("walk"), py::arg("fast") = true);
  m.def("walk_weight", [](const PyWalk& sites) { return weight(stats_fast(to_walk(sites))); }, py::arg("walk"));

  py::class_<WeightedAccumulator>(m, "Accumulator")
      .def(py::init<std::uint64_t>(), py::arg("block_size") = 1)
      .def("add_walk", [](WeightedAccumulator& a, const PyWalk& w) { accumulate_walk(a, to_walk(w)); })
      .def("merge", &WeightedAccumulator::merge)
      .def_property_readonly("samples", &WeightedAccumulator::samples)
      .def_property_readonly("total_weight", &WeightedAccumulator::total_weight)
      .def("finalize", [](const WeightedAccumulator& a) { return estimates_dict(finalize(a)); })
      .def("save", [](const WeightedAccumulator& a, const std::filesystem::path& p) {
        std::ostringstream os;
        a.write(os);
        std::ofstream(p) << os.str();
      })
      .def_static("load", [](const std::filesystem::path& p) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + p.string());
        return WeightedAccumulator::read(in);
      })
      .def(py::self == py::self);

  m.def("run", [](const std::map<std::string, std::string>& settings) {
        RunConfig config;
        for (const auto& [k, v] : settings) apply_setting(config, k, v);
        py::gil_scoped_release release;
        return cmd_run(config).accumulator_path;
      },
      py::arg("settings"), "Runs chains from key=value settings; returns the merged accumulator path.");
  m.def("analyze", [](const std::filesystem::path& acc, const std::filesystem::path& out) {
        const AnalysisSummary s = cmd_analyze(acc, out);
        py::dict d;
        d["max_abs_diff"] = s.max_abs_diff;
        if (s.exponent_fit) d["b"] = std::make_pair(s.exponent_fit->coefficients(0), s.exponent_fit->coefficients(1));
        if (s.angular_fit) d["angular_slope"] = s.angular_fit->coefficients(1);
        d["warnings"] = s.warnings;
        return d;
      },
      py::arg("accumulator"), py::arg("out_dir"));
  m.def("selftest", [](std::uint64_t uniformity_samples) {
        SelftestOptions o;
        o.uniformity_samples = uniformity_samples;
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const CheckResult& c : run_selftest(o)) out.emplace_back(c.name, c.passed, c.detail);
        return out;
      },
      py::arg("uniformity_samples") = 1'000'000);
  m.attr("__version__") = std::string(code_version());
}
