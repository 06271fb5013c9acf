#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tgs/bench.hpp"
#include "tgs/construct.hpp"
#include "tgs/solver.hpp"
#include "tgs/spec.hpp"

namespace py = pybind11;
using namespace tgs;

namespace {

py::dict check(const std::string& text, const std::string& mode, std::uint32_t k0, const std::string& expand,
               bool prune) {
  const Spec spec = parse_spec(text);
  ConstructionConfig cc;
  cc.expand = ExpandRule::parse(expand);
  cc.prune = prune;
  BuildResult built;
  SolveResult res;
  {
    py::gil_scoped_release nogil;
    built = build_game(spec, cc);
    if (mode == "explicit") {
      const auto w = attractor_explicit(built.game, Scope::Reachable).winner;
      res.verdict = w == Player::System    ? Verdict::Realizable
                    : built.game.approximate ? Verdict::Unknown
                                             : Verdict::Unrealizable;
    } else if (mode == "symbolic") {
      SolverConfig sc;
      sc.k0 = k0;
      res = solve(built.game, sc);
    } else {
      throw std::invalid_argument("mode must be 'symbolic' or 'explicit'");
    }
  }
  py::dict d;
  d["verdict"] = to_string(res.verdict);
  d["k"] = res.k;
  d["locations"] = built.stats.locations;
  d["timers"] = built.stats.timers;
  d["branches"] = built.stats.branches;
  d["approximate"] = built.game.approximate;
  d["note"] = res.note;
  return d;
}

bench::BenchmarkId bench_id(const std::string& family, std::vector<std::uint32_t> params, const std::string& scale) {
  auto f = bench::parse_family(family);
  if (!f) throw std::invalid_argument("unknown family '" + family + "'");
  bench::BenchmarkId id{*f, std::move(params), bench::Scale::parse(scale)};
  id.validate();
  return id;
}

}  // namespace

PYBIND11_MODULE(_tgs, m) {
  m.doc() = "Realizability checking for bounded safety specifications";
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);

  m.def("check", &check, py::arg("text"), py::arg("mode") = "symbolic", py::arg("k0") = 1,
        py::arg("expand") = "log", py::arg("prune") = true,
        "Decide realizability of a specification given as text.");

  m.def("families", [] {
    std::vector<std::string> out;
    for (auto f : bench::all_families()) out.emplace_back(bench::to_string(f));
    return out;
  });

  m.def(
      "generate",
      [](const std::string& family, std::vector<std::uint32_t> params, const std::string& scale) {
        return bench::generate_text(bench_id(family, std::move(params), scale));
      },
      py::arg("family"), py::arg("params") = std::vector<std::uint32_t>{}, py::arg("scale") = "1");

  m.def(
      "bench",
      [](const std::string& family, std::vector<std::uint32_t> params, const std::string& scale,
         std::optional<std::chrono::milliseconds> timeout) {
        const auto id = bench_id(family, std::move(params), scale);
        bench::SuiteConfig cfg;
        cfg.timeout = timeout;
        bench::RunRecord r;
        {
          py::gil_scoped_release nogil;
          r = bench::run_one(id, cfg);
        }
        py::dict d;
        d["name"] = r.name;
        d["winner"] = r.winner();
        d["k"] = r.k;
        d["locations"] = r.locations;
        d["timers"] = r.timers;
        d["gen_ms"] = r.gen_ms;
        d["total_ms"] = r.total_ms;
        d["message"] = r.message;
        return d;
      },
      py::arg("family"), py::arg("params") = std::vector<std::uint32_t>{}, py::arg("scale") = "1",
      py::arg("timeout") = std::nullopt);
}
