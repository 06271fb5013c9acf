// tgs: realizability checker for bounded safety specifications.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tgs/bench.hpp"
#include "tgs/construct.hpp"
#include "tgs/game.hpp"
#include "tgs/solver.hpp"
#include "tgs/spec.hpp"

namespace {

using namespace tgs;

enum Exit { kRealizable = 0, kUnrealizable = 1, kUnknown = 2, kError = 3 };

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Realizable: return kRealizable;
    case Verdict::Unrealizable: return kUnrealizable;
    case Verdict::Unknown: return kUnknown;
  }
  return kError;
}

Verdict from_winner(const CountdownTimerGame& g, Player w) {
  if (w == Player::System) return Verdict::Realizable;
  return g.approximate ? Verdict::Unknown : Verdict::Unrealizable;
}

struct CheckOptions {
  std::string path;
  std::string mode = "symbolic";
  std::uint32_t k0 = 1;
  std::size_t max_iter = 1'000'000;
  std::string expand = "log";
  bool no_prune = false;
  bool stats = false;
  bool oracle_check = false;
  std::string dump_path;
  std::size_t state_budget = kDefaultStateBudget;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_build_stats(const BuildResult& b) {
  const auto& s = b.stats;
  std::printf("locations: %zu\ntimers: %zu\nbranches: %zu\nexpand_rule: %s\nlog_restarts: %zu\nconstruction_ms: %.2f\n",
              s.locations, s.timers, s.branches, s.expand_rule.c_str(), s.restarts, s.ms);
  std::printf("assumption_approximation: %s\n", b.game.approximate ? "yes" : "no");
}

int cmd_check(const CheckOptions& o) {
  Spec spec;
  try {
    spec = parse_spec(read_file(o.path));
  } catch (const std::exception& e) {
    std::cerr << o.path << ": " << e.what() << "\n";
    return kError;
  }
  ConstructionConfig cc;
  cc.expand = ExpandRule::parse(o.expand);
  cc.prune = !o.no_prune;
  const auto built = build_game(spec, cc);
  const auto& g = built.game;

  if (!o.dump_path.empty()) {
    std::ofstream out(o.dump_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + o.dump_path);
    out << dump_game(g);
  }

  const bool want_symbolic = o.mode == "symbolic" || o.oracle_check;
  const bool want_explicit = o.mode == "explicit" || o.oracle_check;
  std::optional<SolveResult> sym;
  std::optional<ExplicitAttractor> exp;
  if (want_symbolic) {
    SolverConfig sc;
    sc.k0 = o.k0;
    sc.max_iterations = o.max_iter;
    sym = solve(g, sc);
  }
  if (want_explicit) exp = attractor_explicit(g, Scope::Reachable, o.state_budget);

  const Verdict v = o.mode == "explicit" ? from_winner(g, exp->winner) : sym->verdict;
  if (o.oracle_check && sym->verdict != Verdict::Unknown && sym->verdict != from_winner(g, exp->winner)) {
    std::cerr << "oracle disagreement: symbolic " << to_string(sym->verdict) << ", explicit "
              << to_string(from_winner(g, exp->winner)) << "\n";
    return kError;
  }
  std::printf("%s\n", to_string(v));

  if (o.stats) {
    print_build_stats(built);
    if (sym) {
      std::printf("k: %u\nsolve_ms: %.2f\n", sym->k, sym->ms);
      for (const auto& r : sym->runs)
        std::printf("run: k=%u mode=%s iterations=%zu peak_boxes=%zu winner=%s%s\n", r.k, to_string(r.mode),
                    r.iterations, r.peak_boxes, to_string(r.winner), r.completed ? "" : " incomplete");
      if (!sym->note.empty()) std::printf("note: %s\n", sym->note.c_str());
    }
    if (exp) std::printf("explicit_states: %zu\nexplicit_rounds: %zu\nexplicit_winner: %s\n", exp->states, exp->rounds,
                         to_string(exp->winner));
  }
  return exit_code(v);
}

// "3", "2..5", "1,2,4", "1..3,8"
std::vector<std::uint32_t> parse_values(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  auto num = [](const std::string& s) {
    std::size_t used = 0;
    const unsigned long v = std::stoul(s, &used);
    if (used != s.size() || v == 0 || v > 100'000) throw CLI::ValidationError("value out of range: " + s);
    return static_cast<std::uint32_t>(v);
  };
  while (std::getline(ss, item, ',')) {
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const auto lo = num(item.substr(0, dots)), hi = num(item.substr(dots + 2));
      if (hi < lo) throw CLI::ValidationError("empty range: " + item);
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(num(item));
    }
  }
  if (out.empty()) throw CLI::ValidationError("no values in '" + text + "'");
  return out;
}

struct BenchOptions {
  std::string family;
  std::string n, t1, t2, t3;
  std::string scale = "1";
  std::uint64_t timeout_ms = 0;
  std::uint32_t k0 = 1;
  std::string expand = "log";
  bool no_prune = false;
};

std::vector<bench::BenchmarkId> bench_ids(const BenchOptions& o) {
  const auto fam = bench::parse_family(o.family);
  if (!fam) throw std::invalid_argument("unknown family '" + o.family + "'");
  std::vector<std::vector<std::uint32_t>> axes;
  switch (bench::arity(*fam)) {
    case 0: break;
    case 1: axes = {parse_values(o.n.empty() ? "1" : o.n)}; break;
    default:
      axes = {parse_values(o.t1.empty() ? "1" : o.t1), parse_values(o.t2.empty() ? "1" : o.t2)};
      if (bench::arity(*fam) == 3) axes.push_back(parse_values(o.t3.empty() ? "1" : o.t3));
  }
  std::vector<std::vector<std::uint32_t>> combos{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& c : combos)
      for (auto v : axis) {
        next.push_back(c);
        next.back().push_back(v);
      }
    combos = std::move(next);
  }
  const auto scale = bench::Scale::parse(o.scale);
  std::vector<bench::BenchmarkId> ids;
  for (auto& c : combos) {
    ids.push_back({*fam, std::move(c), scale});
    ids.back().validate();
  }
  return ids;
}

int cmd_bench(const BenchOptions& o) {
  const auto ids = bench_ids(o);
  bench::SuiteConfig cfg;
  cfg.construct.expand = ExpandRule::parse(o.expand);
  cfg.construct.prune = !o.no_prune;
  cfg.solver.k0 = o.k0;
  if (o.timeout_ms) cfg.timeout = std::chrono::milliseconds(o.timeout_ms);
  const auto records = bench::run_suite(ids, cfg, &std::cout);
  for (const auto& r : records)
    if (r.status == bench::Status::Error) std::cerr << r.name << ": " << r.message << "\n";
  return 0;
}

int cmd_gen(const BenchOptions& o) {
  for (const auto& id : bench_ids(o)) std::cout << bench::generate_text(id);
  return 0;
}

void bench_flags(CLI::App* sub, BenchOptions& o) {
  std::string families;
  for (auto f : bench::all_families()) families += std::string(families.empty() ? "" : ", ") + bench::to_string(f);
  sub->add_option("family", o.family, "Benchmark family: " + families)->required();
  sub->add_option("--n", o.n, "N for single-parameter families: 3, 2..5 or 1,2,4 (default 1)");
  sub->add_option("--t1", o.t1, "T1 for rail2/rail3 (default 1)");
  sub->add_option("--t2", o.t2, "T2 for rail2/rail3 (default 1)");
  sub->add_option("--t3", o.t3, "T3 for rail3 (default 1)");
  sub->add_option("--scale", o.scale, "Divide every bound by this positive rational, rounding up (e.g. 72, 3/2)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realizability checking for bounded safety specifications via countdown-timer games"};
  app.require_subcommand(1);

  CheckOptions co;
  auto* check = app.add_subcommand("check", "Decide realizability of a specification file");
  check->add_option("spec", co.path, "Specification file")->required();
  check->add_option("--mode", co.mode, "Solver: symbolic, or explicit (enumerates timer valuations)")
      ->check(CLI::IsMember({"symbolic", "explicit"}))
      ->capture_default_str();
  check->add_option("--k0", co.k0, "Initial approximation threshold")
      ->check(CLI::Range(1u, 1u << 30))
      ->capture_default_str();
  check->add_option("--max-iter", co.max_iter, "Iteration budget per attractor run")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40))
      ->capture_default_str();
  check->add_option("--expand-threshold", co.expand,
                    "Which bounded operators are unrolled: log, none, all, or a bound n (unroll bounds <= n)")
      ->capture_default_str();
  check->add_flag("--no-prune", co.no_prune, "Disable tree and timer-order pruning");
  check->add_flag("--stats", co.stats, "Print construction and solver statistics");
  check->add_option("--dump-game", co.dump_path, "Write the constructed game to this file");
  check->add_flag("--oracle-check", co.oracle_check, "Run symbolic and explicit solvers and fail on disagreement");
  check->add_option("--state-budget", co.state_budget, "State limit for the explicit solver")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40))
      ->capture_default_str();

  BenchOptions bo;
  auto* bench_cmd = app.add_subcommand("bench", "Generate and solve benchmark instances, CSV on stdout");
  bench_flags(bench_cmd, bo);
  bench_cmd->add_option("--timeout-ms", bo.timeout_ms, "Per-instance time budget in ms, 0 for none")
      ->capture_default_str();
  bench_cmd->add_option("--k0", bo.k0, "Initial approximation threshold")
      ->check(CLI::Range(1u, 1u << 30))
      ->capture_default_str();
  bench_cmd->add_option("--expand-threshold", bo.expand, "As for check")->capture_default_str();
  bench_cmd->add_flag("--no-prune", bo.no_prune, "Disable pruning");

  BenchOptions go;
  auto* gen = app.add_subcommand("gen", "Print benchmark specifications in the input grammar");
  bench_flags(gen, go);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (*check) return cmd_check(co);
    if (*bench_cmd) return cmd_bench(bo);
    if (*gen) return cmd_gen(go);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
