// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "support.hpp"
#include "tgs/bench.hpp"
#include "tgs/construct.hpp"
#include "tgs/solver.hpp"

using namespace tgs;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few problems; any problem fails the criterion.
struct Report {
  std::ostringstream detail;
  int problems = 0;
  void fail(const std::string& what) {
    if (problems++ < 5) detail << (problems > 1 ? "; " : "") << what;
  }
  Outcome done(const std::string& ok_text) {
    if (problems == 0) return {true, ok_text};
    if (problems > 5) detail << "; +" << problems - 5 << " more";
    return {false, detail.str()};
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fixed(double x) {
  std::ostringstream s;
  s.precision(1);
  s << std::fixed << x;
  return s.str();
}

Player explicit_winner(const CountdownTimerGame& g) { return attractor_explicit(g, Scope::Reachable).winner; }

Verdict verdict_of(Player p) { return p == Player::Env ? Verdict::Unrealizable : Verdict::Realizable; }

using bench::BenchmarkId;
using bench::Family;

Outcome table_verdicts() {
  struct Row {
    Family f;
    std::uint32_t n;  // 0 for the parameterless ones
    const char* win;
    std::uint32_t k;  // 0 when not checked
  };
  std::vector<Row> rows;
  for (std::uint32_t n = 1; n <= 4; ++n) rows.push_back({Family::Clean, n, "S", 0});
  for (std::uint32_t n = 1; n <= 4; ++n) rows.push_back({Family::CleanH, n, "E", 512});
  for (std::uint32_t n = 1; n <= 2; ++n) rows.push_back({Family::CleanN, n, "S", 0});
  for (std::uint32_t n = 1; n <= 2; ++n) rows.push_back({Family::Coffee, n, "S", 0});
  rows.push_back({Family::ConvBelt, 0, "S", 0});
  rows.push_back({Family::RoboCam, 0, "S", 0});
  bench::SuiteConfig cfg;
  cfg.timeout = std::chrono::minutes(10);
  Report rep;
  double worst = 0;
  for (const auto& r : rows) {
    BenchmarkId id{r.f, r.n ? std::vector<std::uint32_t>{r.n} : std::vector<std::uint32_t>{}, {}};
    const auto rec = bench::run_one(id, cfg);
    worst = std::max(worst, rec.total_ms);
    if (rec.winner() != r.win)
      rep.fail(rec.name + " gave " + rec.winner() + (rec.message.empty() ? "" : " (" + rec.message + ")"));
    else if (r.k && rec.k != r.k)
      rep.fail(rec.name + " stopped at k=" + std::to_string(rec.k));
  }
  return rep.done(std::to_string(rows.size()) + " instances, slowest " + fixed(worst / 1000) + " s");
}

Outcome phi_verdicts() {
  bench::SuiteConfig cfg;
  cfg.timeout = std::chrono::seconds(30);
  Report rep;
  int count = 0;
  double worst = 0;
  for (auto f : {Family::PhiA, Family::PhiB, Family::PhiC, Family::PhiD}) {
    const std::string want = f == Family::PhiA || f == Family::PhiB ? "S" : "E";
    for (std::uint32_t n = 2; n <= 20; ++n) {
      const auto rec = bench::run_one(BenchmarkId{f, {n}, {}}, cfg);
      ++count;
      worst = std::max(worst, rec.total_ms);
      if (rec.winner() != want) rep.fail(rec.name + " gave " + rec.winner());
    }
  }
  return rep.done(std::to_string(count) + " instances, slowest " + fixed(worst / 1000) + " s");
}

Outcome example_one() {
  Report rep;
  const auto spec = parse_spec("INPUTS r; OUTPUTS g; GUARANTEE G[<=100] !g && X[10](r -> F[<=100] g);");
  const auto r = build_game(spec);
  const auto& g = r.game;
  const TimerId t10{10, 0}, t101{101, 0}, t101b{101, 1};
  if (r.formulas[g.initial].g != intro_exp(spec.guarantee)) rep.fail("initial location is not phi0");
  const auto* bad = g.lookup(g.initial, {"g"}, {});
  if (!bad || bad->to != g.bottom) rep.fail("output g does not lead to false");
  const auto* out = g.lookup(g.initial, {}, std::vector{t10});
  if (!out) {
    rep.fail("no time-out branch for the 10-step timer");
  } else {
    const Formula not_g = Formula::lit("g", false);
    const Formula phi2 = cfold(Formula::conj(
        {not_g, Formula::bweak(t101, not_g, Formula::bottom()),
         Formula::disj({Formula::lit("r", false), Formula::lit("g"), Formula::eventually(t101b, Formula::lit("g"))})}));
    if (r.formulas[out->to].g != phi2) rep.fail("time-out successor is " + to_string(r.formulas[out->to].g));
    if (out->effect(t10).has_value()) rep.fail("10-step timer is not reset");
    if (out->effect(t101) != t101) rep.fail("101-step timer is not kept");
  }
  if (solve(g).verdict != Verdict::Realizable) rep.fail("not realizable");
  return rep.done(std::to_string(g.num_locations()) + " locations, structure matches");
}

// l0 -o-> l1, l0 -!o-> true, l1 <-> l2, l2 -> false when the 1000-step timer runs out.
CountdownTimerGame approximation_game() {
  const TimerId t{1000, 0};
  CountdownTimerGame g;
  g.timers = {t};
  g.outputs = {"o"};
  g.labels = {"true", "false", "l0", "l1", "l2"};
  g.unsafe = {1};
  g.initial = 2;
  g.delta.assign(5, {});
  const Effect id = Effect::identity(g.timers);
  g.delta[2] = {Branch{{{"o", true}}, {}, 3, id}, Branch{{{"o", false}}, {}, 0, id}};
  g.delta[3] = {Branch{{}, {}, 4, id}};
  g.delta[4] = {Branch{{}, {}, 3, id}, Branch{{}, {t}, 1, {}}};
  g.validate();
  return g;
}

Outcome approximation_example() {
  Report rep;
  const auto g = approximation_game();
  const auto o = attractor_symbolic(g, Approx::Over, 3);
  if (o.iterations != 7) rep.fail("over k=3 took " + std::to_string(o.iterations) + " iterations");
  // Sets are stored right after the decrement, so they range over [0, 999].
  if (o.sets[3].str() != "{1},[3,999]") rep.fail("l1 is " + o.sets[3].str());
  if (o.sets[4].str() != "{0},[2,999]") rep.fail("l2 is " + o.sets[4].str());
  if (o.winner != Player::System) rep.fail("over run not won by the system");
  const auto e = attractor_symbolic(g, Approx::Exact);
  if (e.iterations < 999 || e.iterations > 1001) rep.fail("exact took " + std::to_string(e.iterations));
  // every state the exact run puts in l1/l2 lies in the over-approximation
  for (std::uint32_t v = 0; v <= 1000; ++v)
    for (LocId l : {LocId{3}, LocId{4}})
      if (attractor_contains(g, e.sets, l, {v}) && !attractor_contains(g, o.sets, l, {v}))
        rep.fail("exact state outside over set");
  return rep.done("over k=3: 7 iterations, exact: " + std::to_string(e.iterations));
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937 rng(20240501);
  Report rep;
  int n = 0, bounded = 0, env = 0;
  while (n < 1000) {
    const bool only_bounded = n % 2 == 0;
    const Spec s = testing::random_spec(rng, 4, only_bounded);
    ++n;
    const auto r = build_game(s);
    const Player ex = explicit_winner(r.game);
    env += ex == Player::Env;
    const auto v = solve(r.game).verdict;
    if (v != verdict_of(ex)) rep.fail("symbolic " + std::string(to_string(v)) + " on " + write_spec(s));
    if (fully_bounded(s.guarantee)) {
      if (const auto want = testing::expand_oracle(s)) {
        ++bounded;
        if (*want != ex) rep.fail("expansion game disagrees on " + write_spec(s));
      }
    }
  }
  const double secs = seconds_since(start);
  if (secs > 300) rep.fail("took " + fixed(secs) + " s");
  if (env == 0 || env == n) rep.fail("degenerate corpus");
  return rep.done(std::to_string(n) + " specs (" + std::to_string(bounded) + " against the expansion game, " +
                  std::to_string(env) + " unrealizable) in " + fixed(secs) + " s");
}

using Val = std::vector<std::uint32_t>;
using Points = std::set<Val>;

Points points(const TimerSpace& sp, const SymbolicSet& s) {
  const auto v = denote(sp, s);
  return {v.begin(), v.end()};
}

// Membership read directly off the representation.
bool in_repr(const SymbolicSet& s, const Val& v, const std::function<bool(std::size_t, Interval, std::uint32_t)>& dim_ok) {
  for (const auto& r : s.regions()) {
    if (!r.order.satisfied_by(v)) continue;
    for (const auto& b : r.boxes) {
      bool ok = true;
      for (std::size_t i = 0; i < v.size() && ok; ++i) ok = dim_ok(i, b.dim[i], v[i]);
      if (ok) return true;
    }
  }
  return false;
}

Outcome domain_exactness() {
  std::mt19937 rng(77);
  Report rep;
  const int rounds = 5000;
  for (int round = 0; round < rounds; ++round) {
    const auto sp = testing::random_space(rng);
    const std::size_t n = sp.size();
    const auto a = testing::random_set(rng, sp), b = testing::random_set(rng, sp);
    const auto A = points(sp, a), B = points(sp, b), U = points(sp, SymbolicSet::full(sp));
    auto check = [&](const char* op, const SymbolicSet& got, const Points& want) {
      if (points(sp, got) != want) rep.fail(std::string(op) + " differs in round " + std::to_string(round));
    };

    Points w;
    for (const auto& v : U) {
      Val s = v;
      for (auto& x : s) x = x == 0 ? 0 : x - 1;
      if (A.contains(s)) w.insert(v);
    }
    check("inc", inc(sp, a), w);

    const auto T = testing::random_mask(rng, n);
    w.clear();
    for (const auto& v : A) {
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) ok = ok && (T[i] ? v[i] == 0 : v[i] >= 1 && v[i] < sp.d[i]);
      if (ok) w.insert(v);
    }
    check("eff_to", eff_to(sp, T, a), w);

    const auto R = testing::random_mask(rng, n);
    w.clear();
    for (const auto& v : A) {
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) ok = ok && (!R[i] || v[i] == sp.d[i]);
      if (ok) w.insert(v);
    }
    check("eff_reset", eff_reset(sp, R, a), w);

    std::vector<int> pre(n, -1);
    std::vector<bool> used(n, false);
    for (std::size_t t = 0; t < n; ++t) {
      if (rng() % 3 == 0) continue;
      std::vector<std::size_t> cand;
      for (std::size_t s = 0; s < n; ++s)
        if (!used[s] && sp.d[s] == sp.d[t]) cand.push_back(s);
      if (cand.empty()) continue;
      const auto s = cand[rng() % cand.size()];
      used[s] = true;
      pre[t] = static_cast<int>(s);
    }
    w.clear();
    for (const auto& v : U)
      for (const auto& x : A) {
        bool hit = true;
        for (std::size_t t = 0; t < n && hit; ++t) hit = pre[t] < 0 || v[t] == x[static_cast<std::size_t>(pre[t])];
        if (hit) {
          w.insert(v);
          break;
        }
      }
    check("remap", remap(sp, pre, a), w);

    w.clear();
    std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::inserter(w, w.end()));
    check("union", unite(a, b), w);
    w.clear();
    std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::inserter(w, w.end()));
    check("intersect", intersect(a, b), w);

    // Per-interval definitions with band [k, d-k].
    const auto k = static_cast<std::uint32_t>(1 + rng() % 3);
    auto band_hits = [&](std::size_t i, Interval iv) {
      const auto d = sp.d[i];
      if (2 * k > d) return false;
      const bool meets = std::max(iv.lo, k) <= std::min(iv.hi, d - k);
      const bool inside = iv.lo <= k && d - k <= iv.hi;
      return meets && !inside;
    };
    Points wo, wu;
    for (const auto& v : U) {
      if (in_repr(a, v, [&](std::size_t i, Interval iv, std::uint32_t x) {
            if (band_hits(i, iv)) return std::min(iv.lo, k) <= x && x <= std::max(iv.hi, sp.d[i] - k);
            return iv.contains(x);
          }))
        wo.insert(v);
      if (in_repr(a, v, [&](std::size_t i, Interval iv, std::uint32_t x) {
            if (band_hits(i, iv)) return iv.contains(x) && (x < k || x > sp.d[i] - k);
            return iv.contains(x);
          }))
        wu.insert(v);
    }
    check("over", over(sp, a, k), wo);
    check("under", under(sp, a, k), wu);
  }
  return rep.done(std::to_string(rounds) + " cases for each of inc, eff_to, remap, eff_reset, union, intersect, over, under");
}

// Runs cpre to the full fixpoint from the unsafe locations.
std::vector<SymbolicSet> full_fixpoint(const CountdownTimerGame& g) {
  auto sets = attractor_symbolic(g).sets;
  for (bool changed = true; changed;) {
    changed = false;
    const auto pre = cpre_env(g, sets);
    for (LocId l = 0; l < g.num_locations(); ++l)
      if (!covered(pre[l], sets[l])) {
        sets[l] = unite(sets[l], pre[l]);
        changed = true;
      }
  }
  return sets;
}

Outcome attractor_equality() {
  std::mt19937 rng(91);
  Report rep;
  const int games = 1000;
  for (int i = 0; i < games; ++i) {
    const auto g = testing::random_game(rng, 2, 4, 2);
    const auto ex = attractor_explicit(g);
    const auto sets = full_fixpoint(g);
    for (LocId l = 0; l < g.num_locations(); ++l)
      for (std::size_t c = 0; c < valuation_count(g); ++c)
        if (ex.member[l][c] != attractor_contains(g, sets, l, decode(g, c))) {
          rep.fail("game " + std::to_string(i) + " location " + std::to_string(l));
          l = g.num_locations() - 1;
          break;
        }
  }
  return rep.done(std::to_string(games) + " games, every location equal");
}

Outcome approximation_soundness() {
  std::mt19937 rng(91);  // the same corpus as the attractor comparison
  Report rep;
  const int games = 1000;
  int under_env = 0, over_sys = 0;
  for (int i = 0; i < games; ++i) {
    const auto g = testing::random_game(rng, 2, 4, 2);
    const Player exact = attractor_symbolic(g).winner;
    std::uint32_t max_d = 0;
    for (auto t : g.timers) max_d = std::max(max_d, t.duration);
    for (std::uint32_t k = 1; k <= max_d; ++k) {
      const auto u = attractor_symbolic(g, Approx::Under, k);
      const auto o = attractor_symbolic(g, Approx::Over, k);
      under_env += u.winner == Player::Env;
      over_sys += o.winner == Player::System;
      if (u.winner == Player::Env && exact != Player::Env) rep.fail("under ENV, exact SYSTEM in game " + std::to_string(i));
      if (o.winner == Player::System && exact != Player::System)
        rep.fail("over SYSTEM, exact ENV in game " + std::to_string(i));
    }
    const auto res = solve(g);
    if (res.k > 2 * max_d) rep.fail("solve stopped at k=" + std::to_string(res.k));
    if (res.verdict != verdict_of(exact)) rep.fail("solve verdict differs in game " + std::to_string(i));
  }
  return rep.done(std::to_string(games) + " games; " + std::to_string(under_env) + " under-ENV and " +
                  std::to_string(over_sys) + " over-SYSTEM runs, all confirmed");
}

Outcome pruning_soundness() {
  std::mt19937 rng(55);
  Report rep;
  const int specs = 1000;
  for (int i = 0; i < specs; ++i) {
    const Spec s = testing::random_spec(rng, 3);
    ConstructionConfig on, off;
    off.prune = false;
    const auto a = build_game(s, on), b = build_game(s, off);
    if (explicit_winner(a.game) != explicit_winner(b.game)) rep.fail("winners differ on " + write_spec(s));
  }
  return rep.done(std::to_string(specs) + " specs, winners agree");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"office and real-time benchmark verdicts", table_verdicts},
      {"bounded-response family verdicts, N = 2..20", phi_verdicts},
      {"first example game structure", example_one},
      {"approximation example sets and iteration counts", approximation_example},
      {"symbolic, explicit and expansion-game winners agree", oracle_equivalence},
      {"domain operations match brute force", domain_exactness},
      {"symbolic attractor equals explicit attractor", attractor_equality},
      {"approximation soundness and k bound", approximation_soundness},
      {"pruning preserves winners", pruning_soundness},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int num = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(num)) continue;
    const auto start = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.pass;
    std::cout << (out.pass ? "PASS " : "FAIL ") << num << ". " << criteria[i].first << ": " << out.detail << " ["
              << fixed(seconds_since(start)) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
