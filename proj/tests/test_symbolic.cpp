#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "tgs/construct.hpp"
#include "tgs/solver.hpp"
#include "tgs/symbolic.hpp"

using namespace tgs;
using testing::random_mask;
using testing::random_set;
using testing::random_space;

namespace {

using Val = std::vector<std::uint32_t>;
using Points = std::set<Val>;

Points pts(const TimerSpace& sp, const SymbolicSet& s) {
  const auto v = denote(sp, s);
  return {v.begin(), v.end()};
}

Points universe(const TimerSpace& sp) { return pts(sp, SymbolicSet::full(sp)); }

Box box(std::initializer_list<Interval> iv) { return Box{std::vector<Interval>(iv)}; }

// The game of the approximation example: l0 -o-> l1, l0 -!o-> true,
// l1 <-> l2, l2 -> false when its 1000-step timer runs out.
CountdownTimerGame approximation_example() {
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

}  // namespace

TEST_CASE("denote") {
  const TimerSpace sp{{2, 3}};
  CHECK(denote(sp, SymbolicSet{}).empty());
  CHECK(denote(sp, SymbolicSet::full(sp)).size() == 12);
  Order lt(2);
  lt.relate(0, 1, Rel::Lt);
  const auto s = SymbolicSet::of_box(sp, box({{0, 2}, {0, 3}}), lt);
  Points want;
  for (std::uint32_t a = 0; a <= 2; ++a)
    for (std::uint32_t b = 0; b <= 3; ++b)
      if (a < b) want.insert({a, b});
  CHECK(pts(sp, s) == want);
}

TEST_CASE("inc") {
  const TimerSpace sp{{3}};
  // a zero after the step may come from 0 or 1 before it
  CHECK(inc(sp, SymbolicSet::of_box(sp, box({{0, 0}}))).str() == "[0,1]");
  CHECK(inc(sp, SymbolicSet::of_box(sp, box({{2, 3}}))).str() == "{3}");
  CHECK(inc(sp, SymbolicSet::of_box(sp, box({{3, 3}}))).empty());
}

TEST_CASE("eff_to") {
  const TimerSpace sp{{4, 6}};
  CHECK(eff_to(sp, {false, false}, SymbolicSet::full(sp)).str() == "[1,3]x[1,5]");
  CHECK(eff_to(sp, {true, false}, SymbolicSet::of_box(sp, box({{1, 4}, {0, 6}}))).empty());
  const auto r = eff_to(sp, {true, false}, SymbolicSet::full(sp));
  REQUIRE(r.regions().size() == 1);
  CHECK(r.regions()[0].order.at(0, 1) == Rel::Lt);
  CHECK(r.str() == "(0<1) {0}x[1,5]");
}

TEST_CASE("remap") {
  const TimerSpace sp{{5, 5}};
  const auto s = SymbolicSet::of_box(sp, box({{1, 2}, {4, 4}}));
  CHECK(remap(sp, {0, 1}, s) == s);
  // the value of timer 0 moves into timer 1, timer 0 is free
  CHECK(remap(sp, {-1, 0}, s).str() == "[0,5]x[1,2]");
  CHECK(remap(sp, {-1, -1}, s) == SymbolicSet::full(sp));
}

TEST_CASE("remap drops a timer between two others") {
  // v1 < v0 < v2: forgetting timer 0 must keep v2 >= v1 + 2
  const TimerSpace sp{{4, 3, 4}};
  Order o(3);
  o.relate(1, 0, Rel::Lt);
  o.relate(0, 2, Rel::Lt);
  const auto s = SymbolicSet::of_box(sp, box({{1, 2}, {0, 1}, {2, 3}}), o);
  const auto r = remap(sp, {-1, 1, 2}, s);
  CHECK_FALSE(r.contains(std::vector<std::uint32_t>{0, 1, 2}));
  CHECK(r.contains(std::vector<std::uint32_t>{0, 1, 3}));
  CHECK(r.contains(std::vector<std::uint32_t>{4, 0, 2}));
}

TEST_CASE("eff_reset") {
  const TimerSpace sp{{5, 7}};
  CHECK(eff_reset(sp, {true, false}, SymbolicSet::full(sp)).str() == "{5}x[0,7]");
  Order o(2);
  o.relate(1, 0, Rel::Lt);  // u < t
  const auto r = eff_reset(sp, {true, false}, SymbolicSet::of_box(sp, box({{0, 5}, {0, 7}}), o));
  CHECK(r.str() == "(1<0) {5}x[0,4]");
  CHECK(eff_reset(sp, {true, false}, SymbolicSet::of_box(sp, box({{0, 4}, {0, 7}}))).empty());
}

TEST_CASE("union and intersection") {
  const TimerSpace sp{{5, 5}};
  const auto a = SymbolicSet::of_box(sp, box({{0, 3}, {1, 2}}));
  const auto b = SymbolicSet::of_box(sp, box({{2, 5}, {0, 1}}));
  CHECK(unite(a, SymbolicSet{}) == a);
  CHECK(intersect(a, b).str() == "[2,3]x{1}");
  // adjacent boxes coalesce
  CHECK(unite(SymbolicSet::of_box(sp, box({{0, 1}, {0, 5}})), SymbolicSet::of_box(sp, box({{2, 5}, {0, 5}}))) ==
        SymbolicSet::full(sp));
}

TEST_CASE("over and under") {
  const TimerSpace sp{{1000}};
  const auto mid = SymbolicSet::of_box(sp, box({{5, 5}}));
  CHECK(over(sp, mid, 3).str() == "[3,997]");
  CHECK(under(sp, mid, 3).empty());
  const auto low = SymbolicSet::of_box(sp, box({{0, 1}}));
  CHECK(over(sp, low, 3) == low);
  CHECK(under(sp, low, 3) == low);
  CHECK(over(sp, mid, 501) == mid);
  CHECK(under(sp, mid, 501) == mid);
  CHECK(under(sp, SymbolicSet::of_box(sp, box({{1, 10}})), 3).str() == "[1,2]");
}

TEST_CASE("property: domain operations are exact") {
  std::mt19937 rng(41);
  for (int round = 0; round < 1500; ++round) {
    const auto sp = random_space(rng);
    const std::size_t n = sp.size();
    const auto a = random_set(rng, sp);
    const auto b = random_set(rng, sp);
    const auto A = pts(sp, a), B = pts(sp, b), U = universe(sp);

    REQUIRE(SymbolicSet::normalized(a.regions()) == a);

    Points want;
    for (const auto& v : U) {
      Val s = v;
      for (auto& x : s) x = x == 0 ? 0 : x - 1;
      if (A.contains(s)) want.insert(v);
    }
    REQUIRE(pts(sp, inc(sp, a)) == want);

    const auto T = random_mask(rng, n);
    want.clear();
    for (const auto& v : A) {
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) ok = ok && (T[i] ? v[i] == 0 : v[i] >= 1 && v[i] <= sp.d[i] - 1);
      if (ok) want.insert(v);
    }
    REQUIRE(pts(sp, eff_to(sp, T, a)) == want);

    const auto R = random_mask(rng, n);
    want.clear();
    for (const auto& v : A) {
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) ok = ok && (!R[i] || v[i] == sp.d[i]);
      if (ok) want.insert(v);
    }
    REQUIRE(pts(sp, eff_reset(sp, R, a)) == want);

    // random injective partial renaming between equal durations
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
    want.clear();
    for (const auto& v : U) {
      const bool hit = std::any_of(A.begin(), A.end(), [&](const Val& w) {
        for (std::size_t t = 0; t < n; ++t)
          if (pre[t] >= 0 && v[t] != w[static_cast<std::size_t>(pre[t])]) return false;
        return true;
      });
      if (hit) want.insert(v);
    }
    REQUIRE(pts(sp, remap(sp, pre, a)) == want);

    want.clear();
    std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::inserter(want, want.end()));
    REQUIRE(pts(sp, unite(a, b)) == want);
    want.clear();
    std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::inserter(want, want.end()));
    REQUIRE(pts(sp, intersect(a, b)) == want);

    if (covered(a, b)) REQUIRE(std::includes(B.begin(), B.end(), A.begin(), A.end()));
    REQUIRE(covered(a, unite(a, b)));
    REQUIRE(covered(a, a));

    const auto k = static_cast<std::uint32_t>(1 + rng() % 3);
    const auto lo = pts(sp, under(sp, a, k)), hi = pts(sp, over(sp, a, k));
    REQUIRE(std::includes(A.begin(), A.end(), lo.begin(), lo.end()));
    REQUIRE(std::includes(hi.begin(), hi.end(), A.begin(), A.end()));
  }
}

TEST_CASE("cpre_env") {
  SUBCASE("empty target") {
    const auto g = approximation_example();
    const auto out = cpre_env(g, std::vector<SymbolicSet>(g.num_locations()));
    for (LocId l = 0; l < g.num_locations(); ++l) CHECK(out[l].empty());
  }
  SUBCASE("self-loop with a timed-out edge to false") {
    const TimerId t{4, 0};
    CountdownTimerGame g;
    g.timers = {t};
    g.labels = {"true", "false", "l"};
    g.unsafe = {1};
    g.initial = 2;
    g.delta.assign(3, {});
    g.delta[2] = {Branch{{}, {}, 2, Effect::identity(g.timers)}, Branch{{}, {t}, 1, {}}};
    const auto sp = timer_space(g);
    std::vector<SymbolicSet> U(3);
    U[1] = SymbolicSet::full(sp, 1);
    const auto out = cpre_env(g, U);
    CHECK(out[2].str() == "{0}");
    // the same states, read through the semantics: 0 and 1 time out in one step
    for (std::uint32_t v = 0; v <= 4; ++v)
      CHECK(attractor_contains(g, out, 2, {v}) == (trans(g, {2, {v}}, {}, {}).loc == 1));
  }
  SUBCASE("approximation example, first application") {
    const auto g = approximation_example();
    std::vector<SymbolicSet> U(g.num_locations());
    U[1] = SymbolicSet::full(timer_space(g), 1);
    const auto out = cpre_env(g, U, Approx::Over, 3);
    CHECK(out[4].str() == "{0}");
    CHECK(out[3].empty());
  }
}

TEST_CASE("attractor on the approximation example") {
  const auto g = approximation_example();
  const auto sp = timer_space(g);
  std::vector<SymbolicSet> W(g.num_locations());
  W[1] = SymbolicSet::full(sp, 1);
  std::vector<std::pair<std::string, std::string>> rows;
  for (int it = 0; it < 9; ++it) {
    rows.emplace_back(W[3].str(), W[4].str());
    const auto pre = cpre_env(g, W, Approx::Over, 3);
    for (LocId l = 2; l < g.num_locations(); ++l) W[l] = unite(W[l], pre[l]);
  }
  CHECK(rows[1] == std::pair<std::string, std::string>{"{}", "{0}"});
  CHECK(rows[2] == std::pair<std::string, std::string>{"{1}", "{0}"});
  CHECK(rows[3] == std::pair<std::string, std::string>{"{1}", "{0},{2}"});
  CHECK(rows[4] == std::pair<std::string, std::string>{"{1},[3,997]", "{0},{2}"});
  CHECK(rows[7] == std::pair<std::string, std::string>{"{1},[3,999]", "{0},[2,999]"});
  CHECK(rows[8] == rows[7]);
  CHECK(rows[6] != rows[7]);

  const auto o = attractor_symbolic(g, Approx::Over, 3);
  CHECK(o.iterations == 7);
  CHECK(o.winner == Player::System);
  const auto e = attractor_symbolic(g, Approx::Exact);
  CHECK(e.iterations >= 999);
  CHECK(e.iterations <= 1001);
  CHECK(e.sets[3].box_count() == 500);  // odd values only
  CHECK(solve(g).verdict == Verdict::Realizable);
}

TEST_CASE("solve") {
  const auto ex1 = build_game(parse_spec("INPUTS r; OUTPUTS g; GUARANTEE G[<=100] !g && X[10](r -> F[<=100] g);"));
  CHECK(solve(ex1.game).verdict == Verdict::Realizable);
  const auto bot = build_game(parse_spec("INPUTS; OUTPUTS; GUARANTEE false;"));
  const auto r = solve(bot.game);
  CHECK(r.verdict == Verdict::Unrealizable);
  CHECK(r.k == 1);
  CountdownTimerGame none;
  none.inputs = {"i"};
  none.labels = {"true", "false", "a"};
  none.unsafe = {1};
  none.initial = 2;
  none.delta = {{}, {}, {Branch{{}, {}, 2, {}}}};
  const auto run = attractor_symbolic(none);
  CHECK(run.winner == Player::System);
  CHECK(run.iterations <= 2);
}

TEST_CASE("property: symbolic attractor equals the explicit one") {
  std::mt19937 rng(43);
  int env = 0;
  for (int round = 0; round < 300; ++round) {
    const auto g = testing::random_game(rng, 2, 4, 2);
    const auto ex = attractor_explicit(g);
    const auto sym = attractor_symbolic(g);
    // run to the full fixpoint, not only until the initial state is decided
    auto sets = sym.sets;
    for (bool changed = true; changed;) {
      changed = false;
      const auto pre = cpre_env(g, sets);
      for (LocId l = 0; l < g.num_locations(); ++l)
        if (!covered(pre[l], sets[l])) {
          sets[l] = unite(sets[l], pre[l]);
          changed = true;
        }
    }
    for (LocId l = 0; l < g.num_locations(); ++l)
      for (std::size_t c = 0; c < valuation_count(g); ++c)
        REQUIRE(ex.member[l][c] == attractor_contains(g, sets, l, decode(g, c)));
    REQUIRE(sym.winner == ex.winner);
    env += ex.winner == Player::Env;
    const Verdict want = ex.winner == Player::Env ? Verdict::Unrealizable : Verdict::Realizable;
    REQUIRE(solve(g).verdict == want);
  }
  CHECK(env > 30);
  CHECK(env < 270);
}

TEST_CASE("property: under, exact and over iterates are nested and growing") {
  std::mt19937 rng(47);
  for (int round = 0; round < 150; ++round) {
    const auto g = testing::random_game(rng, 2, 6, 2);
    const auto sp = timer_space(g);
    const auto k = static_cast<std::uint32_t>(1 + rng() % 2);
    std::vector<SymbolicSet> lo(g.num_locations()), ex(g.num_locations()), hi(g.num_locations());
    for (auto u : g.unsafe) lo[u] = ex[u] = hi[u] = SymbolicSet::full(sp, 1);
    for (int it = 0; it < 40; ++it) {
      const auto plo = cpre_env(g, lo, Approx::Under, k);
      const auto pex = cpre_env(g, ex, Approx::Exact, k);
      const auto phi = cpre_env(g, hi, Approx::Over, k);
      for (LocId l = 0; l < g.num_locations(); ++l) {
        const auto nlo = unite(lo[l], plo[l]), nex = unite(ex[l], pex[l]), nhi = unite(hi[l], phi[l]);
        const auto a = pts(sp, nlo), b = pts(sp, nex), c = pts(sp, nhi);
        REQUIRE(std::includes(b.begin(), b.end(), a.begin(), a.end()));
        REQUIRE(std::includes(c.begin(), c.end(), b.begin(), b.end()));
        const auto pb = pts(sp, ex[l]);
        REQUIRE(std::includes(b.begin(), b.end(), pb.begin(), pb.end()));
        lo[l] = nlo;
        ex[l] = nex;
        hi[l] = nhi;
      }
    }
  }
}
