#pragma once
// Random generators shared by unit tests and the acceptance runner.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "tgs/formula.hpp"
#include "tgs/semantics.hpp"
#include "tgs/spec.hpp"

namespace tgs::testing {

struct FormulaGen {
  std::vector<std::string> props;
  int max_bound = 3;
  int max_depth = 3;
  bool allow_weak = true;

  Formula operator()(std::mt19937& rng, int depth) const {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto bound = [&] { return Num{static_cast<std::uint64_t>(pick(max_bound + 1))}; };
    if (depth <= 0 || pick(4) == 0) {
      const int r = pick(10);
      if (r == 0) return Formula::constant(pick(2) == 0);
      return Formula::lit(props[pick(static_cast<int>(props.size()))], pick(2) == 0);
    }
    switch (pick(allow_weak ? 7 : 6)) {
      case 0: return Formula::conj({(*this)(rng, depth - 1), (*this)(rng, depth - 1)});
      case 1: return Formula::disj({(*this)(rng, depth - 1), (*this)(rng, depth - 1)});
      case 2: return Formula::next(bound(), (*this)(rng, depth - 1));
      case 3: return Formula::eventually(bound(), (*this)(rng, depth - 1));
      case 4: return Formula::bweak(bound(), (*this)(rng, depth - 1), (*this)(rng, depth - 1));
      case 5: return bglobally(bound().value, (*this)(rng, depth - 1));
      default: return Formula::weak((*this)(rng, depth - 1), (*this)(rng, depth - 1));
    }
  }
  Formula operator()(std::mt19937& rng) const { return (*this)(rng, max_depth); }
};

inline Letter random_letter(std::mt19937& rng, const std::vector<std::string>& props) {
  Letter m;
  for (const auto& p : props)
    if (rng() & 1u) m.insert(p);
  return m;
}

inline Lasso random_lasso(std::mt19937& rng, const std::vector<std::string>& props, int max_total) {
  std::uniform_int_distribution<int> total(1, max_total);
  const int n = total(rng);
  const int loop = std::uniform_int_distribution<int>(1, n)(rng);
  Lasso w;
  for (int i = 0; i < n - loop; ++i) w.stem.push_back(random_letter(rng, props));
  for (int i = 0; i < loop; ++i) w.loop.push_back(random_letter(rng, props));
  return w;
}

// Random spec in the style of the oracle corpus: up to two inputs and outputs,
// bounds up to max_bound, formulas of depth up to 3, often under a top-level G.
inline Spec random_spec(std::mt19937& rng, int max_bound = 4, bool fully_bounded_only = false) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  Spec s;
  const int ni = 1 + pick(2), no = 1 + pick(2);
  for (int i = 0; i < ni; ++i) s.inputs.push_back("i" + std::to_string(i));
  for (int i = 0; i < no; ++i) s.outputs.push_back("o" + std::to_string(i));
  std::vector<std::string> props = s.inputs;
  props.insert(props.end(), s.outputs.begin(), s.outputs.end());
  FormulaGen gen{props, max_bound, 3, false};
  Formula body = gen(rng, 1 + pick(3));
  const int shape = pick(4);
  if (shape == 0 && !fully_bounded_only) {
    body = globally(body);
  } else if (shape == 1) {
    body = bglobally(static_cast<std::uint64_t>(pick(max_bound + 1)), body);
  } else if (shape == 2 && !fully_bounded_only) {
    body = globally(Formula::disj({Formula::lit(s.inputs[0], pick(2) == 0), gen(rng, 2)}));
  }
  s.guarantee = cfold(body);
  return s;
}

}  // namespace tgs::testing

#include "tgs/game.hpp"

namespace tgs::testing {

// Random countdown-timer game: true/false plus up to `extra` locations, one
// input i and one output o, timers with durations up to max_d.
inline CountdownTimerGame random_game(std::mt19937& rng, int max_timers = 2, int max_d = 4, int extra = 2) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  CountdownTimerGame g;
  g.inputs = {"i"};
  g.outputs = {"o"};
  const int nt = 1 + pick(max_timers);
  std::set<TimerId> ts;
  while (static_cast<int>(ts.size()) < nt) {
    const auto d = static_cast<std::uint32_t>(1 + pick(max_d));
    ts.insert(TimerId{d, static_cast<std::uint32_t>(pick(static_cast<int>(d) + 1) % 2)});
  }
  g.timers.assign(ts.begin(), ts.end());
  const int nl = 1 + pick(extra);
  g.labels = {"true", "false"};
  for (int l = 0; l < nl; ++l) g.labels.push_back("l" + std::to_string(l));
  g.top = 0;
  g.bottom = 1;
  g.unsafe = {1};
  g.initial = 2;
  g.delta.assign(g.labels.size(), {});
  const std::vector<Cube> splits[4] = {
      {{}},
      {{{"i", false}}, {{"i", true}}},
      {{{"o", false}}, {{"o", true}}},
      {{{"i", false}, {"o", false}}, {{"i", false}, {"o", true}}, {{"i", true}, {"o", false}}, {{"i", true}, {"o", true}}}};
  for (std::size_t l = 2; l < g.labels.size(); ++l) {
    const auto& cubes = splits[pick(4)];
    for (std::size_t bits = 0; bits < (std::size_t{1} << g.timers.size()); ++bits) {
      if (bits != 0 && pick(5) == 0) continue;  // left to the implicit default
      std::vector<TimerId> T;
      for (std::size_t k = 0; k < g.timers.size(); ++k)
        if (bits >> k & 1u) T.push_back(g.timers[k]);
      for (const auto& c : cubes) {
        Branch b;
        b.cond = c;
        b.timeouts = T;
        const int r = pick(10);
        b.to = r < 2 ? 1 : r < 3 ? 0 : static_cast<LocId>(2 + pick(nl));
        std::set<TimerId> used;
        for (auto t : g.timers) {
          if (pick(3) == 0) continue;  // RESET
          std::vector<TimerId> same;
          for (auto u : g.timers)
            if (u.duration == t.duration && !used.contains(u)) same.push_back(u);
          if (same.empty()) continue;
          const TimerId src = same[pick(static_cast<int>(same.size()))];
          used.insert(src);
          b.effect.set(t, src);
        }
        g.delta[l].push_back(std::move(b));
      }
    }
  }
  return g;
}

}  // namespace tgs::testing

#include "tgs/symbolic.hpp"

namespace tgs::testing {

inline SymbolicSet random_set(std::mt19937& rng, const TimerSpace& sp) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  const std::size_t n = sp.size();
  std::vector<Region> rs;
  const int nr = pick(3) + (pick(6) != 0);
  for (int r = 0; r < nr; ++r) {
    Order o(n);
    if (n > 1)
      for (int f = pick(3); f > 0; --f) {
        const auto i = static_cast<std::size_t>(pick(static_cast<int>(n)));
        const auto j = static_cast<std::size_t>(pick(static_cast<int>(n)));
        if (i != j) o.relate(i, j, pick(2) ? Rel::Lt : Rel::Le);
      }
    Region reg{o, {}};
    for (int b = 1 + pick(3); b > 0; --b) {
      Box x;
      for (auto d : sp.d) {
        const auto a = static_cast<std::uint32_t>(pick(static_cast<int>(d) + 1));
        const auto c = static_cast<std::uint32_t>(pick(static_cast<int>(d) + 1));
        x.dim.push_back({std::min(a, c), std::max(a, c)});
      }
      reg.boxes.push_back(std::move(x));
    }
    rs.push_back(std::move(reg));
  }
  return SymbolicSet::normalized(std::move(rs));
}

inline TimerSpace random_space(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  TimerSpace sp;
  for (int k = 1 + pick(3); k > 0; --k) sp.d.push_back(static_cast<std::uint32_t>(1 + pick(5)));
  return sp;
}

inline std::vector<bool> random_mask(std::mt19937& rng, std::size_t n) {
  std::vector<bool> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = rng() & 1u;
  return m;
}

}  // namespace tgs::testing
