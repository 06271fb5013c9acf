#include "tgs/construct.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace tgs {

// ---- expansion rule ---------------------------------------------------------

ExpandRule ExpandRule::parse(const std::string& text) {
  ExpandRule r;
  if (text == "log") return r;
  if (text == "none") {
    r.mode = Mode::None;
    return r;
  }
  if (text == "all") {
    r.mode = Mode::All;
    return r;
  }
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument("expand threshold must be log, none, all or a number: " + text);
  r.mode = Mode::UpTo;
  r.upto = n;
  return r;
}

std::string ExpandRule::str() const {
  switch (mode) {
    case Mode::None: return "none";
    case Mode::All: return "all";
    case Mode::UpTo: return std::to_string(upto);
    case Mode::Log: break;
  }
  std::string s = "log";
  if (!explicit_durations.empty()) {
    s += " (explicit durations:";
    for (auto d : explicit_durations) s += " " + std::to_string(d);
    s += ")";
  }
  return s;
}

bool hybrid_decide(const ExpandRule& rule, std::uint64_t bound, std::uint32_t duration) {
  if (duration <= 1) return true;  // plain X, F[<=0], W[<=0]
  switch (rule.mode) {
    case ExpandRule::Mode::All: return true;
    case ExpandRule::Mode::None: return false;
    case ExpandRule::Mode::UpTo: return bound <= rule.upto;
    case ExpandRule::Mode::Log: return rule.explicit_durations.contains(duration);
  }
  return false;
}

namespace {

// Largest number of simultaneously running timers the log rule tolerates.
std::uint32_t log_cap(std::uint32_t d) { return std::max<std::uint32_t>(1, std::bit_width(d) - 1); }

struct LogRestart {
  std::uint32_t duration;
};

}  // namespace

// ---- timer order --------------------------------------------------------------

void TimerOrder::add(TimerId a, TimerId b) {
  if (!facts_.insert({a, b}).second) return;
  // transitive closure, small sets
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [x, y] : facts_)
      for (auto it = facts_.lower_bound({y, TimerId{0, 0}}); it != facts_.end() && it->first == y; ++it)
        if (!facts_.contains({x, it->second})) {
          facts_.insert({x, it->second});
          grew = true;
          break;
        }
  }
}

TimerOrder TimerOrder::rename(const std::map<TimerId, TimerId>& old_to_new) const {
  TimerOrder r;
  for (const auto& [a, b] : facts_) {
    auto ia = old_to_new.find(a), ib = old_to_new.find(b);
    if (ia != old_to_new.end() && ib != old_to_new.end()) r.facts_.insert({ia->second, ib->second});
  }
  return r;
}

bool TimerOrder::may_time_out(TimerId t, const std::set<TimerId>& present) const {
  for (const auto& [a, b] : facts_)
    if (b == t && present.contains(a)) return false;
  return true;
}

std::string TimerOrder::str() const {
  std::string s;
  for (const auto& [a, b] : facts_) {
    if (!s.empty()) s += ' ';
    s += to_string(a) + "<" + to_string(b);
  }
  return s;
}

// ---- closure -------------------------------------------------------------------

std::set<Formula> closure(const Formula& phi) {
  std::set<Formula> out;
  auto num = [](const Formula& f) { return static_cast<std::uint32_t>(std::get<Num>(f.bound()).value); };
  std::function<void(const Formula&)> go = [&](const Formula& f) {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False:
        out.insert(f);
        return;
      case Kind::Lit:
        out.insert(f);
        out.insert(Formula::top());
        out.insert(Formula::bottom());
        return;
      case Kind::And:
      case Kind::Or:
        for (const auto& k : f.children()) go(k);
        return;
      case Kind::Next: {
        go(f.sub());
        const auto n = num(f);
        for (std::uint32_t i = 0; i <= n; ++i) out.insert(Formula::next(TimerId{n, i}, f.sub()));
        return;
      }
      case Kind::Eventually: {
        go(f.sub());
        const auto d = num(f) + 1;
        for (std::uint32_t i = 0; i <= d; ++i) out.insert(Formula::eventually(TimerId{d, i}, f.sub()));
        return;
      }
      case Kind::BWeak: {
        go(f.lhs());
        go(f.rhs());
        const auto d = num(f) + 1;
        for (std::uint32_t i = 0; i <= d; ++i) out.insert(Formula::bweak(TimerId{d, i}, f.lhs(), f.rhs()));
        return;
      }
      case Kind::Weak:
        go(f.lhs());
        go(f.rhs());
        out.insert(f);
        return;
    }
  };
  go(phi);
  return out;
}

// ---- tree ----------------------------------------------------------------------

namespace {

// polarity bits per proposition on the Boolean top level: 1 positive, 2 negative
std::map<std::string, int> polarities(const Formula& f) {
  std::map<std::string, int> m;
  for (const auto& [p, pos] : top_literals(f)) m[p] |= pos ? 1 : 2;
  return m;
}

struct TreeBuilder {
  const std::vector<std::string>& inputs;
  bool prune;
  std::vector<TreeLeaf>& out;

  bool is_input(const std::string& p) const { return std::binary_search(inputs.begin(), inputs.end(), p); }

  void emit(Cube cube, Formula g, std::optional<Formula> a) {
    std::sort(cube.begin(), cube.end());
    out.push_back({std::move(cube), std::move(g), std::move(a)});
  }

  static Cube with(Cube c, const std::string& p, bool v) {
    c.emplace_back(p, v);
    return c;
  }

  static std::optional<Formula> sub(const std::optional<Formula>& a, const std::string& p, bool v) {
    if (!a) return a;
    return substitute_top(*a, p, v);
  }

  void grow(const Formula& g, const std::optional<Formula>& a, const Cube& cube) {
    if (a && a->is_false()) return emit(cube, Formula::top(), std::nullopt);
    if (g.is_const()) return emit(cube, g, a);
    const auto pg = polarities(g);
    const auto pa = a ? polarities(*a) : std::map<std::string, int>{};

    if (prune) {
      // (1) an output literal directly under a top-level disjunction decides the game
      auto lit_children = [&](Kind junction) {
        std::vector<Formula> lits;
        if (g.kind() == Kind::Lit) lits.push_back(g);
        if (g.kind() == junction)
          for (const auto& k : g.children())
            if (k.kind() == Kind::Lit) lits.push_back(k);
        return lits;
      };
      for (const auto& c : lit_children(Kind::Or))
        if (!is_input(c.name())) {
          emit(with(cube, c.name(), c.positive()), Formula::top(), std::nullopt);
          emit(with(cube, c.name(), !c.positive()), Formula::bottom(), std::nullopt);
          return;
        }
      // (2) an input conjunct the environment can falsify
      for (const auto& u : lit_children(Kind::And))
        if (is_input(u.name()) && !pa.contains(u.name())) return emit(cube, Formula::bottom(), a);
      // (3) single-polarity output: the system takes the helpful value
      for (const auto& [p, pol] : pg)
        if (!is_input(p) && pol != 3 && !pa.contains(p)) {
          const bool v = pol == 1;
          emit(with(cube, p, !v), Formula::bottom(), std::nullopt);
          return grow(substitute_top(g, p, v), a, with(cube, p, v));
        }
      // (4) single-polarity input: the environment takes the adverse value
      for (const auto& [p, pol] : pg)
        if (is_input(p) && pol != 3 && !pa.contains(p)) return grow(substitute_top(g, p, pol != 1), a, cube);
      // propositions only visible in the assumption
      for (const auto& [p, pol] : pa) {
        if (pol == 3 || pg.contains(p)) continue;
        const bool v = pol == 1;
        if (is_input(p)) return grow(g, sub(a, p, v), cube);  // env keeps the assumption alive
        emit(with(cube, p, v), Formula::bottom(), std::nullopt);
        return grow(g, sub(a, p, !v), with(cube, p, !v));  // system breaks it
      }
    }

    // (5) environment branching, then (6) system branching
    for (bool want_input : {true, false}) {
      std::optional<std::string> pick;
      for (const auto& m : {pg, pa})
        for (const auto& [p, pol] : m)
          if (is_input(p) == want_input && (!pick || p < *pick)) pick = p;
      if (!pick) continue;
      for (bool v : {false, true}) grow(substitute_top(g, *pick, v), sub(a, *pick, v), with(cube, *pick, v));
      return;
    }
    emit(cube, g, a);
  }
};

}  // namespace

std::vector<TreeLeaf> tree_leaves(const Formula& g, const std::optional<Formula>& a,
                                  const std::vector<std::string>& inputs, bool prune) {
  std::vector<TreeLeaf> out;
  TreeBuilder{inputs, prune, out}.grow(cfold_top(g), a ? std::optional(cfold_top(*a)) : std::nullopt, {});
  return out;
}

Formula tree(const Formula& phi, const Letter& i, const Letter& o, const std::vector<std::string>& inputs,
             bool prune) {
  Letter m = i;
  m.insert(o.begin(), o.end());
  for (auto& leaf : tree_leaves(phi, std::nullopt, inputs, prune))
    if (satisfies(leaf.cube, m)) return leaf.g;
  throw std::logic_error("tree leaves do not cover the assignment");
}

// ---- to / squeeze ------------------------------------------------------------------

namespace {

Formula map_bounds(const Formula& f, const std::function<std::optional<Formula>(const Formula&)>& hook) {
  if (auto r = hook(f)) return *r;
  if (f.children().empty()) return f;
  std::vector<Formula> kids;
  for (const auto& k : f.children()) kids.push_back(map_bounds(k, hook));
  switch (f.kind()) {
    case Kind::And: return Formula::conj(std::move(kids));
    case Kind::Or: return Formula::disj(std::move(kids));
    case Kind::Next: return Formula::next(f.bound(), kids[0]);
    case Kind::Eventually: return Formula::eventually(f.bound(), kids[0]);
    case Kind::BWeak: return Formula::bweak(f.bound(), kids[0], kids[1]);
    case Kind::Weak: return Formula::weak(kids[0], kids[1]);
    default: return f;
  }
}

const TimerId* timer_of(const Formula& f) {
  if (f.kind() != Kind::Next && f.kind() != Kind::Eventually && f.kind() != Kind::BWeak) return nullptr;
  return std::get_if<TimerId>(&f.bound());
}

}  // namespace

Formula timeout_rewrite(const Formula& phi, const std::set<TimerId>& T) {
  if (T.empty()) return phi;
  std::function<std::optional<Formula>(const Formula&)> hook = [&](const Formula& f) -> std::optional<Formula> {
    if (!f.has_timer_bound()) return f;
    const TimerId* t = timer_of(f);
    if (!t || !T.contains(*t)) return std::nullopt;
    switch (f.kind()) {
      case Kind::Eventually: return Formula::bottom();
      case Kind::BWeak: return Formula::top();
      default: return map_bounds(f.sub(), hook);
    }
  };
  return cfold(map_bounds(phi, hook));
}

Formula to(std::span<const TimerId> T, const Formula& phi) {
  const auto present = timers_of(phi);
  for (auto t : T)
    if (t.index != 0 || (t.duration > 1 && !present.contains(t))) return Formula::top();
  return timeout_rewrite(phi, std::set<TimerId>(T.begin(), T.end()));
}

Squeezed squeeze_map(const std::set<TimerId>& present) {
  Squeezed s;
  std::uint32_t dur = 0, next = 0;
  for (auto t : present) {  // sorted by (duration, index)
    if (t.duration != dur) {
      dur = t.duration;
      next = 0;
    }
    const TimerId n{dur, next++};
    s.renaming[t] = n;
    s.effect.set(n, t);
  }
  return s;
}

Formula rename_timers(const Formula& phi, const std::map<TimerId, TimerId>& renaming) {
  bool identity = true;
  for (const auto& [a, b] : renaming) identity = identity && a == b;
  if (identity) return phi;
  std::function<std::optional<Formula>(const Formula&)> hook = [&](const Formula& f) -> std::optional<Formula> {
    if (!f.has_timer_bound()) return f;
    const TimerId* t = timer_of(f);
    if (!t) return std::nullopt;
    auto it = renaming.find(*t);
    const Bound b = it == renaming.end() ? Bound{*t} : Bound{it->second};
    switch (f.kind()) {
      case Kind::Next: return Formula::next(b, map_bounds(f.sub(), hook));
      case Kind::Eventually: return Formula::eventually(b, map_bounds(f.sub(), hook));
      default: return Formula::bweak(b, map_bounds(f.lhs(), hook), map_bounds(f.rhs(), hook));
    }
  };
  return cfold(map_bounds(phi, hook));
}

std::pair<Effect, Formula> squeeze(const Formula& phi) {
  auto s = squeeze_map(timers_of(phi));
  return {s.effect, rename_timers(phi, s.renaming)};
}

// ---- introExp --------------------------------------------------------------------

namespace {

struct Intro {
  const ExpandRule& rule;
  std::map<std::uint32_t, std::uint32_t> next_index;  // I(d)
  std::set<TimerId> introduced;
  bool overflow = false;
  std::optional<std::uint32_t> log_violation;

  Intro(const ExpandRule& r, const std::set<TimerId>& present) : rule(r) {
    for (auto t : present) next_index[t.duration] = std::max(next_index[t.duration], t.index + 1);
  }

  TimerId fresh(std::uint32_t d) {
    const TimerId t{d, next_index[d]};
    if (t.index > d) overflow = true;
    if (rule.mode == ExpandRule::Mode::Log && t.index + 1 > log_cap(d) && !log_violation) log_violation = d;
    introduced.insert(t);
    return t;
  }

  Formula operator()(const Formula& f) {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False:
      case Kind::Lit:
        return f;
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> kids;
        for (const auto& k : f.children()) kids.push_back((*this)(k));
        return f.kind() == Kind::And ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
      }
      case Kind::Next: {
        if (std::holds_alternative<TimerId>(f.bound())) return f;
        const auto n = std::get<Num>(f.bound()).value;
        if (n == 0) return (*this)(f.sub());
        const auto d = static_cast<std::uint32_t>(n);
        if (hybrid_decide(rule, n, d)) return Formula::next(Num{n - 1}, f.sub());
        return Formula::next(fresh(d), f.sub());
      }
      case Kind::Eventually: {
        if (std::holds_alternative<TimerId>(f.bound())) return Formula::disj({(*this)(f.sub()), f});
        const auto n = std::get<Num>(f.bound()).value;
        if (n == 0) return (*this)(f.sub());
        const auto d = static_cast<std::uint32_t>(n + 1);
        if (hybrid_decide(rule, n, d)) return Formula::disj({(*this)(f.sub()), Formula::eventually(Num{n - 1}, f.sub())});
        return Formula::disj({(*this)(f.sub()), Formula::eventually(fresh(d), f.sub())});
      }
      case Kind::BWeak: {
        if (std::holds_alternative<TimerId>(f.bound()))
          return Formula::disj({(*this)(f.rhs()), Formula::conj({(*this)(f.lhs()), f})});
        const auto n = std::get<Num>(f.bound()).value;
        if (n == 0) return Formula::disj({(*this)(f.rhs()), (*this)(f.lhs())});
        const auto d = static_cast<std::uint32_t>(n + 1);
        const Bound b = hybrid_decide(rule, n, d) ? Bound{Num{n - 1}} : Bound{fresh(d)};
        return Formula::disj({(*this)(f.rhs()), Formula::conj({(*this)(f.lhs()), Formula::bweak(b, f.lhs(), f.rhs())})});
      }
      case Kind::Weak:
        return Formula::disj({(*this)(f.rhs()), Formula::conj({(*this)(f.lhs()), f})});
    }
    return f;
  }
};

}  // namespace

Formula intro_exp(const Formula& phi, const ExpandRule& rule) {
  Intro in(rule, timers_of(phi));
  Formula r = in(phi);
  if (in.overflow) return Formula::top();
  return cfold(r);
}

// ---- build_game ----------------------------------------------------------------------

namespace {

struct Loc {
  Formula g;
  std::optional<Formula> a;
  TimerOrder order;
};

enum class Outcome { Top, Bottom, Loc };

struct Succ {
  Outcome kind = Outcome::Top;
  Loc loc;
  Effect effect;
};

std::set<TimerId> timers_of(const Formula& g, const std::optional<Formula>& a) {
  auto s = tgs::timers_of(g);
  if (a) {
    auto t = tgs::timers_of(*a);
    s.insert(t.begin(), t.end());
  }
  return s;
}

std::string label(const Loc& l) {
  std::string s = to_string(l.g);
  if (l.a) s += " ASSUME " + to_string(*l.a);
  if (!l.order.empty()) s += " ORDER " + l.order.str();
  return s;
}

class Builder {
 public:
  Builder(const Spec& spec, const ConstructionConfig& cfg, const ExpandRule& rule)
      : spec_(spec), cfg_(cfg), rule_(rule) {}

  CountdownTimerGame run() {
    g_.inputs = spec_.inputs;
    g_.outputs = spec_.outputs;
    g_.top = intern_label("true");
    g_.bottom = intern_label("false");
    g_.unsafe = {g_.bottom};

    // fully bounded assumptions are exact: A -> Phi
    std::vector<Formula> guarantee{spec_.guarantee};
    std::vector<Formula> tracked;
    for (const auto& a : spec_.assumptions) {
      if (a.kind() == Kind::Weak && a.rhs().is_false() && fully_bounded(a.lhs()))
        tracked.push_back(a);
      else
        guarantee.push_back(negate(a));
    }
    const Formula phi = cfold(Formula::disj(guarantee));
    std::optional<Formula> assume;
    if (!tracked.empty()) {
      assume = cfold(Formula::conj(tracked));
      g_.approximate = true;
    }
    g_.initial = target(introduce(phi, assume, {}, {}));

    while (!queue_.empty()) {
      const LocId id = queue_.front();
      queue_.pop_front();
      cfg_.deadline.check();
      expand_location(id);
    }
    g_.timers.assign(all_timers_.begin(), all_timers_.end());
    return std::move(g_);
  }

  std::vector<LocationFormula> formulas() const {
    std::vector<LocationFormula> out;
    for (const auto& l : locs_) out.push_back({l.g, l.a});
    out[g_.top].g = Formula::top();
    out[g_.bottom].g = Formula::bottom();
    return out;
  }

 private:
  const Spec& spec_;
  const ConstructionConfig& cfg_;
  const ExpandRule& rule_;
  CountdownTimerGame g_;
  std::unordered_map<std::string, LocId> ids_;
  std::vector<Loc> locs_;  // parallel to labels, meaningless for true/false
  std::deque<LocId> queue_;
  std::set<TimerId> all_timers_;

  LocId intern_label(const std::string& lab) {
    const LocId id = static_cast<LocId>(g_.labels.size());
    ids_.emplace(lab, id);
    g_.labels.push_back(lab);
    g_.delta.emplace_back();
    locs_.push_back({});
    return id;
  }

  LocId target(const Succ& s) {
    if (s.kind == Outcome::Top) return g_.top;
    if (s.kind == Outcome::Bottom) return g_.bottom;
    const std::string lab = label(s.loc);
    if (auto it = ids_.find(lab); it != ids_.end()) return it->second;
    if (g_.labels.size() >= cfg_.max_locations)
      throw ConstructionBudgetExceeded("location budget of " + std::to_string(cfg_.max_locations) + " exceeded");
    const LocId id = intern_label(lab);
    locs_[id] = s.loc;
    for (auto t : timers_of(s.loc.g, s.loc.a)) all_timers_.insert(t);
    queue_.push_back(id);
    return id;
  }

  static Succ constant(Outcome k) {
    Succ s;
    s.kind = k;
    return s;
  }

  // expansion, timer introduction, simplification and re-squeezing
  Succ introduce(const Formula& g0, const std::optional<Formula>& a0, TimerOrder order, Effect effect) {
    Intro in(rule_, timers_of(g0, a0));
    Formula g = in(g0);
    std::optional<Formula> a;
    if (a0) a = in(*a0);
    if (in.log_violation) throw LogRestart{*in.log_violation};
    if (in.overflow) return constant(Outcome::Top);
    for (auto x : in.introduced)
      for (auto y : in.introduced)
        if (x.duration < y.duration) order.add(x, y);
    g = opt(g);
    if (a) a = opt(*a);
    if (a && a->is_false()) return constant(Outcome::Top);
    if (g.is_false()) return constant(Outcome::Bottom);
    if (g.is_true()) return constant(Outcome::Top);
    if (a && a->is_true()) a.reset();

    // simplification may drop timers; restore contiguous indices
    const auto sq = squeeze_map(timers_of(g, a));
    Succ s;
    s.kind = Outcome::Loc;
    s.loc.g = rename_timers(g, sq.renaming);
    if (a) s.loc.a = rename_timers(*a, sq.renaming);
    s.loc.order = order.rename(sq.renaming);
    for (const auto& [nt, mid] : sq.effect.remapped())
      if (auto old = effect(mid)) s.effect.set(nt, *old);
    return s;
  }

  Succ successor(const TreeLeaf& leaf, const std::set<TimerId>& T, const TimerOrder& order) {
    Formula g = timeout_rewrite(leaf.g, T);
    std::optional<Formula> a;
    if (leaf.a) a = timeout_rewrite(*leaf.a, T);
    if (a && a->is_false()) return constant(Outcome::Top);
    if (g.is_false()) return constant(Outcome::Bottom);
    if (g.is_true()) return constant(Outcome::Top);
    const auto sq = squeeze_map(timers_of(g, a));
    g = rename_timers(g, sq.renaming);
    if (a) a = rename_timers(*a, sq.renaming);
    return introduce(g, a, order.rename(sq.renaming), sq.effect);
  }

  void expand_location(LocId id) {
    const Loc loc = locs_[id];
    const auto present = timers_of(loc.g, loc.a);
    std::vector<TimerId> candidates;
    for (auto t : present)
      if (t.index == 0 && (!cfg_.prune || loc.order.may_time_out(t, present))) candidates.push_back(t);
    if (candidates.size() > 20) throw ConstructionBudgetExceeded("too many concurrent timers in one location");
    std::vector<std::set<TimerId>> tsets;
    for (std::size_t bits = 0; bits < (std::size_t{1} << candidates.size()); ++bits) {
      std::set<TimerId> T;
      for (std::size_t i = 0; i < candidates.size(); ++i)
        if (bits >> i & 1u) T.insert(candidates[i]);
      tsets.push_back(std::move(T));
    }

    const auto leaves = tree_leaves(loc.g, loc.a, spec_.inputs, cfg_.prune);
    for (const auto& leaf : leaves) {
      Outcome fixed = Outcome::Loc;
      if (leaf.a && leaf.a->is_false()) fixed = Outcome::Top;
      else if (leaf.g.is_false()) fixed = Outcome::Bottom;
      else if (leaf.g.is_true()) fixed = Outcome::Top;
      for (const auto& T : tsets) {
        const Succ s = fixed == Outcome::Loc ? successor(leaf, T, loc.order) : constant(fixed);
        Branch b;
        b.cond = leaf.cube;
        b.timeouts.assign(T.begin(), T.end());
        b.to = target(s);
        b.effect = s.effect;
        g_.delta[id].push_back(std::move(b));
      }
    }
  }
};

}  // namespace

BuildResult build_game(const Spec& spec, const ConstructionConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  BuildResult r;
  ExpandRule rule = cfg.expand;
  for (;;) {
    try {
      Builder b(spec, cfg, rule);
      r.game = b.run();
      r.formulas = b.formulas();
      break;
    } catch (const LogRestart& e) {
      rule.explicit_durations.insert(e.duration);
      ++r.stats.restarts;
    }
  }
  r.stats.locations = r.game.num_locations();
  r.stats.timers = r.game.timers.size();
  for (const auto& bs : r.game.delta) r.stats.branches += bs.size();
  r.stats.expand_rule = rule.str();
  r.stats.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace tgs
