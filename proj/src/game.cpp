#include "tgs/game.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tgs {

bool satisfies(const Cube& c, const Letter& m) {
  for (const auto& [p, v] : c)
    if (m.contains(p) != v) return false;
  return true;
}

std::string cube_to_string(const Cube& c) {
  if (c.empty()) return "true";
  std::string s;
  for (const auto& [p, v] : c) {
    if (!s.empty()) s += " && ";
    if (!v) s += '!';
    s += p;
  }
  return s;
}

Effect Effect::identity(std::span<const TimerId> timers) {
  Effect e;
  for (auto t : timers) e.set(t, t);
  return e;
}

std::optional<TimerId> Effect::operator()(TimerId t) const {
  auto it = map_.find(t);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::optional<TimerId> Effect::preimage(TimerId t) const {
  for (const auto& [from, to] : map_)
    if (to == t) return from;
  return std::nullopt;
}

std::string validate_effect(const Effect& e, std::span<const TimerId> timers) {
  std::set<TimerId> known(timers.begin(), timers.end());
  std::set<TimerId> images;
  for (const auto& [from, to] : e.remapped()) {
    if (!known.contains(from)) return "effect mentions undeclared timer " + to_string(from);
    if (!known.contains(to)) return "effect maps onto undeclared timer " + to_string(to);
    if (from.duration != to.duration)
      return "duration mismatch: " + to_string(from) + " -> " + to_string(to);
    if (!images.insert(to).second) return "effect is not injective on " + to_string(to);
  }
  return {};
}

bool CountdownTimerGame::is_unsafe(LocId l) const {
  return std::find(unsafe.begin(), unsafe.end(), l) != unsafe.end();
}

std::optional<std::size_t> CountdownTimerGame::timer_index(TimerId t) const {
  auto it = std::lower_bound(timers.begin(), timers.end(), t);
  if (it == timers.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - timers.begin());
}

const Branch* CountdownTimerGame::lookup(LocId l, const Letter& m, std::span<const TimerId> timeouts) const {
  bool listed = false;
  for (const auto& b : delta[l]) {
    if (!std::equal(b.timeouts.begin(), b.timeouts.end(), timeouts.begin(), timeouts.end())) continue;
    listed = true;
    if (satisfies(b.cond, m)) return &b;
  }
  if (listed)
    throw std::logic_error("no branch of location " + std::to_string(l) + " applies");
  return nullptr;
}

std::pair<std::vector<std::string>, std::vector<std::string>> CountdownTimerGame::relevant_props(LocId l) const {
  std::set<std::string> in, out;
  for (const auto& b : delta[l])
    for (const auto& [p, v] : b.cond) {
      if (std::binary_search(inputs.begin(), inputs.end(), p))
        in.insert(p);
      else
        out.insert(p);
    }
  return {{in.begin(), in.end()}, {out.begin(), out.end()}};
}

void CountdownTimerGame::validate() const {
  auto fail = [](const std::string& m) { throw std::runtime_error("invalid game: " + m); };
  if (!std::is_sorted(timers.begin(), timers.end())) fail("timers not sorted");
  for (auto t : timers)
    if (t.duration < 1 || t.index > t.duration) fail("bad timer " + to_string(t));
  if (delta.size() != labels.size()) fail("delta size mismatch");
  if (initial >= labels.size() || top >= labels.size() || bottom >= labels.size()) fail("location out of range");
  for (auto u : unsafe)
    if (u >= labels.size()) fail("unsafe location out of range");
  for (std::size_t l = 0; l < delta.size(); ++l)
    for (const auto& b : delta[l]) {
      if (b.to >= labels.size()) fail("edge target out of range");
      for (auto t : b.timeouts)
        if (!timer_index(t)) fail("undeclared timer in timeout set: " + to_string(t));
      if (auto msg = validate_effect(b.effect, timers); !msg.empty()) fail(msg);
      for (const auto& [p, v] : b.cond)
        if (!std::binary_search(inputs.begin(), inputs.end(), p) &&
            !std::binary_search(outputs.begin(), outputs.end(), p))
          fail("undeclared proposition " + p);
    }
}

Valuation step(const Valuation& v) {
  Valuation r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] > 0 ? v[i] - 1 : 0;
  return r;
}

Valuation full_valuation(const CountdownTimerGame& g) {
  Valuation v(g.timers.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.timers[i].duration;
  return v;
}

namespace {

ExplicitState apply(const CountdownTimerGame& g, LocId l, const Valuation& vs, const Letter& m) {
  std::vector<TimerId> to;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (vs[i] == 0) to.push_back(g.timers[i]);
  const Branch* b = g.lookup(l, m, to);
  ExplicitState out;
  out.v.resize(vs.size());
  if (!b) {
    out.loc = g.top;
    out.v = full_valuation(g);
    return out;
  }
  out.loc = b->to;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (auto src = b->effect(g.timers[i]))
      out.v[i] = vs[*g.timer_index(*src)];
    else
      out.v[i] = g.timers[i].duration;
  }
  return out;
}

Letter merge(const Letter& a, const Letter& b) {
  Letter m = a;
  m.insert(b.begin(), b.end());
  return m;
}

}  // namespace

ExplicitState trans(const CountdownTimerGame& g, const ExplicitState& s, const Letter& inputs, const Letter& outputs) {
  return apply(g, s.loc, step(s.v), merge(inputs, outputs));
}

std::vector<Letter> all_letters(const std::vector<std::string>& props) {
  std::vector<Letter> out;
  const std::size_t n = props.size();
  if (n > 20) throw BudgetExceeded("too many propositions to enumerate");
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    Letter m;
    for (std::size_t i = 0; i < n; ++i)
      if (bits >> i & 1u) m.insert(props[i]);
    out.push_back(std::move(m));
  }
  return out;
}

std::size_t valuation_count(const CountdownTimerGame& g) {
  std::size_t n = 1;
  for (auto t : g.timers) {
    if (n > (std::size_t{1} << 40) / (t.duration + 1)) return std::size_t(-1);
    n *= t.duration + 1;
  }
  return n;
}

std::size_t encode(const CountdownTimerGame& g, const Valuation& v) {
  std::size_t c = 0;
  for (std::size_t i = g.timers.size(); i-- > 0;) c = c * (g.timers[i].duration + 1) + v[i];
  return c;
}

Valuation decode(const CountdownTimerGame& g, std::size_t code) {
  Valuation v(g.timers.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<std::uint32_t>(code % (g.timers[i].duration + 1));
    code /= g.timers[i].duration + 1;
  }
  return v;
}

namespace {

// Per-location choice structure: env letters x sys letters.
struct Choices {
  std::vector<Letter> env, sys;
};

std::vector<Choices> location_choices(const CountdownTimerGame& g) {
  std::vector<Choices> out(g.num_locations());
  for (LocId l = 0; l < g.num_locations(); ++l) {
    auto [in, o] = g.relevant_props(l);
    out[l].env = all_letters(in);
    out[l].sys = all_letters(o);
  }
  return out;
}

struct StateKey {
  LocId loc;
  std::size_t code;
  bool operator==(const StateKey&) const = default;
};
struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const { return k.code * 1000003u ^ k.loc; }
};

}  // namespace

std::vector<ExplicitState> explicit_reachable(const CountdownTimerGame& g, std::size_t budget) {
  const auto choices = location_choices(g);
  std::vector<ExplicitState> seen;
  std::unordered_map<StateKey, std::size_t, StateKeyHash> ids;
  std::deque<std::size_t> queue;
  auto add = [&](ExplicitState s) {
    StateKey k{s.loc, encode(g, s.v)};
    if (ids.contains(k)) return;
    if (seen.size() >= budget) throw BudgetExceeded("explicit state budget exceeded");
    ids.emplace(k, seen.size());
    queue.push_back(seen.size());
    seen.push_back(std::move(s));
  };
  add({g.initial, full_valuation(g)});
  while (!queue.empty()) {
    const ExplicitState s = seen[queue.front()];
    queue.pop_front();
    const Valuation vs = step(s.v);
    for (const auto& i : choices[s.loc].env)
      for (const auto& o : choices[s.loc].sys) add(apply(g, s.loc, vs, merge(i, o)));
  }
  return seen;
}

ExplicitAttractor attractor_explicit(const CountdownTimerGame& g, Scope scope, std::size_t budget) {
  const auto choices = location_choices(g);
  const std::size_t nv = valuation_count(g);
  ExplicitAttractor res;

  // state numbering
  std::vector<StateKey> states;
  std::unordered_map<StateKey, std::size_t, StateKeyHash> ids;
  auto dense = scope == Scope::All;
  if (dense) {
    if (nv == std::size_t(-1) || nv * g.num_locations() > budget)
      throw BudgetExceeded("explicit state budget exceeded");
  }
  auto id_of = [&](const StateKey& k) -> std::size_t {
    if (dense) return k.loc * nv + k.code;
    auto [it, fresh] = ids.emplace(k, states.size());
    if (fresh) {
      if (states.size() >= budget) throw BudgetExceeded("explicit state budget exceeded");
      states.push_back(k);
    }
    return it->second;
  };
  auto key_of = [&](std::size_t id) { return dense ? StateKey{LocId(id / nv), id % nv} : states[id]; };

  // forward edges: one "choice" per (state, env letter), counting sys letters not yet attracted
  std::vector<std::uint32_t> remaining;
  std::vector<std::size_t> choice_owner;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (target state, choice)

  std::size_t next_state = 0;
  if (dense) {
    next_state = g.num_locations() * nv;
  } else {
    (void)id_of({g.initial, encode(g, full_valuation(g))});
  }
  for (std::size_t s = 0; dense ? s < next_state : s < states.size(); ++s) {
    const StateKey k = key_of(s);
    if (g.is_unsafe(k.loc)) continue;
    const Valuation vs = step(decode(g, k.code));
    const auto& ch = choices[k.loc];
    for (const auto& i : ch.env) {
      const std::size_t c = remaining.size();
      remaining.push_back(static_cast<std::uint32_t>(ch.sys.size()));
      choice_owner.push_back(s);
      for (const auto& o : ch.sys) {
        ExplicitState t = apply(g, k.loc, vs, merge(i, o));
        edges.emplace_back(id_of({t.loc, encode(g, t.v)}), c);
      }
    }
    if (edges.size() > 8 * budget) throw BudgetExceeded("explicit edge budget exceeded");
  }
  const std::size_t n = dense ? next_state : states.size();
  res.states = n;

  // reverse adjacency (CSR)
  std::vector<std::size_t> start(n + 1, 0);
  for (const auto& e : edges) ++start[e.first + 1];
  for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
  std::vector<std::size_t> pred(edges.size());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (const auto& e : edges) pred[fill[e.first]++] = e.second;
  }
  edges.clear();
  edges.shrink_to_fit();

  std::vector<bool> attr(n, false);
  std::vector<std::size_t> frontier;
  for (std::size_t s = 0; s < n; ++s)
    if (g.is_unsafe(key_of(s).loc)) {
      attr[s] = true;
      frontier.push_back(s);
    }
  while (!frontier.empty()) {
    ++res.rounds;
    std::vector<std::size_t> next;
    for (auto s : frontier)
      for (std::size_t p = start[s]; p < start[s + 1]; ++p) {
        const std::size_t c = pred[p];
        if (--remaining[c] != 0) continue;
        const std::size_t owner = choice_owner[c];
        if (!attr[owner]) {
          attr[owner] = true;
          next.push_back(owner);
        }
      }
    frontier = std::move(next);
  }

  const StateKey init{g.initial, encode(g, full_valuation(g))};
  const std::size_t init_id = dense ? init.loc * nv + init.code : ids.at(init);
  res.winner = attr[init_id] ? Player::Env : Player::System;
  if (dense) {
    res.member.assign(g.num_locations(), std::vector<bool>(nv, false));
    for (std::size_t s = 0; s < n; ++s)
      if (attr[s]) res.member[s / nv][s % nv] = true;
  }
  return res;
}

// ---- dump / load ----------------------------------------------------------

std::string dump_game(const CountdownTimerGame& g) {
  std::ostringstream os;
  os << "INPUTS";
  for (const auto& p : g.inputs) os << ' ' << p;
  os << "\nOUTPUTS";
  for (const auto& p : g.outputs) os << ' ' << p;
  os << '\n';
  for (auto t : g.timers) os << "TIMER " << t.index << ' ' << t.duration << '\n';
  for (std::size_t l = 0; l < g.labels.size(); ++l) os << "LOC " << l << ' ' << g.labels[l] << '\n';
  os << "INIT " << g.initial << '\n';
  for (auto u : g.unsafe) os << "UNSAFE " << u << '\n';
  if (g.approximate) os << "APPROX\n";
  for (std::size_t l = 0; l < g.delta.size(); ++l)
    for (const auto& b : g.delta[l]) {
      os << "EDGE " << l << " | " << cube_to_string(b.cond) << " | {";
      for (std::size_t i = 0; i < b.timeouts.size(); ++i) os << (i ? ", " : "") << to_string(b.timeouts[i]);
      os << "} | " << b.to << " |";
      bool first = true;
      for (auto t : g.timers) {
        os << (first ? " " : ", ") << to_string(t) << "->";
        first = false;
        auto img = b.effect(t);
        os << (img ? to_string(*img) : "RESET");
      }
      os << '\n';
    }
  return os.str();
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  for (;;) {
    auto e = s.find(sep, b);
    out.push_back(trim(s.substr(b, e == std::string_view::npos ? e : e - b)));
    if (e == std::string_view::npos) return out;
    b = e + 1;
  }
}

TimerId parse_timer(const std::string& s) {
  // t<index>^<duration>
  auto caret = s.find('^');
  if (s.size() < 4 || s[0] != 't' || caret == std::string::npos) throw std::runtime_error("bad timer '" + s + "'");
  try {
    return TimerId{static_cast<std::uint32_t>(std::stoul(s.substr(caret + 1))),
                   static_cast<std::uint32_t>(std::stoul(s.substr(1, caret - 1)))};
  } catch (const std::logic_error&) {
    throw std::runtime_error("bad timer '" + s + "'");
  }
}

std::uint32_t parse_id(const std::string& s) {
  try {
    std::size_t used = 0;
    auto v = std::stoul(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::uint32_t>(v);
  } catch (const std::logic_error&) {
    throw std::runtime_error("bad location id '" + s + "'");
  }
}

}  // namespace

CountdownTimerGame load_game(std::string_view text) {
  CountdownTimerGame g;
  g.labels.clear();
  std::map<LocId, std::string> locs;
  std::vector<std::pair<LocId, Branch>> edges;
  bool have_init = false;
  std::size_t lineno = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  auto fail = [&](const std::string& m) { throw std::runtime_error("game line " + std::to_string(lineno) + ": " + m); };
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto sp = line.find(' ');
    const std::string kw = line.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    try {
      if (kw == "INPUTS" || kw == "OUTPUTS") {
        std::istringstream ws(rest);
        std::vector<std::string>& dst = kw == "INPUTS" ? g.inputs : g.outputs;
        for (std::string p; ws >> p;) dst.push_back(p);
        std::sort(dst.begin(), dst.end());
      } else if (kw == "TIMER") {
        std::istringstream ws(rest);
        TimerId t;
        if (!(ws >> t.index >> t.duration)) fail("bad TIMER line");
        g.timers.push_back(t);
      } else if (kw == "LOC") {
        const auto sp2 = rest.find(' ');
        if (sp2 == std::string::npos) fail("bad LOC line");
        const LocId id = parse_id(rest.substr(0, sp2));
        if (!locs.emplace(id, rest.substr(sp2 + 1)).second) fail("duplicate location id");
      } else if (kw == "INIT") {
        g.initial = parse_id(trim(rest));
        have_init = true;
      } else if (kw == "UNSAFE") {
        g.unsafe.push_back(parse_id(trim(rest)));
      } else if (kw == "APPROX") {
        g.approximate = true;
      } else if (kw == "EDGE") {
        auto f = split(rest, '|');
        if (f.size() != 5) fail("EDGE needs 5 fields");
        Branch b;
        const LocId from = parse_id(f[0]);
        if (f[1] != "true")
          for (const auto& lit : split(f[1], '&')) {
            if (lit.empty()) continue;
            if (lit[0] == '!')
              b.cond.emplace_back(trim(lit.substr(1)), false);
            else
              b.cond.emplace_back(lit, true);
          }
        std::sort(b.cond.begin(), b.cond.end());
        if (f[2].size() < 2 || f[2].front() != '{' || f[2].back() != '}') fail("bad timeout set");
        const std::string inner = trim(f[2].substr(1, f[2].size() - 2));
        if (!inner.empty())
          for (const auto& t : split(inner, ',')) b.timeouts.push_back(parse_timer(t));
        std::sort(b.timeouts.begin(), b.timeouts.end());
        b.to = parse_id(f[3]);
        if (!f[4].empty())
          for (const auto& pair : split(f[4], ',')) {
            const auto arrow = pair.find("->");
            if (arrow == std::string::npos) fail("bad effect pair '" + pair + "'");
            const TimerId from_t = parse_timer(trim(pair.substr(0, arrow)));
            const std::string tgt = trim(pair.substr(arrow + 2));
            if (b.effect(from_t) || std::find(g.timers.begin(), g.timers.end(), from_t) == g.timers.end())
              fail("bad effect source " + to_string(from_t));
            if (tgt != "RESET") b.effect.set(from_t, parse_timer(tgt));
          }
        edges.emplace_back(from, std::move(b));
      } else {
        fail("unknown keyword '" + kw + "'");
      }
    } catch (const std::runtime_error& e) {
      if (std::string_view(e.what()).starts_with("game line")) throw;
      fail(e.what());
    }
  }
  if (!have_init) throw std::runtime_error("game has no INIT line");
  std::sort(g.timers.begin(), g.timers.end());
  if (std::adjacent_find(g.timers.begin(), g.timers.end()) != g.timers.end())
    throw std::runtime_error("duplicate TIMER");
  LocId expect = 0;
  for (const auto& [id, label] : locs) {
    if (id != expect++) throw std::runtime_error("location ids must be dense from 0");
    g.labels.push_back(label);
  }
  g.delta.assign(g.labels.size(), {});
  for (auto& [from, b] : edges) {
    if (from >= g.labels.size()) throw std::runtime_error("edge from unknown location");
    g.delta[from].push_back(std::move(b));
  }
  auto find = [&](std::string_view lab) -> LocId {
    for (LocId l = 0; l < g.labels.size(); ++l)
      if (g.labels[l] == lab) return l;
    throw std::runtime_error("game lacks location '" + std::string(lab) + "'");
  };
  g.top = find("true");
  g.bottom = find("false");
  g.validate();
  return g;
}

}  // namespace tgs
