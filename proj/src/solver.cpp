#include "tgs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tgs {

const char* to_string(Approx a) {
  switch (a) {
    case Approx::Exact: return "exact";
    case Approx::Over: return "over";
    case Approx::Under: return "under";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Realizable: return "REALIZABLE";
    case Verdict::Unrealizable: return "UNREALIZABLE";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

TimerSpace timer_space(const CountdownTimerGame& g) {
  TimerSpace sp;
  for (auto t : g.timers) sp.d.push_back(t.duration);
  return sp;
}

namespace {

Valuation initial_step(const TimerSpace& sp) {
  Valuation v;
  for (auto d : sp.d) v.push_back(d - 1);
  return v;
}

class Cpre {
 public:
  Cpre(const CountdownTimerGame& g, const std::vector<SymbolicSet>& U) : g_(g), U_(U), sp_(timer_space(g)) {
    // The implicit branch resets everything, so it only matters when the
    // all-duration valuation of true's successor set is in the target.
    default_live_ = U_[g_.top].contains(initial_step(sp_));
  }

  // Env picks inputs, then every output choice must land in U. Instead of
  // enumerating letters we split only on propositions that still decide
  // which branch applies.
  SymbolicSet at(LocId l) {
    tsets_.clear();
    cands_.clear();
    for (const auto& b : g_.delta[l]) {
      auto it = std::find(tsets_.begin(), tsets_.end(), b.timeouts);
      if (it == tsets_.end()) {
        tsets_.push_back(b.timeouts);
        cands_.emplace_back();
        it = tsets_.end() - 1;
      }
      cands_[it - tsets_.begin()].push_back(&b);
    }
    dflt_ = default_live_ ? default_part(tsets_) : SymbolicSet{};
    unions_.clear();
    Assignment asg;
    return env_split(asg);
  }

 private:
  using Assignment = std::map<std::string, bool>;

  static int status(const Cube& c, const Assignment& asg) {  // -1 clash, 0 open, 1 holds
    bool open = false;
    for (const auto& [p, v] : c) {
      auto it = asg.find(p);
      if (it == asg.end()) open = true;
      else if (it->second != v) return -1;
    }
    return open ? 0 : 1;
  }

  bool is_input(const std::string& p) const { return std::binary_search(g_.inputs.begin(), g_.inputs.end(), p); }

  // An unassigned proposition (of the wanted side) that can still change a lookup.
  std::optional<std::string> pending(const Assignment& asg, bool inputs) const {
    for (const auto& list : cands_)
      for (const Branch* b : list) {
        const int st = status(b->cond, asg);
        if (st < 0) continue;
        if (st > 0) break;
        for (const auto& [p, v] : b->cond)
          if (!asg.contains(p) && is_input(p) == inputs) return p;
        if (!inputs) break;  // outputs: only the first open branch matters
      }
    return std::nullopt;
  }

  SymbolicSet env_split(Assignment& asg) {
    if (auto p = pending(asg, true)) {
      SymbolicSet r;
      for (bool v : {false, true}) {
        asg[*p] = v;
        r = unite(r, env_split(asg));
      }
      asg.erase(*p);
      return r;
    }
    return sys_split(asg).value_or(SymbolicSet{});
  }

  // nullopt means no constraint yet (empty intersection so far is an empty set).
  std::optional<SymbolicSet> sys_split(Assignment& asg) {
    if (auto p = pending(asg, false)) {
      std::optional<SymbolicSet> meet;
      for (bool v : {false, true}) {
        asg[*p] = v;
        auto part = sys_split(asg);
        if (part) meet = meet ? intersect(*meet, *part) : std::move(part);
        if (meet && meet->empty()) break;
      }
      asg.erase(*p);
      return meet;
    }
    std::vector<const Branch*> key;
    for (const auto& list : cands_) {
      const Branch* chosen = nullptr;
      for (const Branch* b : list)
        if (status(b->cond, asg) > 0) {
          chosen = b;
          break;
        }
      if (!chosen) throw std::logic_error("no branch applies");
      key.push_back(chosen);
    }
    auto it = unions_.find(key);
    if (it == unions_.end()) {
      SymbolicSet u = dflt_;
      for (std::size_t k = 0; k < key.size(); ++k) u = unite(u, sym_trans(key[k], tsets_[k]));
      it = unions_.emplace(key, std::move(u)).first;
    }
    return it->second;
  }

  const CountdownTimerGame& g_;
  const std::vector<SymbolicSet>& U_;
  TimerSpace sp_;
  bool default_live_ = false;
  std::unordered_map<const Branch*, SymbolicSet> trans_cache_;
  std::vector<std::vector<TimerId>> tsets_;
  std::vector<std::vector<const Branch*>> cands_;
  SymbolicSet dflt_;
  std::map<std::vector<const Branch*>, SymbolicSet> unions_;

  std::vector<bool> mask(const std::vector<TimerId>& T) const {
    std::vector<bool> m(sp_.size(), false);
    for (auto t : T) m[*g_.timer_index(t)] = true;
    return m;
  }

  // Predecessors through one branch; nullptr is the implicit move to true.
  SymbolicSet sym_trans(const Branch* b, const std::vector<TimerId>& T) {
    if (!b) return {};  // covered by the default part
    if (auto it = trans_cache_.find(b); it != trans_cache_.end()) return it->second;
    const std::size_t n = sp_.size();
    std::vector<bool> reset(n, false);
    std::vector<int> pre(n, -1);
    for (std::size_t s = 0; s < n; ++s) {
      const auto src = b->effect(g_.timers[s]);
      if (!src) reset[s] = true;
      else pre[*g_.timer_index(*src)] = static_cast<int>(s);
    }
    SymbolicSet r = inc(sp_, U_[b->to]);
    r = eff_reset(sp_, reset, r);
    r = remap(sp_, pre, r);
    r = eff_to(sp_, mask(T), r);
    trans_cache_.emplace(b, r);
    return r;
  }

  // Union over the timeout sets that no branch of the location lists.
  SymbolicSet default_part(const std::vector<std::vector<TimerId>>& listed) const {
    const std::size_t n = sp_.size();
    if (n > 20) throw std::runtime_error("too many timers for the implicit branch");
    std::set<std::vector<TimerId>> seen(listed.begin(), listed.end());
    const auto full = SymbolicSet::full(sp_);
    SymbolicSet acc;
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::vector<TimerId> T;
      std::vector<bool> m(n, false);
      for (std::size_t k = 0; k < n; ++k)
        if (bits >> k & 1u) {
          T.push_back(g_.timers[k]);
          m[k] = true;
        }
      if (!seen.contains(T)) acc = unite(acc, eff_to(sp_, m, full));
    }
    return acc;
  }
};

SymbolicSet approximate(const TimerSpace& sp, const SymbolicSet& s, Approx mode, std::uint32_t k) {
  switch (mode) {
    case Approx::Over: return over(sp, s, k);
    case Approx::Under: return under(sp, s, k);
    default: return s;
  }
}

std::vector<SymbolicSet> cpre_all(const CountdownTimerGame& g, const std::vector<SymbolicSet>& U, Approx mode,
                                  std::uint32_t k, const Deadline& deadline) {
  const auto sp = timer_space(g);
  Cpre c(g, U);
  std::vector<SymbolicSet> out(g.num_locations());
  for (LocId l = 0; l < g.num_locations(); ++l) {
    if (g.is_unsafe(l)) {
      out[l] = U[l];
      continue;
    }
    deadline.check();
    out[l] = approximate(sp, c.at(l), mode, k);
  }
  return out;
}

}  // namespace

std::vector<SymbolicSet> cpre_env(const CountdownTimerGame& g, const std::vector<SymbolicSet>& U, Approx mode,
                                  std::uint32_t k) {
  return cpre_all(g, U, mode, k, {});
}

AttractorRun attractor_symbolic(const CountdownTimerGame& g, Approx mode, std::uint32_t k,
                                std::size_t max_iterations, const Deadline& deadline) {
  const auto sp = timer_space(g);
  const auto init = initial_step(sp);
  AttractorRun run;
  run.sets.assign(g.num_locations(), SymbolicSet{});
  for (auto u : g.unsafe) run.sets[u] = SymbolicSet::full(sp, 1);
  auto env_wins = [&] { return run.sets[g.initial].contains(init); };
  while (!env_wins()) {
    if (run.iterations >= max_iterations) {
      run.completed = false;
      break;
    }
    const auto pre = cpre_all(g, run.sets, mode, k, deadline);
    bool changed = false;
    for (LocId l = 0; l < g.num_locations(); ++l) {
      if (g.is_unsafe(l) || covered(pre[l], run.sets[l])) continue;
      run.sets[l] = unite(run.sets[l], pre[l]);
      run.peak_boxes = std::max(run.peak_boxes, run.sets[l].box_count());
      changed = true;
    }
    if (!changed) break;
    ++run.iterations;
  }
  run.winner = env_wins() ? Player::Env : Player::System;
  return run;
}

bool attractor_contains(const CountdownTimerGame& g, const std::vector<SymbolicSet>& sets, LocId l,
                        const Valuation& v) {
  return g.is_unsafe(l) || sets[l].contains(step(v));
}

SolveResult solve(const CountdownTimerGame& g, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult res;
  std::uint32_t max_d = 0;
  for (auto t : g.timers) max_d = std::max(max_d, t.duration);
  auto record = [&](const AttractorRun& r, Approx mode, std::uint32_t k) {
    res.runs.push_back({k, mode, r.iterations, r.peak_boxes, r.winner, r.completed});
  };
  auto finish = [&](Verdict v, std::uint32_t k, std::string note = {}) {
    res.verdict = v;
    res.k = k;
    res.note = std::move(note);
    res.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
  };
  const std::string approx_note = "environment wins only against the approximated assumptions";
  for (std::uint64_t k = std::max<std::uint32_t>(cfg.k0, 1);; k *= 2) {
    const auto kk = static_cast<std::uint32_t>(std::min<std::uint64_t>(k, UINT32_MAX));
    const bool exact = 2 * k > max_d;
    if (exact) {
      const auto r = attractor_symbolic(g, Approx::Exact, kk, cfg.max_iterations, cfg.deadline);
      record(r, Approx::Exact, kk);
      if (!r.completed && r.winner == Player::System) return finish(Verdict::Unknown, kk, "iteration budget exhausted");
      if (r.winner == Player::System) return finish(Verdict::Realizable, kk);
      if (g.approximate) return finish(Verdict::Unknown, kk, approx_note);
      return finish(Verdict::Unrealizable, kk);
    }
    const auto u = attractor_symbolic(g, Approx::Under, kk, cfg.max_iterations, cfg.deadline);
    record(u, Approx::Under, kk);
    if (u.winner == Player::Env) {
      if (g.approximate) return finish(Verdict::Unknown, kk, approx_note);
      return finish(Verdict::Unrealizable, kk);
    }
    const auto o = attractor_symbolic(g, Approx::Over, kk, cfg.max_iterations, cfg.deadline);
    record(o, Approx::Over, kk);
    if (o.completed && o.winner == Player::System) return finish(Verdict::Realizable, kk);
  }
}

}  // namespace tgs
