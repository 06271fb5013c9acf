#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tgs/deadline.hpp"
#include "tgs/formula.hpp"
#include "tgs/game.hpp"
#include "tgs/spec.hpp"

namespace tgs {

// Which bounded operators are unrolled explicitly instead of getting a timer.
struct ExpandRule {
  enum class Mode { Log, None, All, UpTo } mode = Mode::Log;
  std::uint64_t upto = 0;                  // Mode::UpTo: bounds <= upto are explicit
  std::set<std::uint32_t> explicit_durations;  // Mode::Log: grown during construction

  static ExpandRule parse(const std::string& text);  // "log", "none", "all" or a number
  std::string str() const;
};

// explicit (true) or timer (false) for an operator with numeric bound n and timer duration d
bool hybrid_decide(const ExpandRule& rule, std::uint64_t bound, std::uint32_t duration);

struct ConstructionConfig {
  ExpandRule expand;
  bool prune = true;  // early decisions in tree and timer-order pruning in to
  std::size_t max_locations = 500'000;
  Deadline deadline;
};

// Pairs (a, b): timer a times out strictly before timer b. Kept transitively closed.
class TimerOrder {
 public:
  void add(TimerId a, TimerId b);
  [[nodiscard]] bool before(TimerId a, TimerId b) const { return facts_.contains({a, b}); }
  [[nodiscard]] bool empty() const { return facts_.empty(); }
  [[nodiscard]] const std::set<std::pair<TimerId, TimerId>>& facts() const { return facts_; }
  // Rename through old->new, dropping facts whose endpoints vanish.
  [[nodiscard]] TimerOrder rename(const std::map<TimerId, TimerId>& old_to_new) const;
  // Could t time out now, given the timers still present?
  [[nodiscard]] bool may_time_out(TimerId t, const std::set<TimerId>& present) const;
  [[nodiscard]] std::string str() const;
  friend bool operator==(const TimerOrder&, const TimerOrder&) = default;

 private:
  std::set<std::pair<TimerId, TimerId>> facts_;
};

std::set<Formula> closure(const Formula& phi);

struct TreeLeaf {
  Cube cube;
  Formula g;
  std::optional<Formula> a;
};

// Input/output selection. Leaves partition the assignments of the top-level
// propositions; propositions absent from a cube are don't-care.
std::vector<TreeLeaf> tree_leaves(const Formula& g, const std::optional<Formula>& a,
                                  const std::vector<std::string>& inputs, bool prune = true);
// The leaf formula selected by i and o.
Formula tree(const Formula& phi, const Letter& i, const Letter& o, const std::vector<std::string>& inputs,
             bool prune = true);

// Time-out handling, including the impossible-time-out redirection to true.
Formula to(std::span<const TimerId> T, const Formula& phi);
// Only the rewrites F[t] -> false, X[t] f -> f, W[t] -> true, then folding.
Formula timeout_rewrite(const Formula& phi, const std::set<TimerId>& T);

struct Squeezed {
  Effect effect;                         // new timer -> old timer
  std::map<TimerId, TimerId> renaming;   // old timer -> new timer
};
Squeezed squeeze_map(const std::set<TimerId>& present);
Formula rename_timers(const Formula& phi, const std::map<TimerId, TimerId>& renaming);
std::pair<Effect, Formula> squeeze(const Formula& phi);

Formula intro_exp(const Formula& phi, const ExpandRule& rule = {});

struct ConstructionStats {
  std::size_t locations = 0;
  std::size_t timers = 0;
  std::size_t branches = 0;
  std::size_t restarts = 0;  // log-rule restarts
  double ms = 0;
  std::string expand_rule;
};

// Formulas behind a location label; true/false carry the constants.
struct LocationFormula {
  Formula g;
  std::optional<Formula> a;
};

struct BuildResult {
  CountdownTimerGame game;
  ConstructionStats stats;
  std::vector<LocationFormula> formulas;  // parallel to game.labels
};

class ConstructionBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

BuildResult build_game(const Spec& spec, const ConstructionConfig& cfg = {});

}  // namespace tgs
