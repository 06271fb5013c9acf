#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgs/formula.hpp"
#include "tgs/semantics.hpp"

namespace tgs {

using LocId = std::uint32_t;

// Partial assignment: sorted (proposition, value) pairs. Empty means "any".
using Cube = std::vector<std::pair<std::string, bool>>;

bool satisfies(const Cube& c, const Letter& m);
std::string cube_to_string(const Cube& c);

// Timer effect. Timers not listed are RESET.
class Effect {
 public:
  Effect() = default;
  static Effect identity(std::span<const TimerId> timers);

  void set(TimerId t, TimerId target) { map_[t] = target; }
  [[nodiscard]] std::optional<TimerId> operator()(TimerId t) const;
  [[nodiscard]] const std::map<TimerId, TimerId>& remapped() const { return map_; }
  // Timers mapped onto t (at most one in a valid effect).
  [[nodiscard]] std::optional<TimerId> preimage(TimerId t) const;
  friend bool operator==(const Effect&, const Effect&) = default;

 private:
  std::map<TimerId, TimerId> map_;
};

// Empty string when e is a valid effect over the timer set.
std::string validate_effect(const Effect& e, std::span<const TimerId> timers);

struct Branch {
  Cube cond;
  std::vector<TimerId> timeouts;  // sorted
  LocId to = 0;
  Effect effect;
  friend bool operator==(const Branch&, const Branch&) = default;
};

enum class Player { Env, System };
inline const char* to_string(Player p) { return p == Player::Env ? "ENV" : "SYSTEM"; }

class CountdownTimerGame {
 public:
  std::vector<TimerId> timers;       // sorted
  std::vector<std::string> labels;   // location id -> label
  std::vector<std::string> inputs;   // sorted
  std::vector<std::string> outputs;  // sorted
  std::vector<std::vector<Branch>> delta;
  std::vector<LocId> unsafe;
  LocId initial = 0;
  LocId top = 0;
  LocId bottom = 1;
  bool approximate = false;  // assumption tracking over-approximates the env

  [[nodiscard]] std::size_t num_locations() const { return labels.size(); }
  [[nodiscard]] bool is_unsafe(LocId l) const;
  [[nodiscard]] std::optional<std::size_t> timer_index(TimerId t) const;
  [[nodiscard]] std::uint32_t duration(std::size_t timer_pos) const { return timers[timer_pos].duration; }

  // Branch taken at l for the letter and timeout set; nullptr means the
  // implicit move to top with every timer reset.
  [[nodiscard]] const Branch* lookup(LocId l, const Letter& m, std::span<const TimerId> timeouts) const;

  // Propositions mentioned by branch conditions of l.
  [[nodiscard]] std::pair<std::vector<std::string>, std::vector<std::string>> relevant_props(LocId l) const;

  // Throws std::runtime_error describing the first structural problem.
  void validate() const;
};

// Valuation indexed like game.timers.
using Valuation = std::vector<std::uint32_t>;

struct ExplicitState {
  LocId loc = 0;
  Valuation v;
  friend bool operator==(const ExplicitState&, const ExplicitState&) = default;
  friend auto operator<=>(const ExplicitState&, const ExplicitState&) = default;
};

Valuation step(const Valuation& v);
Valuation full_valuation(const CountdownTimerGame& g);
ExplicitState trans(const CountdownTimerGame& g, const ExplicitState& s, const Letter& inputs, const Letter& outputs);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kDefaultStateBudget = 10'000'000;

std::vector<ExplicitState> explicit_reachable(const CountdownTimerGame& g, std::size_t budget = kDefaultStateBudget);

enum class Scope { All, Reachable };

struct ExplicitAttractor {
  Player winner = Player::System;
  std::size_t states = 0;
  // attractor membership per location, valuations in mixed-radix order (Scope::All only)
  std::vector<std::vector<bool>> member;
  std::size_t rounds = 0;  // backward BFS layers until stable
};

ExplicitAttractor attractor_explicit(const CountdownTimerGame& g, Scope scope = Scope::All,
                                     std::size_t budget = kDefaultStateBudget);

// Mixed-radix helpers over timer domains [0, d].
std::size_t valuation_count(const CountdownTimerGame& g);
std::size_t encode(const CountdownTimerGame& g, const Valuation& v);
Valuation decode(const CountdownTimerGame& g, std::size_t code);

std::string dump_game(const CountdownTimerGame& g);
CountdownTimerGame load_game(std::string_view text);

// All assignments over the given propositions, in binary counting order.
std::vector<Letter> all_letters(const std::vector<std::string>& props);

}  // namespace tgs
