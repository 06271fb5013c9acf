#pragma once
// Symbolic environment attractor with interval approximation and k doubling.
//
// Sets are kept over the valuation right after the decrement step, so a
// location's set ranges over [0, d-1] per timer and the initial state is the
// all-(d-1) valuation. A semantic state (l, v) is in the attractor iff
// step(v) is in the set for l.

#include <cstdint>
#include <string>
#include <vector>

#include "tgs/deadline.hpp"
#include "tgs/game.hpp"
#include "tgs/symbolic.hpp"

namespace tgs {

enum class Approx { Exact, Over, Under };
const char* to_string(Approx a);

TimerSpace timer_space(const CountdownTimerGame& g);

// One application of the enforceable predecessor, without the accumulating union.
std::vector<SymbolicSet> cpre_env(const CountdownTimerGame& g, const std::vector<SymbolicSet>& U,
                                  Approx mode = Approx::Exact, std::uint32_t k = 1);

struct AttractorRun {
  std::vector<SymbolicSet> sets;
  Player winner = Player::System;  // conclusive for Exact, Over(System), Under(Env)
  std::size_t iterations = 0;      // applications that added something
  std::size_t peak_boxes = 0;      // largest box count of one location
  bool completed = true;           // false when the iteration budget ran out
};

AttractorRun attractor_symbolic(const CountdownTimerGame& g, Approx mode = Approx::Exact, std::uint32_t k = 1,
                                std::size_t max_iterations = 1'000'000, const Deadline& deadline = {});

// Is the state (l, v) in the attractor described by sets?
bool attractor_contains(const CountdownTimerGame& g, const std::vector<SymbolicSet>& sets, LocId l,
                        const Valuation& v);

enum class Verdict { Realizable, Unrealizable, Unknown };
const char* to_string(Verdict v);

struct SolverConfig {
  std::uint32_t k0 = 1;
  std::size_t max_iterations = 1'000'000;  // per attractor run
  Deadline deadline;                       // throws TimeoutError once passed
};

struct RunStats {
  std::uint32_t k = 0;
  Approx mode = Approx::Exact;
  std::size_t iterations = 0;
  std::size_t peak_boxes = 0;
  Player winner = Player::System;
  bool completed = true;
};

struct SolveResult {
  Verdict verdict = Verdict::Unknown;
  std::uint32_t k = 0;  // threshold of the deciding run
  std::vector<RunStats> runs;
  double ms = 0;
  std::string note;
};

SolveResult solve(const CountdownTimerGame& g, const SolverConfig& cfg = {});

}  // namespace tgs
