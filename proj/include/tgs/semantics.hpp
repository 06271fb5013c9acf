#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "tgs/formula.hpp"

namespace tgs {

// Propositions true at one step.
using Letter = std::set<std::string>;

// One-step explicit unfolding. Throws std::invalid_argument on timer bounds.
[[nodiscard]] Formula expand(const Formula& f, const Letter& m);
// True iff iterated expansion over the prefix reaches false.
[[nodiscard]] bool violated_within(const Formula& f, std::span<const Letter> prefix);

// Ultimately periodic word stem . loop^omega, loop nonempty.
struct Lasso {
  std::vector<Letter> stem;
  std::vector<Letter> loop;

  [[nodiscard]] std::size_t normalize(std::size_t pos) const;
  [[nodiscard]] const Letter& at(std::size_t pos) const { return pos < stem.size() ? stem[pos] : loop[normalize(pos) - stem.size()]; }
  [[nodiscard]] Lasso suffix(std::size_t k) const;
};

// Reference satisfaction relation, for testing.
[[nodiscard]] bool holds(const Formula& f, const Lasso& w, std::size_t pos = 0);

}  // namespace tgs
