#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tgs {

// t_index^duration
struct TimerId {
  std::uint32_t duration = 1;
  std::uint32_t index = 0;
  auto operator<=>(const TimerId&) const = default;
};

std::string to_string(TimerId t);

struct Num {
  std::uint64_t value = 0;
  auto operator<=>(const Num&) const = default;
};

using Bound = std::variant<Num, TimerId>;

enum class Kind : std::uint8_t { True, False, Lit, And, Or, Next, Eventually, BWeak, Weak };

// Immutable shared term. Construction does not normalize; see cfold/opt.
class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula constant(bool v) { return v ? top() : bottom(); }
  static Formula lit(std::string name, bool positive = true);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula next(Bound b, Formula f);
  static Formula eventually(Bound b, Formula f);
  static Formula bweak(Bound b, Formula lhs, Formula rhs);
  static Formula weak(Formula lhs, Formula rhs);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] bool is_true() const { return kind() == Kind::True; }
  [[nodiscard]] bool is_false() const { return kind() == Kind::False; }
  [[nodiscard]] bool is_const() const { return is_true() || is_false(); }
  [[nodiscard]] const std::string& name() const;
  [[nodiscard]] bool positive() const;
  [[nodiscard]] const Bound& bound() const;
  [[nodiscard]] std::span<const Formula> children() const;
  [[nodiscard]] const Formula& sub() const { return children()[0]; }
  [[nodiscard]] const Formula& lhs() const { return children()[0]; }
  [[nodiscard]] const Formula& rhs() const { return children()[1]; }
  [[nodiscard]] std::size_t hash() const;
  [[nodiscard]] bool has_timer_bound() const;
  [[nodiscard]] bool same_node(const Formula& o) const { return node_ == o.node_; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

[[nodiscard]] std::string to_string(const Formula& f);

// Flatten/sort/dedupe And/Or and fold constants, recursively.
[[nodiscard]] Formula cfold(const Formula& f);
// Same, treating temporal nodes as already-normal atoms.
[[nodiscard]] Formula cfold_top(const Formula& f);
// Canonical simplification: cfold + complementary literals + absorption.
[[nodiscard]] Formula opt(const Formula& f);
// Syntactic implication check used by opt (sound, incomplete).
[[nodiscard]] bool implies(const Formula& a, const Formula& b);

// NNF negation through the bounded-operator duals. Throws on unbounded W.
[[nodiscard]] Formula negate(const Formula& f);

[[nodiscard]] std::set<TimerId> timers_of(const Formula& f);
[[nodiscard]] std::set<std::string> props_of(const Formula& f);
[[nodiscard]] bool fully_bounded(const Formula& f);

// Literals on the Boolean top level (reachable through And/Or only).
[[nodiscard]] std::set<std::pair<std::string, bool>> top_literals(const Formula& f);
// [ap/v]_T: replace top-level occurrences of ap by v, then fold.
[[nodiscard]] Formula substitute_top(const Formula& f, const std::string& ap, bool value);

// Convenience builders for the derived operators.
[[nodiscard]] Formula globally(Formula f);                  // f W false
[[nodiscard]] Formula bglobally(std::uint64_t n, Formula f);  // f W[<=n] false
[[nodiscard]] Formula buntil(std::uint64_t n, Formula a, Formula b);
[[nodiscard]] Formula implies_f(Formula a, Formula b);       // !a || b

}  // namespace tgs
