#pragma once
// Timer-valuation sets as unions of (partial order, boxes) regions.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tgs {

struct Interval {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;
  [[nodiscard]] bool contains(std::uint32_t x) const { return lo <= x && x <= hi; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

// One interval per timer dimension; never stored empty.
struct Box {
  std::vector<Interval> dim;
  [[nodiscard]] bool contains(std::span<const std::uint32_t> v) const;
  [[nodiscard]] bool subsumes(const Box& other) const;
  friend auto operator<=>(const Box&, const Box&) = default;
};

enum class Rel : std::uint8_t { None, Le, Lt };

// Strict/non-strict facts v(i) < v(j), v(i) <= v(j); equality is both ways <=.
// Kept transitively closed.
class Order {
 public:
  Order() = default;
  explicit Order(std::size_t n) : n_(n), m_(n * n, Rel::None) {}
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] Rel at(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
  // Adds a fact without closing.
  void relate(std::size_t i, std::size_t j, Rel r);
  // Transitive closure; false when some v(i) < v(i) becomes derivable.
  bool close();
  [[nodiscard]] bool empty() const;
  // Every fact of q is a fact here.
  [[nodiscard]] bool implies(const Order& q) const;
  [[nodiscard]] bool satisfied_by(std::span<const std::uint32_t> v) const;
  [[nodiscard]] std::string str() const;
  friend auto operator<=>(const Order&, const Order&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rel> m_;
};

struct Region {
  Order order;
  std::vector<Box> boxes;  // sorted, each tightened under order
  friend bool operator==(const Region&, const Region&) = default;
};

// Durations of the timers, indexed like the game's timer list.
struct TimerSpace {
  std::vector<std::uint32_t> d;
  [[nodiscard]] std::size_t size() const { return d.size(); }
};

class SymbolicSet {
 public:
  SymbolicSet() = default;
  static SymbolicSet of_box(const TimerSpace& sp, Box b, Order o = {});
  // Every dimension spans [0, d(t) - shrink].
  static SymbolicSet full(const TimerSpace& sp, std::uint32_t shrink = 0);

  [[nodiscard]] bool empty() const { return regions_.empty(); }
  [[nodiscard]] const std::vector<Region>& regions() const { return regions_; }
  [[nodiscard]] bool contains(std::span<const std::uint32_t> v) const;
  [[nodiscard]] std::size_t box_count() const;
  [[nodiscard]] std::string str() const;
  friend bool operator==(const SymbolicSet&, const SymbolicSet&) = default;

  // Merge regions with the same order, tighten, coalesce and sort.
  static SymbolicSet normalized(std::vector<Region> regions);

 private:
  std::vector<Region> regions_;
};

// Backward step: all w with max(0, w - 1) in R, restricted to [0, d].
SymbolicSet inc(const TimerSpace& sp, const SymbolicSet& s);
// Timers in the mask are 0, all others in [1, d - 1]; the order records mask < rest.
SymbolicSet eff_to(const TimerSpace& sp, const std::vector<bool>& timed_out, const SymbolicSet& s);
// pre[t] is the timer whose value moves into t, or -1 when none does.
SymbolicSet remap(const TimerSpace& sp, const std::vector<int>& pre, const SymbolicSet& s);
// Timers in the mask must sit at their duration.
SymbolicSet eff_reset(const TimerSpace& sp, const std::vector<bool>& reset, const SymbolicSet& s);

SymbolicSet unite(const SymbolicSet& a, const SymbolicSet& b);
SymbolicSet intersect(const SymbolicSet& a, const SymbolicSet& b);
// Is every point of a also in b? Exact within equal orders, conservative across orders.
bool covered(const SymbolicSet& a, const SymbolicSet& b);

SymbolicSet over(const TimerSpace& sp, const SymbolicSet& s, std::uint32_t k);
SymbolicSet under(const TimerSpace& sp, const SymbolicSet& s, std::uint32_t k);

// Brute-force enumeration over [0, d]^n, for testing. Throws when the space exceeds budget.
std::vector<std::vector<std::uint32_t>> denote(const TimerSpace& sp, const SymbolicSet& s,
                                               std::size_t budget = 1'000'000);

}  // namespace tgs
