#include "tgs/symbolic.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace tgs {

// ---- boxes and orders -----------------------------------------------------------

bool Box::contains(std::span<const std::uint32_t> v) const {
  for (std::size_t i = 0; i < dim.size(); ++i)
    if (!dim[i].contains(v[i])) return false;
  return true;
}

bool Box::subsumes(const Box& o) const {
  for (std::size_t i = 0; i < dim.size(); ++i)
    if (o.dim[i].lo < dim[i].lo || o.dim[i].hi > dim[i].hi) return false;
  return true;
}

void Order::relate(std::size_t i, std::size_t j, Rel r) {
  auto& x = m_[i * n_ + j];
  x = std::max(x, r);
}

bool Order::close() {
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i) {
      const Rel ik = at(i, k);
      if (ik == Rel::None) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        const Rel kj = at(k, j);
        if (kj != Rel::None) relate(i, j, std::max(ik, kj));
      }
    }
  for (std::size_t i = 0; i < n_; ++i) {
    if (at(i, i) == Rel::Lt) return false;
    m_[i * n_ + i] = Rel::None;
  }
  return true;
}

bool Order::empty() const {
  return std::all_of(m_.begin(), m_.end(), [](Rel r) { return r == Rel::None; });
}

bool Order::implies(const Order& q) const {
  for (std::size_t k = 0; k < m_.size(); ++k)
    if (q.m_[k] > m_[k]) return false;
  return true;
}

bool Order::satisfied_by(std::span<const std::uint32_t> v) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const Rel r = at(i, j);
      if ((r == Rel::Lt && !(v[i] < v[j])) || (r == Rel::Le && !(v[i] <= v[j]))) return false;
    }
  return true;
}

std::string Order::str() const {
  std::string s;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const Rel r = at(i, j);
      if (r == Rel::None) continue;
      if (!s.empty()) s += ' ';
      s += std::to_string(i) + (r == Rel::Lt ? "<" : "<=") + std::to_string(j);
    }
  return s;
}

namespace {

// Shrink the box to the points that can satisfy the order. Difference
// constraints with unit weights, so propagating to a fixpoint is exact.
bool tighten(Box& b, const Order& o) {
  const std::size_t n = o.size();
  if (o.empty()) return true;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rel r = o.at(i, j);
        if (r == Rel::None) continue;
        const std::uint32_t c = r == Rel::Lt ? 1 : 0;
        auto& bi = b.dim[i];
        auto& bj = b.dim[j];
        if (bi.lo + c > bj.lo) {
          bj.lo = bi.lo + c;
          changed = true;
        }
        if (bj.hi < c) return false;
        if (bj.hi - c < bi.hi) {
          bi.hi = bj.hi - c;
          changed = true;
        }
        if (bi.lo > bi.hi || bj.lo > bj.hi) return false;
      }
  }
  return true;
}

// Sort so that boxes equal outside dimension d are consecutive and ordered along d.
void sort_along(std::vector<Box>& boxes, std::size_t d) {
  std::sort(boxes.begin(), boxes.end(), [d](const Box& a, const Box& b) {
    for (std::size_t i = 0; i < a.dim.size(); ++i)
      if (i != d && a.dim[i] != b.dim[i]) return a.dim[i] < b.dim[i];
    return a.dim[d] < b.dim[d];
  });
}

bool same_outside(const Box& a, const Box& b, std::size_t d) {
  for (std::size_t i = 0; i < a.dim.size(); ++i)
    if (i != d && a.dim[i] != b.dim[i]) return false;
  return true;
}

// Merge runs of boxes that differ only in dimension d and touch there.
bool merge_along(std::vector<Box>& boxes, std::size_t d, const Order& o) {
  sort_along(boxes, d);
  std::vector<Box> out;
  bool merged = false;
  for (auto& b : boxes) {
    if (!out.empty() && same_outside(out.back(), b, d) && b.dim[d].lo <= out.back().dim[d].hi + 1) {
      auto& x = out.back().dim[d];
      x.hi = std::max(x.hi, b.dim[d].hi);
      merged = true;
      continue;
    }
    out.push_back(std::move(b));
  }
  if (merged)
    for (auto& b : out) tighten(b, o);
  boxes = std::move(out);
  return merged;
}

// Remove boxes inside another one; only overlapping pairs are compared.
void drop_subsumed(std::vector<Box>& boxes) {
  if (boxes.empty() || boxes[0].dim.empty()) {
    if (boxes.size() > 1) boxes.resize(1);
    return;
  }
  std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
    if (a.dim[0].lo != b.dim[0].lo) return a.dim[0].lo < b.dim[0].lo;
    return a.dim[0].hi > b.dim[0].hi;
  });
  std::vector<bool> dead(boxes.size(), false);
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    const auto lo = boxes[j].dim[0].lo;
    std::erase_if(active, [&](std::size_t i) { return dead[i] || boxes[i].dim[0].hi < lo; });
    for (auto i : active) {
      if (boxes[i].subsumes(boxes[j])) {
        dead[j] = true;
        break;
      }
      if (boxes[j].subsumes(boxes[i])) dead[i] = true;
    }
    if (!dead[j]) active.push_back(j);
  }
  std::vector<Box> kept;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    if (!dead[i]) kept.push_back(std::move(boxes[i]));
  boxes = std::move(kept);
}

constexpr std::uint32_t kUnbounded = 0x3fffffff;

// Widen every bound the order already enforces, greedily by dimension.
// Same points under the order; tightened staircases become mergeable.
Box loosen(const Box& tight, const Order& o) {
  Box b = tight;
  auto same = [&](const Box& c) {
    Box t = c;
    return tighten(t, o) && t == tight;
  };
  for (std::size_t j = 0; j < b.dim.size(); ++j) {
    if (b.dim[j].lo > 0) {
      Box c = b;
      c.dim[j].lo = 0;
      if (same(c)) b = std::move(c);
    }
    Box c = b;
    c.dim[j].hi = kUnbounded;
    if (same(c)) b = std::move(c);
  }
  return b;
}

void merge_loop(std::vector<Box>& boxes, const Order& o) {
  std::sort(boxes.begin(), boxes.end());
  boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
  const std::size_t n = boxes.empty() ? 0 : boxes[0].dim.size();
  for (bool changed = true; changed;) {
    drop_subsumed(boxes);
    changed = false;
    for (std::size_t d = 0; d < n; ++d) changed = merge_along(boxes, d, o) || changed;
  }
}

void coalesce(std::vector<Box>& boxes, const Order& o) {
  merge_loop(boxes, o);
  if (!o.empty() && boxes.size() > 1) {
    const Order none(o.size());
    for (auto& b : boxes) b = loosen(b, o);
    merge_loop(boxes, none);
    std::vector<Box> kept;
    for (auto& b : boxes)
      if (tighten(b, o)) kept.push_back(std::move(b));
    boxes = std::move(kept);
    merge_loop(boxes, o);
  }
  std::sort(boxes.begin(), boxes.end());
}

std::optional<Box> meet(const Box& a, const Box& b) {
  Box r = a;
  for (std::size_t i = 0; i < r.dim.size(); ++i) {
    r.dim[i].lo = std::max(a.dim[i].lo, b.dim[i].lo);
    r.dim[i].hi = std::min(a.dim[i].hi, b.dim[i].hi);
    if (r.dim[i].lo > r.dim[i].hi) return std::nullopt;
  }
  return r;
}

bool intersects(const Box& a, const Box& b) {
  for (std::size_t i = 0; i < a.dim.size(); ++i)
    if (std::max(a.dim[i].lo, b.dim[i].lo) > std::min(a.dim[i].hi, b.dim[i].hi)) return false;
  return true;
}

// x minus y as disjoint boxes; x and y intersect
void subtract(const Box& x, const Box& y, std::vector<Box>& out) {
  Box cur = x;
  for (std::size_t i = 0; i < x.dim.size(); ++i) {
    if (cur.dim[i].lo < y.dim[i].lo) {
      Box piece = cur;
      piece.dim[i].hi = y.dim[i].lo - 1;
      out.push_back(std::move(piece));
      cur.dim[i].lo = y.dim[i].lo;
    }
    if (cur.dim[i].hi > y.dim[i].hi) {
      Box piece = cur;
      piece.dim[i].lo = y.dim[i].hi + 1;
      out.push_back(std::move(piece));
      cur.dim[i].hi = y.dim[i].hi;
    }
  }
}

// Apply f to every region's boxes; f appends (order, box) pairs.
template <class F>
SymbolicSet per_box(const SymbolicSet& s, F&& f) {
  std::vector<Region> out;
  for (const auto& r : s.regions())
    for (const auto& b : r.boxes) f(r.order, b, out);
  return SymbolicSet::normalized(std::move(out));
}

}  // namespace

// ---- SymbolicSet --------------------------------------------------------------

SymbolicSet SymbolicSet::of_box(const TimerSpace& sp, Box b, Order o) {
  if (o.size() != sp.size()) o = Order(sp.size());
  std::vector<Region> rs;
  rs.push_back(Region{std::move(o), {std::move(b)}});
  return normalized(std::move(rs));
}

SymbolicSet SymbolicSet::full(const TimerSpace& sp, std::uint32_t shrink) {
  Box b;
  for (auto d : sp.d) {
    if (d < shrink) return {};
    b.dim.push_back({0, d - shrink});
  }
  return of_box(sp, std::move(b));
}

SymbolicSet SymbolicSet::normalized(std::vector<Region> regions) {
  std::map<Order, std::vector<Box>> by_order;
  for (auto& r : regions) {
    if (r.boxes.empty() || !r.order.close()) continue;
    for (auto& b : r.boxes) {
      if (!tighten(b, r.order)) continue;
      // Dimensions pinned to one shared value are equal; saying so in the
      // order lets diagonals coalesce into one box.
      Order o = r.order;
      bool eq = false;
      for (std::size_t i = 0; i < b.dim.size(); ++i)
        for (std::size_t j = i + 1; j < b.dim.size(); ++j)
          if (b.dim[i].lo == b.dim[i].hi && b.dim[i] == b.dim[j] &&
              (o.at(i, j) != Rel::Le || o.at(j, i) != Rel::Le)) {
            o.relate(i, j, Rel::Le);
            o.relate(j, i, Rel::Le);
            eq = true;
          }
      if (eq) o.close();
      by_order[o].push_back(std::move(b));
    }
  }
  SymbolicSet s;
  for (auto& [o, boxes] : by_order) {
    if (boxes.empty()) continue;
    coalesce(boxes, o);
    s.regions_.push_back(Region{o, std::move(boxes)});
  }
  return s;
}

bool SymbolicSet::contains(std::span<const std::uint32_t> v) const {
  for (const auto& r : regions_) {
    if (!r.order.satisfied_by(v)) continue;
    for (const auto& b : r.boxes)
      if (b.contains(v)) return true;
  }
  return false;
}

std::size_t SymbolicSet::box_count() const {
  std::size_t n = 0;
  for (const auto& r : regions_) n += r.boxes.size();
  return n;
}

std::string SymbolicSet::str() const {
  std::string s;
  for (const auto& r : regions_) {
    if (!s.empty()) s += " | ";
    if (!r.order.empty()) s += "(" + r.order.str() + ") ";
    bool first = true;
    for (const auto& b : r.boxes) {
      if (!first) s += ',';
      first = false;
      for (std::size_t i = 0; i < b.dim.size(); ++i) {
        if (i) s += 'x';
        const auto [lo, hi] = b.dim[i];
        s += lo == hi ? "{" + std::to_string(lo) + "}" : "[" + std::to_string(lo) + "," + std::to_string(hi) + "]";
      }
    }
  }
  return s.empty() ? "{}" : s;
}

// ---- transition operators -----------------------------------------------------------

SymbolicSet inc(const TimerSpace& sp, const SymbolicSet& s) {
  const std::size_t n = sp.size();
  return per_box(s, [&](const Order& o, const Box& b, std::vector<Region>& out) {
    // A dimension straddling 0 splits only when the order mentions it, since
    // the zero part has two predecessors.
    std::vector<std::size_t> split;
    std::vector<bool> in_order(n, false);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (o.at(i, j) != Rel::None) in_order[i] = in_order[j] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (in_order[i] && b.dim[i].lo == 0 && b.dim[i].hi >= 1) split.push_back(i);
    for (std::size_t bits = 0; bits < (std::size_t{1} << split.size()); ++bits) {
      Box src = b;
      for (std::size_t k = 0; k < split.size(); ++k) {
        auto& iv = src.dim[split[k]];
        if (bits >> k & 1u) iv.lo = 1;
        else iv.hi = 0;
      }
      if (!tighten(src, o)) continue;
      Box dst = src;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const auto [lo, hi] = src.dim[i];
        if (lo == 0 && hi == 0) {
          dst.dim[i] = {0, 1};
        } else if (lo == 0) {
          dst.dim[i] = {0, std::min(hi + 1, sp.d[i])};
        } else if (lo + 1 > sp.d[i]) {
          ok = false;
        } else {
          dst.dim[i] = {lo + 1, std::min(hi + 1, sp.d[i])};
        }
      }
      if (!ok) continue;
      // A fact between a zero and a nonzero timer survives either
      // predecessor of 0; only facts among zero timers are lost.
      Order kept(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const bool zi = src.dim[i].hi == 0, zj = src.dim[j].hi == 0;
          if (!zi || !zj) kept.relate(i, j, o.at(i, j));
        }
      out.push_back(Region{std::move(kept), {std::move(dst)}});
    }
  });
}

SymbolicSet eff_to(const TimerSpace& sp, const std::vector<bool>& timed_out, const SymbolicSet& s) {
  const std::size_t n = sp.size();
  return per_box(s, [&](const Order& o, const Box& b, std::vector<Region>& out) {
    Order o2 = o;
    for (std::size_t i = 0; i < n; ++i)
      if (timed_out[i])
        for (std::size_t j = 0; j < n; ++j)
          if (!timed_out[j]) o2.relate(i, j, Rel::Lt);
    Box b2 = b;
    for (std::size_t i = 0; i < n; ++i) {
      auto& iv = b2.dim[i];
      if (timed_out[i]) {
        if (iv.lo > 0) return;
        iv.hi = 0;
      } else {
        iv.lo = std::max<std::uint32_t>(iv.lo, 1);
        iv.hi = std::min(iv.hi, sp.d[i] - 1);
        if (iv.lo > iv.hi) return;
      }
    }
    out.push_back(Region{std::move(o2), {std::move(b2)}});
  });
}

SymbolicSet remap(const TimerSpace& sp, const std::vector<int>& pre, const SymbolicSet& s) {
  const std::size_t n = sp.size();
  std::vector<bool> kept(n, false);
  for (auto p : pre)
    if (p >= 0) kept[static_cast<std::size_t>(p)] = true;
  return per_box(s, [&](const Order& o, const Box& b, std::vector<Region>& out) {
    // Dropping k with i < k < j leaves v(j) >= v(i) + 2, which the order
    // cannot say; fixing k's value turns both facts into bounds.
    auto chained = [&](std::size_t k) {
      bool below = false, above = false;
      for (std::size_t i = 0; i < n; ++i) {
        below = below || (kept[i] && o.at(i, k) == Rel::Lt);
        above = above || (kept[i] && o.at(k, i) == Rel::Lt);
      }
      return below && above;
    };
    std::vector<Box> parts{b};
    for (std::size_t k = 0; k < n; ++k) {
      if (kept[k] || !chained(k)) continue;
      std::vector<Box> next;
      for (const auto& p : parts)
        for (auto x = p.dim[k].lo; x <= p.dim[k].hi; ++x) {
          Box q = p;
          q.dim[k] = {x, x};
          if (tighten(q, o)) next.push_back(std::move(q));
        }
      parts = std::move(next);
    }
    Order o2(n);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t u = 0; u < n; ++u)
        if (pre[t] >= 0 && pre[u] >= 0)
          o2.relate(t, u, o.at(static_cast<std::size_t>(pre[t]), static_cast<std::size_t>(pre[u])));
    Region r{o2, {}};
    for (const auto& p : parts) {
      Box b2;
      for (std::size_t t = 0; t < n; ++t)
        b2.dim.push_back(pre[t] >= 0 ? p.dim[static_cast<std::size_t>(pre[t])] : Interval{0, sp.d[t]});
      r.boxes.push_back(std::move(b2));
    }
    if (!r.boxes.empty()) out.push_back(std::move(r));
  });
}

SymbolicSet eff_reset(const TimerSpace& sp, const std::vector<bool>& reset, const SymbolicSet& s) {
  return per_box(s, [&](const Order& o, const Box& b, std::vector<Region>& out) {
    Box b2 = b;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      if (!reset[i]) continue;
      if (!b2.dim[i].contains(sp.d[i])) return;
      b2.dim[i] = {sp.d[i], sp.d[i]};
    }
    out.push_back(Region{o, {std::move(b2)}});
  });
}

// ---- set operations ---------------------------------------------------------------

SymbolicSet unite(const SymbolicSet& a, const SymbolicSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<Region> rs = a.regions();
  rs.insert(rs.end(), b.regions().begin(), b.regions().end());
  return SymbolicSet::normalized(std::move(rs));
}

SymbolicSet intersect(const SymbolicSet& a, const SymbolicSet& b) {
  std::vector<Region> rs;
  for (const auto& ra : a.regions())
    for (const auto& rb : b.regions()) {
      Order o = ra.order;
      for (std::size_t i = 0; i < o.size(); ++i)
        for (std::size_t j = 0; j < o.size(); ++j) o.relate(i, j, rb.order.at(i, j));
      if (!o.close()) continue;
      Region r{std::move(o), {}};
      for (const auto& x : ra.boxes)
        for (const auto& y : rb.boxes)
          if (auto m = meet(x, y)) r.boxes.push_back(std::move(*m));
      if (!r.boxes.empty()) rs.push_back(std::move(r));
    }
  return SymbolicSet::normalized(std::move(rs));
}

bool covered(const SymbolicSet& a, const SymbolicSet& b) {
  std::vector<Box> rest, pieces;
  for (const auto& ra : a.regions())
    for (const auto& x : ra.boxes) {
      rest.assign(1, x);
      for (const auto& rb : b.regions()) {
        if (!ra.order.implies(rb.order)) continue;
        for (const auto& y : rb.boxes) {
          for (std::size_t i = 0; i < rest.size();) {
            if (!intersects(rest[i], y)) {
              ++i;
              continue;
            }
            subtract(rest[i], y, pieces);
            rest[i] = std::move(rest.back());
            rest.pop_back();
          }
          for (auto& p : pieces) rest.push_back(std::move(p));
          pieces.clear();
          if (rest.empty()) break;
        }
        if (rest.empty()) break;
      }
      for (auto& r : rest)
        if (tighten(r, ra.order)) return false;
    }
  return true;
}

// ---- approximation -------------------------------------------------------------

namespace {

struct Band {
  std::uint32_t lo, hi;
  bool applies(const Interval& iv) const {
    const bool meets = std::max(iv.lo, lo) <= std::min(iv.hi, hi);
    const bool inside = iv.lo <= lo && hi <= iv.hi;
    return meets && !inside;
  }
};

std::optional<Band> band(std::uint32_t d, std::uint32_t k) {
  if (k > d || k > d - k) return std::nullopt;
  return Band{k, d - k};
}

}  // namespace

SymbolicSet over(const TimerSpace& sp, const SymbolicSet& s, std::uint32_t k) {
  return per_box(s, [&](const Order& o, const Box& b, std::vector<Region>& out) {
    Box b2 = b;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const auto bd = band(sp.d[i], k);
      if (!bd || !bd->applies(b2.dim[i])) continue;
      b2.dim[i] = {std::min(b2.dim[i].lo, bd->lo), std::max(b2.dim[i].hi, bd->hi)};
    }
    out.push_back(Region{o, {std::move(b2)}});
  });
}

SymbolicSet under(const TimerSpace& sp, const SymbolicSet& s, std::uint32_t k) {
  return per_box(s, [&](const Order& o, const Box& b, std::vector<Region>& out) {
    std::vector<Box> parts{b};
    for (std::size_t i = 0; i < sp.size(); ++i) {
      const auto bd = band(sp.d[i], k);
      if (!bd || !bd->applies(b.dim[i])) continue;
      std::vector<Box> next;
      for (const auto& p : parts) {
        const auto iv = p.dim[i];
        if (iv.lo < bd->lo) {
          Box q = p;
          q.dim[i].hi = std::min(iv.hi, bd->lo - 1);
          next.push_back(std::move(q));
        }
        if (iv.hi > bd->hi) {
          Box q = p;
          q.dim[i].lo = std::max(iv.lo, bd->hi + 1);
          next.push_back(std::move(q));
        }
      }
      parts = std::move(next);
    }
    if (!parts.empty()) out.push_back(Region{o, std::move(parts)});
  });
}

std::vector<std::vector<std::uint32_t>> denote(const TimerSpace& sp, const SymbolicSet& s, std::size_t budget) {
  std::size_t total = 1;
  for (auto d : sp.d) {
    total *= d + 1;
    if (total > budget) throw std::length_error("valuation space exceeds budget");
  }
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> v(sp.size(), 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < sp.size(); ++i) {
      v[i] = static_cast<std::uint32_t>(c % (sp.d[i] + 1));
      c /= sp.d[i] + 1;
    }
    if (s.contains(v)) out.push_back(v);
  }
  return out;
}

}  // namespace tgs
