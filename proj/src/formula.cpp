#include "tgs/formula.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace tgs {

std::string to_string(TimerId t) {
  return "t" + std::to_string(t.index) + "^" + std::to_string(t.duration);
}

struct Formula::Node {
  Kind kind = Kind::True;
  bool positive = true;
  std::string name;
  Bound bound{Num{0}};
  std::vector<Formula> kids;
  std::size_t hash = 0;
  bool timer_bound = false;  // some timer occurs in this subtree

  static Node of(Kind k) {
    Node n;
    n.kind = k;
    return n;
  }
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t bound_hash(const Bound& b) {
  if (auto n = std::get_if<Num>(&b)) return std::hash<std::uint64_t>{}(n->value);
  auto t = std::get<TimerId>(b);
  return mix(0x51ed27, (std::size_t(t.duration) << 20) ^ t.index);
}

}  // namespace

Formula Formula::make(Node n) {
  std::size_t h = std::size_t(n.kind) * 0x100000001b3ULL;
  if (n.kind == Kind::Lit) {
    h = mix(h, std::hash<std::string>{}(n.name));
    h = mix(h, n.positive ? 1 : 2);
  }
  if (n.kind == Kind::Next || n.kind == Kind::Eventually || n.kind == Kind::BWeak) {
    h = mix(h, bound_hash(n.bound));
    if (std::holds_alternative<TimerId>(n.bound)) n.timer_bound = true;
  }
  for (const auto& k : n.kids) {
    h = mix(h, k.hash());
    n.timer_bound = n.timer_bound || k.node_->timer_bound;
  }
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::top() {
  static const Formula t = make(Node::of(Kind::True));
  return t;
}

Formula Formula::bottom() {
  static const Formula f = make(Node::of(Kind::False));
  return f;
}

Formula::Formula() : Formula(top()) {}

Formula Formula::lit(std::string name, bool positive) {
  Node n = Node::of(Kind::Lit);
  n.name = std::move(name);
  n.positive = positive;
  return make(std::move(n));
}

Formula Formula::conj(std::vector<Formula> kids) {
  Node n = Node::of(Kind::And);
  n.kids = std::move(kids);
  return make(std::move(n));
}

Formula Formula::disj(std::vector<Formula> kids) {
  Node n = Node::of(Kind::Or);
  n.kids = std::move(kids);
  return make(std::move(n));
}

Formula Formula::next(Bound b, Formula f) {
  Node n = Node::of(Kind::Next);
  n.bound = b;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

Formula Formula::eventually(Bound b, Formula f) {
  Node n = Node::of(Kind::Eventually);
  n.bound = b;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

Formula Formula::bweak(Bound b, Formula lhs, Formula rhs) {
  Node n = Node::of(Kind::BWeak);
  n.bound = b;
  n.kids = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::weak(Formula lhs, Formula rhs) {
  Node n = Node::of(Kind::Weak);
  n.kids = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
bool Formula::positive() const { return node_->positive; }
const Bound& Formula::bound() const { return node_->bound; }
std::span<const Formula> Formula::children() const { return node_->kids; }
std::size_t Formula::hash() const { return node_->hash; }
bool Formula::has_timer_bound() const { return node_->timer_bound; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  switch (x.kind) {
    case Kind::True:
    case Kind::False:
      return std::strong_ordering::equal;
    case Kind::Lit:
      if (auto c = x.name <=> y.name; c != 0) return c;
      return (!x.positive) <=> (!y.positive);
    case Kind::Next:
    case Kind::Eventually:
    case Kind::BWeak:
      if (auto c = x.bound <=> y.bound; c != 0) return c;
      break;
    default:
      break;
  }
  const std::size_t n = std::min(x.kids.size(), y.kids.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
  return x.kids.size() <=> y.kids.size();
}

namespace {

std::string bound_text(const Bound& b, bool le) {
  if (auto n = std::get_if<Num>(&b)) return (le ? "[<=" : "[") + std::to_string(n->value) + "]";
  return "[" + to_string(std::get<TimerId>(b)) + "]";
}

void print(const Formula& f, std::string& out);

// A prefix operator on the left of W would swallow the W when read back.
void print_lhs(const Formula& f, std::string& out) {
  const bool wrap = (f.kind() == Kind::Lit && !f.positive()) || f.kind() == Kind::Next || f.kind() == Kind::Eventually;
  if (wrap) out += '(';
  print(f, out);
  if (wrap) out += ')';
}

void print(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Lit:
      if (!f.positive()) out += '!';
      out += f.name();
      return;
    case Kind::And:
    case Kind::Or: {
      const char* sep = f.kind() == Kind::And ? " && " : " || ";
      out += '(';
      bool first = true;
      for (const auto& k : f.children()) {
        if (!first) out += sep;
        first = false;
        print(k, out);
      }
      out += ')';
      return;
    }
    case Kind::Next:
      out += "X" + bound_text(f.bound(), false) + " ";
      print(f.sub(), out);
      return;
    case Kind::Eventually:
      out += "F" + bound_text(f.bound(), true) + " ";
      print(f.sub(), out);
      return;
    case Kind::BWeak:
      out += '(';
      print_lhs(f.lhs(), out);
      out += " W" + bound_text(f.bound(), true) + " ";
      print(f.rhs(), out);
      out += ')';
      return;
    case Kind::Weak:
      out += '(';
      print_lhs(f.lhs(), out);
      out += " W ";
      print(f.rhs(), out);
      out += ')';
      return;
  }
}

bool is_junction(Kind k) { return k == Kind::And || k == Kind::Or; }

// Normalize one And/Or level whose children are already normal.
Formula junction(Kind k, std::vector<Formula> in) {
  const Kind unit = k == Kind::And ? Kind::True : Kind::False;
  const Kind zero = k == Kind::And ? Kind::False : Kind::True;
  std::vector<Formula> kids;
  kids.reserve(in.size());
  for (auto& c : in) {
    if (c.kind() == zero) return Formula::constant(zero == Kind::True);
    if (c.kind() == unit) continue;
    if (c.kind() == k) {
      for (const auto& g : c.children()) kids.push_back(g);
    } else {
      kids.push_back(std::move(c));
    }
  }
  std::sort(kids.begin(), kids.end());
  kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  if (kids.empty()) return Formula::constant(unit == Kind::True);
  if (kids.size() == 1) return kids.front();
  return k == Kind::And ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
}

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  switch (f.kind()) {
    case Kind::And: return junction(Kind::And, std::move(kids));
    case Kind::Or: return junction(Kind::Or, std::move(kids));
    case Kind::Next: return Formula::next(f.bound(), std::move(kids[0]));
    case Kind::Eventually: return Formula::eventually(f.bound(), std::move(kids[0]));
    case Kind::BWeak: return Formula::bweak(f.bound(), std::move(kids[0]), std::move(kids[1]));
    case Kind::Weak: return Formula::weak(std::move(kids[0]), std::move(kids[1]));
    default: return f;
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string s;
  print(f, s);
  return s;
}

Formula cfold(const Formula& f) {
  if (f.children().empty()) return f;
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& k : f.children()) kids.push_back(cfold(k));
  return rebuild(f, std::move(kids));
}

Formula cfold_top(const Formula& f) {
  if (!is_junction(f.kind())) return f;
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& k : f.children()) kids.push_back(cfold_top(k));
  return junction(f.kind(), std::move(kids));
}

namespace {

bool atom_implies(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a.kind() == Kind::Weak && b.kind() == Kind::BWeak)
    return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  if (a.kind() != b.kind()) return false;
  const auto* ta = std::get_if<TimerId>(&a.bound());
  const auto* tb = std::get_if<TimerId>(&b.bound());
  const auto* na = std::get_if<Num>(&a.bound());
  const auto* nb = std::get_if<Num>(&b.bound());
  switch (a.kind()) {
    case Kind::Eventually:
      // shorter deadline implies longer; same-duration timers are ordered by index
      if (!(a.sub() == b.sub())) return false;
      if (ta && tb) return ta->duration == tb->duration && ta->index <= tb->index;
      if (na && nb) return na->value <= nb->value;
      return false;
    case Kind::BWeak:
      if (!(a.lhs() == b.lhs() && a.rhs() == b.rhs())) return false;
      if (ta && tb) return ta->duration == tb->duration && ta->index >= tb->index;
      if (na && nb) return na->value >= nb->value;
      return false;
    default:
      return false;
  }
}

}  // namespace

bool implies(const Formula& a, const Formula& b) {
  if (a == b || b.is_true() || a.is_false()) return true;
  if (b.kind() == Kind::And) {
    for (const auto& k : b.children())
      if (!implies(a, k)) return false;
    return true;
  }
  if (a.kind() == Kind::Or) {
    for (const auto& k : a.children())
      if (!implies(k, b)) return false;
    return true;
  }
  if (a.kind() == Kind::And) {
    for (const auto& k : a.children())
      if (implies(k, b)) return true;
  }
  if (b.kind() == Kind::Or) {
    for (const auto& k : b.children())
      if (implies(a, k)) return true;
  }
  return atom_implies(a, b);
}

namespace {

Formula opt_step(const Formula& f) {
  if (!is_junction(f.kind())) return f;
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& k : f.children()) kids.push_back(opt_step(k));
  Formula g = junction(f.kind(), std::move(kids));
  if (!is_junction(g.kind())) return g;
  const bool is_and = g.kind() == Kind::And;
  auto cs = g.children();
  // complementary top-level literals
  for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
    if (cs[i].kind() != Kind::Lit) continue;
    for (std::size_t j = i + 1; j < cs.size() && cs[j].kind() == Kind::Lit; ++j)
      if (cs[j].name() == cs[i].name() && cs[j].positive() != cs[i].positive())
        return Formula::constant(!is_and);
  }
  // absorption: in a conjunction drop anything implied by a sibling,
  // in a disjunction drop anything implying a sibling
  std::vector<bool> gone(cs.size(), false);
  for (std::size_t y = 0; y < cs.size(); ++y) {
    for (std::size_t x = 0; x < cs.size(); ++x) {
      if (x == y || gone[x]) continue;
      const Formula& strong = is_and ? cs[x] : cs[y];
      const Formula& weak = is_and ? cs[y] : cs[x];
      if (!implies(strong, weak)) continue;
      const bool back = is_and ? implies(cs[y], cs[x]) : implies(cs[x], cs[y]);
      if (back && cs[y] < cs[x]) continue;  // keep the smaller of two equivalent ones
      gone[y] = true;
      break;
    }
  }
  std::vector<Formula> keep;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (!gone[i]) keep.push_back(cs[i]);
  return junction(g.kind(), std::move(keep));
}

}  // namespace

Formula opt(const Formula& f) {
  Formula cur = cfold(f);
  for (;;) {
    Formula nxt = opt_step(cur);
    if (nxt == cur) return cur;
    cur = nxt;
  }
}

Formula negate(const Formula& f) {
  switch (f.kind()) {
    case Kind::True: return Formula::bottom();
    case Kind::False: return Formula::top();
    case Kind::Lit: return Formula::lit(f.name(), !f.positive());
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(negate(k));
      return f.kind() == Kind::And ? Formula::disj(std::move(kids)) : Formula::conj(std::move(kids));
    }
    case Kind::Next:
      return Formula::next(f.bound(), negate(f.sub()));
    case Kind::Eventually:
      return Formula::bweak(f.bound(), negate(f.sub()), Formula::bottom());
    case Kind::BWeak: {
      if (std::holds_alternative<TimerId>(f.bound()))
        throw std::invalid_argument("cannot negate a timer-bounded operator");
      if (f.rhs().is_false()) return Formula::eventually(f.bound(), negate(f.lhs()));
      // !(a W[n] b) = (!b) U[n] (!a && !b)
      Formula nb = negate(f.rhs());
      Formula both = Formula::conj({negate(f.lhs()), nb});
      return Formula::conj({Formula::bweak(f.bound(), nb, both), Formula::eventually(f.bound(), both)});
    }
    case Kind::Weak:
      throw std::invalid_argument("negation of unbounded W is not expressible");
  }
  return f;
}

std::set<TimerId> timers_of(const Formula& f) {
  std::set<TimerId> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (!g.has_timer_bound()) return;
    if (auto t = std::get_if<TimerId>(&g.bound());
        t && (g.kind() == Kind::Next || g.kind() == Kind::Eventually || g.kind() == Kind::BWeak))
      out.insert(*t);
    for (const auto& k : g.children()) go(k);
  };
  go(f);
  return out;
}

std::set<std::string> props_of(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == Kind::Lit) out.insert(g.name());
    for (const auto& k : g.children()) go(k);
  };
  go(f);
  return out;
}

bool fully_bounded(const Formula& f) {
  if (f.kind() == Kind::Weak) return false;
  for (const auto& k : f.children())
    if (!fully_bounded(k)) return false;
  return true;
}

std::set<std::pair<std::string, bool>> top_literals(const Formula& f) {
  std::set<std::pair<std::string, bool>> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == Kind::Lit) out.emplace(g.name(), g.positive());
    if (is_junction(g.kind()))
      for (const auto& k : g.children()) go(k);
  };
  go(f);
  return out;
}

namespace {

Formula subst(const Formula& f, const std::string& ap, bool value) {
  if (f.kind() == Kind::Lit)
    return f.name() == ap ? Formula::constant(f.positive() == value) : f;
  if (!is_junction(f.kind())) return f;
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& k : f.children()) kids.push_back(subst(k, ap, value));
  return junction(f.kind(), std::move(kids));
}

}  // namespace

Formula substitute_top(const Formula& f, const std::string& ap, bool value) {
  return subst(f, ap, value);
}

Formula globally(Formula f) { return Formula::weak(std::move(f), Formula::bottom()); }

Formula bglobally(std::uint64_t n, Formula f) {
  return Formula::bweak(Num{n}, std::move(f), Formula::bottom());
}

Formula buntil(std::uint64_t n, Formula a, Formula b) {
  return Formula::conj({Formula::bweak(Num{n}, std::move(a), b), Formula::eventually(Num{n}, b)});
}

Formula implies_f(Formula a, Formula b) { return Formula::disj({negate(a), std::move(b)}); }

}  // namespace tgs
