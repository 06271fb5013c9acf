#include "tgs/semantics.hpp"

#include <stdexcept>

namespace tgs {

namespace {

std::uint64_t num(const Formula& f) {
  if (auto n = std::get_if<Num>(&f.bound())) return n->value;
  throw std::invalid_argument("expand: timer bound in " + to_string(f));
}

Formula fold2(Kind k, Formula a, Formula b) {
  std::vector<Formula> v{std::move(a), std::move(b)};
  return cfold_top(k == Kind::And ? Formula::conj(std::move(v)) : Formula::disj(std::move(v)));
}

}  // namespace

Formula expand(const Formula& f, const Letter& m) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Lit:
      return Formula::constant(m.contains(f.name()) == f.positive());
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(expand(k, m));
      return cfold_top(f.kind() == Kind::And ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids)));
    }
    case Kind::Next: {
      const auto n = num(f);
      if (n == 0) return expand(f.sub(), m);
      return Formula::next(Num{n - 1}, f.sub());
    }
    case Kind::Eventually: {
      const auto n = num(f);
      if (n == 0) return expand(f.sub(), m);
      return fold2(Kind::Or, expand(f.sub(), m), Formula::eventually(Num{n - 1}, f.sub()));
    }
    case Kind::BWeak: {
      const auto n = num(f);
      if (n == 0) return fold2(Kind::Or, expand(f.rhs(), m), expand(f.lhs(), m));
      return fold2(Kind::Or, expand(f.rhs(), m),
                   fold2(Kind::And, expand(f.lhs(), m), Formula::bweak(Num{n - 1}, f.lhs(), f.rhs())));
    }
    case Kind::Weak:
      return fold2(Kind::Or, expand(f.rhs(), m), fold2(Kind::And, expand(f.lhs(), m), f));
  }
  return f;
}

bool violated_within(const Formula& f, std::span<const Letter> prefix) {
  Formula cur = f;
  if (cur.is_false()) return true;
  for (const auto& m : prefix) {
    cur = expand(cur, m);
    if (cur.is_false()) return true;
  }
  return false;
}

std::size_t Lasso::normalize(std::size_t pos) const {
  if (pos < stem.size()) return pos;
  return stem.size() + (pos - stem.size()) % loop.size();
}

Lasso Lasso::suffix(std::size_t k) const {
  Lasso w;
  const std::size_t p = normalize(k);
  if (p < stem.size()) {
    w.stem.assign(stem.begin() + static_cast<std::ptrdiff_t>(p), stem.end());
    w.loop = loop;
  } else {
    const std::size_t r = p - stem.size();
    w.loop.assign(loop.begin() + static_cast<std::ptrdiff_t>(r), loop.end());
    w.loop.insert(w.loop.end(), loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(r));
  }
  return w;
}

bool holds(const Formula& f, const Lasso& w, std::size_t pos) {
  pos = w.normalize(pos);
  switch (f.kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Lit: return w.at(pos).contains(f.name()) == f.positive();
    case Kind::And:
      for (const auto& k : f.children())
        if (!holds(k, w, pos)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : f.children())
        if (holds(k, w, pos)) return true;
      return false;
    case Kind::Next:
      return holds(f.sub(), w, pos + num(f));
    case Kind::Eventually: {
      const auto n = num(f);
      for (std::uint64_t j = 0; j <= n; ++j)
        if (holds(f.sub(), w, pos + j)) return true;
      return false;
    }
    case Kind::BWeak:
    case Kind::Weak: {
      // beyond stem+loop+1 positions the suffixes repeat, so an unbounded W is settled
      const std::uint64_t horizon =
          f.kind() == Kind::BWeak ? num(f) : w.stem.size() + w.loop.size();
      for (std::uint64_t j = 0; j <= horizon; ++j) {
        if (holds(f.rhs(), w, pos + j)) return true;
        if (!holds(f.lhs(), w, pos + j)) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace tgs
