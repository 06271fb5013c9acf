#include "tgs/spec.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <set>

namespace tgs {

bool Spec::is_input(const std::string& p) const {
  return std::binary_search(inputs.begin(), inputs.end(), p);
}
bool Spec::is_output(const std::string& p) const {
  return std::binary_search(outputs.begin(), outputs.end(), p);
}

namespace {

enum class Tok { Id, Nat, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

const std::set<std::string, std::less<>> kReserved = {"X", "F", "G", "W", "U", "true", "false",
                                                      "INPUTS", "OUTPUTS", "ASSUME", "GUARANTEE"};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      t.kind = Tok::Id;
      t.text = std::string(s.substr(i, j - i));
      adv(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Nat;
      t.text = std::string(s.substr(i, j - i));
      adv(j - i);
    } else {
      static const char* const multi[] = {"<->", "->", "&&", "||", "<="};
      std::string p;
      for (const char* m : multi)
        if (s.substr(i).starts_with(m)) {
          p = m;
          break;
        }
      if (p.empty()) {
        if (std::string_view(";,()[]!").find(c) == std::string_view::npos)
          throw SpecError(std::string("unexpected character '") + c + "'", line, col);
        p = std::string(1, c);
      }
      t.kind = Tok::Punct;
      t.text = p;
      adv(p.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// Surface syntax before NNF conversion.
struct Surf {
  enum Op { Const, Id, Not, And, Or, Imp, Iff, X, F, G, W, U } op;
  bool value = false;                 // Const
  std::string name;                   // Id
  std::optional<std::uint64_t> bound;  // temporal operators
  std::unique_ptr<Surf> a, b;
  int line = 0, col = 0;
};
using SurfP = std::unique_ptr<Surf>;

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Spec spec() {
    Spec s;
    expect_kw("INPUTS");
    s.inputs = idlist();
    expect_kw("OUTPUTS");
    s.outputs = idlist();
    for (const auto& p : s.inputs)
      if (std::binary_search(s.outputs.begin(), s.outputs.end(), p))
        throw SpecError("proposition '" + p + "' declared as both input and output", 1, 1);
    inputs_ = s.inputs;
    outputs_ = s.outputs;
    while (is_kw("ASSUME")) {
      next();
      const Token& at = peek();
      Formula f = cfold(to_nnf(*formula(), false));
      expect(";");
      std::vector<Formula> parts;
      if (f.kind() == Kind::And)
        parts.assign(f.children().begin(), f.children().end());
      else
        parts.push_back(f);
      for (auto& p : parts) {
        const bool tracked = p.kind() == Kind::Weak && p.rhs().is_false() && fully_bounded(p.lhs());
        if (!tracked && !fully_bounded(p))
          throw SpecError("assumption body must be fully bounded: " + to_string(p), at.line, at.col);
        if (!p.is_true()) s.assumptions.push_back(p);
      }
    }
    expect_kw("GUARANTEE");
    s.guarantee = to_nnf(*formula(), false);
    expect(";");
    if (peek().kind != Tok::End) fail("trailing input after GUARANTEE");
    return s;
  }

  Formula single(const std::vector<std::string>& in, const std::vector<std::string>& out) {
    inputs_ = in;
    outputs_ = out;
    std::sort(inputs_.begin(), inputs_.end());
    std::sort(outputs_.begin(), outputs_.end());
    Formula f = to_nnf(*formula(), false);
    if (peek().kind == Tok::Punct && peek().text == ";") next();
    if (peek().kind != Tok::End) fail("trailing input after formula");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> inputs_, outputs_;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SpecError(msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"), t.line, t.col);
  }
  bool is_kw(std::string_view k) const { return peek().kind == Tok::Id && peek().text == k; }
  bool is_p(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  void expect_kw(std::string_view k) {
    if (!is_kw(k)) fail("expected " + std::string(k));
    next();
  }
  void expect(std::string_view p) {
    if (!is_p(p)) fail("expected '" + std::string(p) + "'");
    next();
  }

  std::vector<std::string> idlist() {
    std::vector<std::string> ids;
    while (!is_p(";")) {
      if (is_p(",")) {
        next();
        continue;
      }
      const Token& t = peek();
      if (t.kind != Tok::Id || kReserved.contains(t.text)) fail("expected proposition name");
      ids.push_back(t.text);
      next();
    }
    next();
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) fail("duplicate proposition");
    return ids;
  }

  SurfP node(Surf::Op op, const Token& at) {
    auto s = std::make_unique<Surf>();
    s->op = op;
    s->line = at.line;
    s->col = at.col;
    return s;
  }
  SurfP bin(Surf::Op op, const Token& at, SurfP a, SurfP b) {
    auto s = node(op, at);
    s->a = std::move(a);
    s->b = std::move(b);
    return s;
  }

  std::uint64_t nat() {
    if (peek().kind != Tok::Nat) fail("expected a natural number");
    const std::string& t = peek().text;
    if (t.size() > 9) fail("bound too large");
    const std::uint64_t v = std::stoull(t);
    next();
    return v;
  }

  SurfP formula() {
    const Token at = peek();
    SurfP l = impl();
    while (is_p("<->")) {
      next();
      l = bin(Surf::Iff, at, std::move(l), impl());
    }
    return l;
  }
  SurfP impl() {
    const Token at = peek();
    SurfP l = disj();
    if (is_p("->")) {
      next();
      return bin(Surf::Imp, at, std::move(l), impl());
    }
    return l;
  }
  SurfP disj() {
    const Token at = peek();
    SurfP l = conj();
    while (is_p("||")) {
      next();
      l = bin(Surf::Or, at, std::move(l), conj());
    }
    return l;
  }
  SurfP conj() {
    const Token at = peek();
    SurfP l = unary();
    while (is_p("&&")) {
      next();
      l = bin(Surf::And, at, std::move(l), unary());
    }
    return l;
  }
  SurfP unary() {
    const Token at = peek();
    if (is_p("!")) {
      next();
      auto s = node(Surf::Not, at);
      s->a = unary();
      return s;
    }
    if (is_kw("X")) {
      next();
      auto s = node(Surf::X, at);
      s->bound = 1;
      if (is_p("[")) {
        next();
        s->bound = nat();
        expect("]");
      }
      s->a = unary();
      return s;
    }
    if (is_kw("F") || is_kw("G")) {
      const bool f = is_kw("F");
      next();
      auto s = node(f ? Surf::F : Surf::G, at);
      if (is_p("[")) {
        next();
        expect("<=");
        s->bound = nat();
        expect("]");
      } else if (f) {
        fail("F requires a bound [<=n]");
      }
      s->a = unary();
      return s;
    }
    SurfP a = atom();
    if (is_kw("W") || is_kw("U")) {
      const Token op = peek();
      next();
      auto s = node(op.text == "W" ? Surf::W : Surf::U, op);
      if (is_p("[")) {
        next();
        expect("<=");
        s->bound = nat();
        expect("]");
      } else if (s->op == Surf::U) {
        fail("U requires a bound [<=n]");
      }
      s->a = std::move(a);
      s->b = unary();
      return s;
    }
    return a;
  }
  SurfP atom() {
    const Token at = peek();
    if (is_p("(")) {
      next();
      SurfP f = formula();
      expect(")");
      return f;
    }
    if (is_kw("true") || is_kw("false")) {
      auto s = node(Surf::Const, at);
      s->value = at.text == "true";
      next();
      return s;
    }
    if (at.kind == Tok::Id && !kReserved.contains(at.text)) {
      auto s = node(Surf::Id, at);
      s->name = at.text;
      next();
      return s;
    }
    fail("expected a formula");
  }

  Formula to_nnf(const Surf& s, bool neg) const {
    auto err = [&](const std::string& m) -> SpecError { return SpecError(m, s.line, s.col); };
    switch (s.op) {
      case Surf::Const:
        return Formula::constant(s.value != neg);
      case Surf::Id:
        if (!std::binary_search(inputs_.begin(), inputs_.end(), s.name) &&
            !std::binary_search(outputs_.begin(), outputs_.end(), s.name))
          throw err("undeclared proposition '" + s.name + "'");
        return Formula::lit(s.name, !neg);
      case Surf::Not:
        return to_nnf(*s.a, !neg);
      case Surf::And:
      case Surf::Or: {
        std::vector<Formula> k{to_nnf(*s.a, neg), to_nnf(*s.b, neg)};
        return (s.op == Surf::And) != neg ? Formula::conj(std::move(k)) : Formula::disj(std::move(k));
      }
      case Surf::Imp: {
        // a -> b == !a || b
        if (!neg) return Formula::disj({to_nnf(*s.a, true), to_nnf(*s.b, false)});
        return Formula::conj({to_nnf(*s.a, false), to_nnf(*s.b, true)});
      }
      case Surf::Iff: {
        Formula pa = to_nnf(*s.a, false), na = to_nnf(*s.a, true);
        Formula pb = to_nnf(*s.b, false), nb = to_nnf(*s.b, true);
        if (!neg) return Formula::disj({Formula::conj({pa, pb}), Formula::conj({na, nb})});
        return Formula::disj({Formula::conj({pa, nb}), Formula::conj({na, pb})});
      }
      case Surf::X:
        if (*s.bound == 0) return to_nnf(*s.a, neg);
        return Formula::next(Num{*s.bound}, to_nnf(*s.a, neg));
      case Surf::F:
        if (!neg) return Formula::eventually(Num{*s.bound}, to_nnf(*s.a, false));
        return bglobally(*s.bound, to_nnf(*s.a, true));
      case Surf::G:
        if (!s.bound) {
          if (neg) throw err("negation of unbounded G is not expressible");
          return globally(to_nnf(*s.a, false));
        }
        if (!neg) return bglobally(*s.bound, to_nnf(*s.a, false));
        return Formula::eventually(Num{*s.bound}, to_nnf(*s.a, true));
      case Surf::W: {
        if (!s.bound) {
          if (neg) throw err("negation of unbounded W is not expressible");
          return Formula::weak(to_nnf(*s.a, false), to_nnf(*s.b, false));
        }
        if (!neg) return Formula::bweak(Num{*s.bound}, to_nnf(*s.a, false), to_nnf(*s.b, false));
        // !(a W[n] b) == (!b) U[n] (!a && !b)
        Formula nb = to_nnf(*s.b, true);
        return buntil(*s.bound, nb, Formula::conj({to_nnf(*s.a, true), nb}));
      }
      case Surf::U: {
        if (!neg) return buntil(*s.bound, to_nnf(*s.a, false), to_nnf(*s.b, false));
        // !((a W[n] b) && F[n] b) == !(a W[n] b) || G[n] !b
        Formula nb = to_nnf(*s.b, true);
        return Formula::disj({buntil(*s.bound, nb, Formula::conj({to_nnf(*s.a, true), nb})),
                              bglobally(*s.bound, nb)});
      }
    }
    throw err("internal: unknown node");
  }
};

}  // namespace

Spec parse_spec(std::string_view text) {
  Spec s = Parser(text).spec();
  s.guarantee = cfold(s.guarantee);
  for (auto& a : s.assumptions) a = cfold(a);
  return s;
}

Formula parse_formula(std::string_view text, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs) {
  return cfold(Parser(text).single(inputs, outputs));
}

std::string write_spec(const Spec& s) {
  std::string out = "INPUTS";
  for (const auto& p : s.inputs) out += " " + p;
  out += ";\nOUTPUTS";
  for (const auto& p : s.outputs) out += " " + p;
  out += ";\n";
  for (const auto& a : s.assumptions) out += "ASSUME " + to_string(a) + ";\n";
  out += "GUARANTEE " + to_string(s.guarantee) + ";\n";
  return out;
}

}  // namespace tgs
