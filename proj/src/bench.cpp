#include "tgs/bench.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace tgs::bench {

namespace {

struct FamilyInfo {
  Family f;
  const char* token;
  const char* title;  // name prefix in reports
  std::size_t arity;
};

constexpr std::array<FamilyInfo, 14> kFamilies{{
    {Family::Clean, "Clean", "Clean", 1},
    {Family::CleanC, "Clean_C", "Clean_C", 1},
    {Family::CleanH, "Clean_H", "Clean_H", 1},
    {Family::CleanN, "Clean_N", "Clean_N", 1},
    {Family::Coffee, "Coffee", "Coffee", 1},
    {Family::CoffeeC, "Coffee_C", "Coffee_C", 1},
    {Family::ConvBelt, "conv-belt", "conv-belt", 0},
    {Family::RoboCam, "robo-cam", "robo-cam", 0},
    {Family::Rail2, "rail2", "rail", 2},
    {Family::Rail3, "rail3", "rail", 3},
    {Family::PhiA, "phiA", "phiA", 1},
    {Family::PhiB, "phiB", "phiB", 1},
    {Family::PhiC, "phiC", "phiC", 1},
    {Family::PhiD, "phiD", "phiD", 1},
}};

const FamilyInfo& info(Family f) {
  for (const auto& i : kFamilies)
    if (i.f == f) return i;
  throw std::logic_error("unknown family");
}

std::array<Family, kFamilies.size()> family_list() {
  std::array<Family, kFamilies.size()> out{};
  for (std::size_t i = 0; i < kFamilies.size(); ++i) out[i] = kFamilies[i].f;
  return out;
}

const auto kFamilyList = family_list();

bool office_family(Family f) {
  switch (f) {
    case Family::Clean:
    case Family::CleanC:
    case Family::CleanH:
    case Family::CleanN:
    case Family::Coffee:
    case Family::CoffeeC: return true;
    default: return false;
  }
}

bool phi_family(Family f) {
  return f == Family::PhiA || f == Family::PhiB || f == Family::PhiC || f == Family::PhiD;
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw std::invalid_argument(fmt::format("not a natural number: '{}'", s));
  return v;
}

// Conjunction builder for the surface syntax; every conjunct is parenthesized.
class Conj {
 public:
  Conj& add(std::string f) {
    parts_.push_back(std::move(f));
    return *this;
  }
  Conj& add(const Conj& other) {
    parts_.insert(parts_.end(), other.parts_.begin(), other.parts_.end());
    return *this;
  }
  [[nodiscard]] const std::vector<std::string>& parts() const { return parts_; }
  [[nodiscard]] std::string str(std::string_view sep = " &&\n  ") const {
    if (parts_.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) out += sep;
      out += "(" + parts_[i] + ")";
    }
    return out;
  }

 private:
  std::vector<std::string> parts_;
};

std::string list(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : " ") + ids[i];
  return out;
}

std::string indexed(std::string_view base, std::uint32_t from, std::uint32_t to, std::string_view sep) {
  std::string out;
  for (auto i = from; i <= to; ++i) out += fmt::format("{}{}{}", i == from ? "" : sep, base, i);
  return out;
}

struct Text {
  std::vector<std::string> inputs, outputs;
  std::vector<std::string> assume;
  Conj guarantee;

  std::string str(const std::string& title) const {
    std::string out = "# " + title + "\n";
    out += "INPUTS" + list(inputs) + ";\n";
    out += "OUTPUTS" + list(outputs) + ";\n";
    for (const auto& a : assume) out += "ASSUME " + a + ";\n";
    out += "GUARANTEE\n  " + guarantee.str() + ";\n";
    return out;
  }
};

class Generator {
 public:
  explicit Generator(const BenchmarkId& id) : id_(id) {}

  Text run() const {
    const auto& p = id_.params;
    switch (id_.family) {
      case Family::Clean: return clean(p[0], false, false);
      case Family::CleanC: return clean(p[0], true, false);
      case Family::CleanH: return clean(p[0], false, true);
      case Family::CleanN: return clean_night(p[0]);
      case Family::Coffee: return coffee(p[0], false);
      case Family::CoffeeC: return coffee(p[0], true);
      case Family::ConvBelt: return conv_belt();
      case Family::RoboCam: return robo_cam();
      case Family::Rail2: return rail({p[0], p[0] + p[1]}, p[0] + p[1], p[0] == 2 && p[1] == 4 ? 100 : 120);
      case Family::Rail3: return rail({p[0], p[1], p[2]}, p[2], 120);
      case Family::PhiA: return phi_a(p[0]);
      case Family::PhiB: return phi_b(p[0]);
      case Family::PhiC: return phi_c(p[0]);
      case Family::PhiD: return phi_d(p[0]);
    }
    throw std::logic_error("unknown family");
  }

 private:
  const BenchmarkId& id_;

  std::uint64_t b(std::uint64_t bound) const { return id_.scale.apply(bound); }

  static std::string office(std::uint32_t i) { return fmt::format("office{}", i); }

  static std::vector<std::string> places() {
    return {"corridor", office(1), office(2), office(3), office(4)};
  }

  // start, position, mutex
  static Conj layout() {
    Conj c;
    c.add("corridor");
    c.add(fmt::format("G ({})", indexed("office", 1, 4, " || ").insert(0, "corridor || ")));
    const auto ps = places();
    for (const auto& x : ps) {
      std::string rest;
      for (const auto& y : ps)
        if (y != x) rest += (rest.empty() ? "!" : " && !") + y;
      c.add(fmt::format("G ({} -> ({}))", x, rest));
    }
    return c;
  }

  Conj clean_duration() const {
    Conj c;
    for (std::uint32_t i = 1; i <= 4; ++i)
      c.add(fmt::format("G (corridor -> X ({0} -> G[<={1}] {0}))", office(i), b(10)));
    return c;
  }

  Text clean(std::uint32_t n, bool charge, bool humans) const {
    Text t;
    t.outputs = places();
    t.guarantee.add(layout()).add(clean_duration());
    for (std::uint32_t i = 1; i <= n; ++i) t.guarantee.add(fmt::format("G F[<={}] {}", b(720), office(i)));
    if (charge) {
      t.outputs.push_back("charge");
      t.guarantee.add(fmt::format("G (!charge -> X (charge -> G[<={}] charge))", b(20)));
      t.guarantee.add("G (charge -> corridor)");
      t.guarantee.add(fmt::format("G F[<={}] charge", b(360)));
    }
    if (humans) {
      for (std::uint32_t i = 1; i <= 4; ++i) {
        t.inputs.push_back(fmt::format("human{}", i));
        t.guarantee.add(fmt::format("G (human{} -> !{})", i, office(i)));
      }
    }
    return t;
  }

  Text clean_night(std::uint32_t n) const {
    Text t;
    t.inputs = {"night"};
    t.outputs = places();
    t.assume.push_back(fmt::format("G (!night -> F[<={}] night)", b(720)));
    t.assume.push_back(fmt::format("G (!night -> X (night -> G[<={}] night))", b(720)));
    t.guarantee.add(layout()).add(clean_duration());
    for (std::uint32_t i = 1; i <= 4; ++i) t.guarantee.add(fmt::format("G (!night -> !{})", office(i)));
    for (std::uint32_t i = 1; i <= n; ++i)
      t.guarantee.add(fmt::format("G (!night -> X (night -> F[<={}] {}))", b(60), office(i)));
    return t;
  }

  Text coffee(std::uint32_t n, bool charge) const {
    Text t;
    for (std::uint32_t i = 1; i <= 4; ++i) t.inputs.push_back(fmt::format("request{}", i));
    t.outputs = places();
    t.outputs.push_back("makeCoffee");
    t.guarantee.add(layout());
    t.guarantee.add(fmt::format("G (!corridor -> X (corridor -> G[<={}] corridor))", b(120)));
    t.guarantee.add("G (makeCoffee -> office1)");
    t.guarantee.add(fmt::format("G (!makeCoffee -> X (makeCoffee -> G[<={}] makeCoffee))", b(180)));
    for (std::uint32_t i = 1; i <= n; ++i)
      t.guarantee.add(fmt::format("G (request{0} -> ((F[<={1}] makeCoffee) && (F[<={1}] {2})))", 5 - i, b(600),
                                  office(5 - i)));
    if (charge) {
      t.outputs.push_back("charge");
      t.guarantee.add(fmt::format("G (!charge -> X (charge -> ((G[<={0}] charge) && (F[<={0}] X !charge))))", b(1200)));
      t.guarantee.add(fmt::format("G (charge -> X (!charge -> ((G[<={0}] !charge) && (F[<={0}] X charge))))", b(21600)));
      t.guarantee.add("G (charge -> corridor)");
    }
    return t;
  }

  Text conv_belt() const {
    Text t;
    t.inputs = {"release", "resume", "stuck"};
    t.outputs = {"move", "stop"};
    t.assume.push_back("G ((stuck && X !stuck) <-> X release)");
    t.guarantee.add("G (move || stop)");
    t.guarantee.add("G !(move && stop)");
    t.guarantee.add("G (stuck -> stop)");
    t.guarantee.add(fmt::format("G (release -> G[<={}] stop)", b(2000)));
    t.guarantee.add(fmt::format("G ((resume && !stuck) -> F[<={}] (move W stuck))", b(3000)));
    return t;
  }

  Text robo_cam() const {
    Text t;
    t.inputs = {"move", "pick", "put"};
    t.outputs = {"off", "on"};
    t.assume.push_back("G !(pick && put)");
    t.assume.push_back("G !(pick && move)");
    t.assume.push_back("G !(put && move)");
    t.assume.push_back(fmt::format("G (pick -> X ((G[<={}] move) && (F[<={}] put)))", b(3000), b(3001)));
    t.assume.push_back(fmt::format("G (put -> X ((G[<={}] move) && (F[<={}] pick)))", b(3000), b(3001)));
    t.assume.push_back("pick");
    t.guarantee.add("G !(on <-> off)");
    t.guarantee.add(fmt::format("G (on -> F[<={}] !on)", b(4000)));
    t.guarantee.add(fmt::format("G ((F[<={}] pick) -> on)", b(1000)));
    t.guarantee.add(fmt::format("G ((F[<={}] put) -> on)", b(1000)));
    return t;
  }

  // arrive[i]: minutes until the train reaches crossing i+1; travel starts
  // after last minutes plus slack steps.
  Text rail(const std::vector<std::uint32_t>& arrive, std::uint32_t last, std::uint32_t slack) const {
    const auto n = static_cast<std::uint32_t>(arrive.size());
    Text t;
    for (std::uint32_t i = 1; i <= n; ++i) {
      t.inputs.push_back(fmt::format("closed{}", i));
      t.inputs.push_back(fmt::format("in{}", i));
      t.inputs.push_back(fmt::format("opened{}", i));
      t.inputs.push_back(fmt::format("transit{}", i));
      t.outputs.push_back(fmt::format("close{}", i));
      t.outputs.push_back(fmt::format("open{}", i));
    }
    t.inputs.push_back("travel");
    for (std::uint32_t i = 1; i <= n; ++i)
      t.assume.push_back(fmt::format("G[<={}] !in{}", b(60ull * arrive[i - 1]), i));
    t.assume.push_back(fmt::format("G[<={}] !travel", b(60ull * last + slack)));
    for (std::uint32_t i = 1; i <= n; ++i) t.assume.push_back(fmt::format("opened{}", i));
    t.assume.push_back("G (travel -> X travel)");
    t.assume.push_back(fmt::format("G (travel -> !({}))", indexed("in", 1, n, " || ")));
    for (std::uint32_t i = 1; i <= n; ++i) {
      t.assume.push_back(fmt::format("G !(opened{0} && closed{0})", i));
      t.assume.push_back(fmt::format("G !(transit{0} && closed{0})", i));
      t.assume.push_back(fmt::format("G !(transit{0} && opened{0})", i));
      t.assume.push_back(fmt::format("G (!transit{0} -> X (transit{0} -> G[<={1}] transit{0}))", i, b(60)));
      t.assume.push_back(fmt::format("G ((opened{0} && !close{0}) -> X opened{0})", i));
      t.assume.push_back(fmt::format("G ((opened{0} && close{0}) -> X (transit{0} && F[<={1}] X closed{0}))", i, b(60)));
      t.assume.push_back(fmt::format("G ((closed{0} && !open{0}) -> X closed{0})", i));
      t.assume.push_back(fmt::format("G ((closed{0} && open{0}) -> X (transit{0} && F[<={1}] X opened{0}))", i, b(60)));
    }
    for (std::uint32_t i = 1; i <= n; ++i) t.guarantee.add(fmt::format("G (in{0} -> closed{0})", i));
    for (std::uint32_t i = 1; i <= n; ++i) t.guarantee.add(fmt::format("G (travel -> F[<={}] opened{})", b(120), i));
    return t;
  }

  static std::string next(std::uint64_t n, const std::string& f) {
    return n == 0 ? f : fmt::format("X[{}] {}", n, f);
  }

  static Text phi_io(std::uint32_t n, std::uint32_t extra_inputs = 0) {
    Text t;
    for (std::uint32_t i = 0; i <= n + extra_inputs; ++i) t.inputs.push_back(fmt::format("u{}", i));
    for (std::uint32_t i = 0; i <= n; ++i) t.outputs.push_back(fmt::format("c{}", i));
    return t;
  }

  static Text phi_a(std::uint32_t n) {
    Text t = phi_io(n);
    for (std::uint32_t i = 0; i < n; ++i) t.guarantee.add(next(i * (i + 1ull) / 2, fmt::format("G c{}", i)));
    t.guarantee.add(next(n * (n + 1ull) / 2, fmt::format("G (c{0} || u{0})", n)));
    return t;
  }

  static Text phi_b(std::uint32_t n) {
    Text t = phi_io(n);
    for (std::uint32_t i = 0; i <= n; ++i)
      t.guarantee.add(next(i * (i + 1ull) / 2, fmt::format("G (c{0} || u{0})", i)));
    return t;
  }

  static Text phi_c(std::uint32_t n) {
    Text t = phi_io(n);
    t.guarantee.add("G c0");
    std::string any;
    for (std::uint32_t i = 0; i <= n; ++i)
      any += fmt::format("{}(G ({}))", i ? " || " : "", indexed("u", 0, i, " && "));
    t.guarantee.add(any);
    return t;
  }

  static Text phi_d(std::uint32_t n) {
    Text t = phi_io(n, 1);
    t.guarantee.add("c0");
    for (std::uint32_t i = 0; i <= n; ++i) t.guarantee.add(next(i, fmt::format("(u{} || u{})", i, i + 1)));
    return t;
  }
};

}  // namespace

const char* to_string(Family f) { return info(f).token; }

std::optional<Family> parse_family(std::string_view token) {
  for (const auto& i : kFamilies)
    if (token == i.token) return i.f;
  return std::nullopt;
}

std::span<const Family> all_families() { return kFamilyList; }

std::size_t arity(Family f) { return info(f).arity; }

Scale Scale::parse(std::string_view text) {
  Scale s;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    s.num = parse_u64(text.substr(0, slash));
    s.den = parse_u64(text.substr(slash + 1));
  } else {
    s.num = parse_u64(text);
  }
  if (s.num == 0 || s.den == 0) throw std::invalid_argument("scale must be positive");
  return s;
}

std::uint64_t Scale::apply(std::uint64_t bound) const {
  // ceil(bound * den / num)
  const auto scaled = (static_cast<unsigned __int128>(bound) * den + num - 1) / num;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(scaled));
}

std::string Scale::str() const { return den == 1 ? std::to_string(num) : fmt::format("{}/{}", num, den); }

void BenchmarkId::validate() const {
  const auto& fi = info(family);
  if (params.size() != fi.arity)
    throw std::invalid_argument(fmt::format("{} takes {} parameter(s), got {}", fi.token, fi.arity, params.size()));
  for (auto p : params)
    if (p == 0) throw std::invalid_argument(fmt::format("{}: parameters must be positive", fi.token));
  if (office_family(family) && params[0] > 4)
    throw std::invalid_argument(fmt::format("{}: at most 4 offices", fi.token));
  if (phi_family(family) && params[0] > 5000) throw std::invalid_argument(fmt::format("{}: N too large", fi.token));
  if ((family == Family::Rail2 || family == Family::Rail3))
    for (auto p : params)
      if (p > 1000) throw std::invalid_argument("rail: parameter too large");
  if (scale.num == 0 || scale.den == 0) throw std::invalid_argument("scale must be positive");
}

std::string BenchmarkId::name() const {
  const auto& fi = info(family);
  std::string out = fi.title;
  if (!params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < params.size(); ++i) out += (i ? "," : "") + std::to_string(params[i]);
    out += ")";
  }
  if (!scale.is_one()) out += "/" + scale.str();
  return out;
}

std::string generate_text(const BenchmarkId& id) {
  id.validate();
  return Generator(id).run().str(id.name());
}

Spec generate(const BenchmarkId& id) { return parse_spec(generate_text(id)); }

std::string RunRecord::winner() const {
  switch (status) {
    case Status::Timeout: return "TO";
    case Status::Error: return "ERR";
    case Status::Done: break;
  }
  switch (verdict) {
    case Verdict::Realizable: return "S";
    case Verdict::Unrealizable: return "E";
    case Verdict::Unknown: return "?";
  }
  return "?";
}

RunRecord run_one(const BenchmarkId& id, const SuiteConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  RunRecord r;
  r.name = id.name();
  const auto start = Clock::now();
  auto since = [](Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); };
  const Deadline deadline = cfg.timeout ? Deadline::after(*cfg.timeout) : Deadline{};
  try {
    ConstructionConfig cc = cfg.construct;
    cc.deadline = deadline;
    const auto built = build_game(generate(id), cc);
    r.gen_ms = since(start);
    r.locations = built.game.num_locations();
    r.timers = built.game.timers.size();
    SolverConfig sc = cfg.solver;
    sc.deadline = deadline;
    const auto res = solve(built.game, sc);
    r.verdict = res.verdict;
    r.k = res.k;
  } catch (const TimeoutError&) {
    r.status = Status::Timeout;
    if (r.gen_ms == 0) r.gen_ms = since(start);
  } catch (const std::exception& e) {
    r.status = Status::Error;
    r.message = e.what();
  }
  r.total_ms = since(start);
  return r;
}

std::vector<RunRecord> run_suite(std::span<const BenchmarkId> ids, const SuiteConfig& cfg, std::ostream* csv) {
  std::vector<RunRecord> out;
  if (csv) *csv << csv_header() << '\n' << std::flush;
  for (const auto& id : ids) {
    out.push_back(run_one(id, cfg));
    if (csv) *csv << csv_row(out.back()) << '\n' << std::flush;
  }
  return out;
}

std::string csv_header() { return "name,L,T,gen_ms,k,winner,total_ms"; }

std::string csv_row(const RunRecord& r) {
  const bool built = r.status == Status::Done || r.locations > 0;
  const bool decided = r.status == Status::Done;
  return fmt::format("\"{}\",{},{},{:.2f},{},{},{:.2f}", r.name, built ? std::to_string(r.locations) : "-",
                     built ? std::to_string(r.timers) : "-", r.gen_ms, decided ? std::to_string(r.k) : "-",
                     r.winner(), r.total_ms);
}

}  // namespace tgs::bench
