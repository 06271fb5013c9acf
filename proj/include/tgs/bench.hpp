#pragma once
// Generators for the office-robot, real-time and bounded-response benchmark
// families, plus a CSV-producing harness.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgs/construct.hpp"
#include "tgs/solver.hpp"
#include "tgs/spec.hpp"

namespace tgs::bench {

enum class Family { Clean, CleanC, CleanH, CleanN, Coffee, CoffeeC, ConvBelt, RoboCam, Rail2, Rail3, PhiA, PhiB, PhiC, PhiD };

const char* to_string(Family f);  // command-line token, e.g. "Clean_H", "rail2"
std::optional<Family> parse_family(std::string_view token);
std::span<const Family> all_families();
std::size_t arity(Family f);

// Positive rational; every published bound b becomes ceil(b / scale), at least 1.
struct Scale {
  std::uint64_t num = 1;
  std::uint64_t den = 1;
  static Scale parse(std::string_view text);  // "72", "3/2"
  [[nodiscard]] std::uint64_t apply(std::uint64_t bound) const;
  [[nodiscard]] bool is_one() const { return num == den; }
  [[nodiscard]] std::string str() const;
};

struct BenchmarkId {
  Family family = Family::Clean;
  std::vector<std::uint32_t> params;
  Scale scale;
  // Throws std::invalid_argument on wrong arity or out-of-range params.
  void validate() const;
  [[nodiscard]] std::string name() const;  // "Clean_H(3)", "rail(2,4)", "conv-belt"
};

std::string generate_text(const BenchmarkId& id);
Spec generate(const BenchmarkId& id);

enum class Status { Done, Timeout, Error };

struct RunRecord {
  std::string name;
  Status status = Status::Done;
  Verdict verdict = Verdict::Unknown;  // meaningful when status == Done
  std::uint32_t k = 0;
  std::size_t locations = 0;
  std::size_t timers = 0;
  double gen_ms = 0;
  double total_ms = 0;
  std::string message;  // error text

  // S, E, ? (unknown), TO or ERR
  [[nodiscard]] std::string winner() const;
};

struct SuiteConfig {
  ConstructionConfig construct;
  SolverConfig solver;
  std::optional<std::chrono::milliseconds> timeout;  // per benchmark
};

RunRecord run_one(const BenchmarkId& id, const SuiteConfig& cfg);
// Writes the header and one row per finished record to csv when given.
std::vector<RunRecord> run_suite(std::span<const BenchmarkId> ids, const SuiteConfig& cfg, std::ostream* csv = nullptr);

std::string csv_header();
std::string csv_row(const RunRecord& r);

}  // namespace tgs::bench
