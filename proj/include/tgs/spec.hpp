#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tgs/formula.hpp"

namespace tgs {

class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& msg, int line, int col)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

struct Spec {
  std::vector<std::string> inputs;   // sorted
  std::vector<std::string> outputs;  // sorted
  // Top-level conjuncts of all ASSUME sections. Each is either `psi W false`
  // with psi fully bounded, or itself fully bounded.
  std::vector<Formula> assumptions;
  Formula guarantee;

  bool is_input(const std::string& p) const;
  bool is_output(const std::string& p) const;
};

Spec parse_spec(std::string_view text);
// Parse a single formula against the given declarations (no header).
Formula parse_formula(std::string_view text, const std::vector<std::string>& inputs,
                      const std::vector<std::string>& outputs);

// Inverse of parse_spec for numeric-bounded formulas.
std::string write_spec(const Spec& s);

}  // namespace tgs
