#pragma once
// Cooperative wall-clock budget shared by construction and solving.

#include <chrono>
#include <optional>
#include <stdexcept>

namespace tgs {

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time budget exhausted") {}
};

struct Deadline {
  using Clock = std::chrono::steady_clock;
  std::optional<Clock::time_point> at;

  static Deadline after(std::chrono::milliseconds ms) { return {Clock::now() + ms}; }
  [[nodiscard]] bool passed() const { return at && Clock::now() >= *at; }
  void check() const {
    if (passed()) throw TimeoutError();
  }
};

}  // namespace tgs
