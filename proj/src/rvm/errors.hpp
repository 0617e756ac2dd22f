#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rvm {

// Exit-code taxonomy shared by the C API and the CLI:
//   0 ok, 1 offline check failure, 2 invalid config, 3 runtime violation,
//   4 I/O corruption.
enum class StatusCode : int {
  Ok = 0,
  CheckFailure = 1,
  ConfigError = 2,
  RuntimeViolation = 3,
  IoError = 4,
};

struct ConfigError : std::runtime_error {
  std::vector<std::string> violations;
  explicit ConfigError(std::vector<std::string> v)
      : std::runtime_error(join(v)), violations(std::move(v)) {}
  explicit ConfigError(const std::string& msg)
      : std::runtime_error(msg), violations{msg} {}
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid config:";
    for (const auto& e : v) s += "\n  - " + e;
    return s;
  }
};

// A traced characteristic left the certified region; carries the partial
// trajectory for post-mortem output.
struct ConfinementError : std::runtime_error {
  std::vector<double> s, x, v1, v2;  // parallel sample arrays
  explicit ConfinementError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-point iteration failed to reach tolerance; carries the residual
// history so callers can report the tail behaviour.
struct NonConvergenceError : std::runtime_error {
  std::vector<double> residuals;
  NonConvergenceError(const std::string& msg, std::vector<double> r)
      : std::runtime_error(msg), residuals(std::move(r)) {}
};

// A per-step diagnostic bound failed during time marching.
struct ViolationError : std::runtime_error {
  int step = -1;
  std::vector<std::pair<std::string, double>> violations;  // name, margin
  ViolationError(const std::string& msg, int step_,
                 std::vector<std::pair<std::string, double>> v)
      : std::runtime_error(msg), step(step_), violations(std::move(v)) {}
};

}  // namespace rvm
