#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arbf {

// Invalid or inconsistent configuration (bad scenario file, bad field value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed-loop run left the numeric envelope (velocity blow-up or non-finite state).
class DivergedError : public std::runtime_error {
 public:
  DivergedError(std::size_t step, double time)
      : std::runtime_error("simulation diverged at step " + std::to_string(step) +
                           " (t=" + std::to_string(time) + " s)"),
        step_(step),
        time_(time) {}

  std::size_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::size_t step_;
  double time_;
};

}  // namespace arbf
