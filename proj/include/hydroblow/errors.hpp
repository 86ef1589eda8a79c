#pragma once
#include <stdexcept>
#include <string>

namespace hydroblow {

// Exit-code taxonomy: 0 success, 1 usage, 2 config, 3 runtime, 4 acceptance.
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& m) : std::runtime_error(m) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& m) : std::runtime_error(m) {}
};

// Covers domain/range/contract/gauge/fit/crossing failures at run time.
struct runtime_failure : std::runtime_error {
  explicit runtime_failure(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace hydroblow
