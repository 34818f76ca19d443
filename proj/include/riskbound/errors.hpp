#pragma once

#include <stdexcept>
#include <string>

namespace riskbound {

// Raised when an iterative search exhausts its budget: a rejection
// sampler hits its cap, or an optimizer finds no finite objective value.
class SearchError : public std::runtime_error {
 public:
  explicit SearchError(const std::string& what) : std::runtime_error(what) {}
};

// Input contract check. Violations are caller errors, not search failures.
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace riskbound
