#pragma once

#include <string>
#include <vector>

namespace bess {

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string witness;  // serialized failing input, empty when passing
};

struct Report {
  std::vector<CheckResult> checks;

  void add(CheckResult r) { checks.push_back(std::move(r)); }

  bool pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }

  double max_residual(const std::string& name) const {
    for (const CheckResult& c : checks)
      if (c.name == name) return c.max_residual;
    return 0.0;
  }
};

}  // namespace bess
