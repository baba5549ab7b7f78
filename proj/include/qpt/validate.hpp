// Invariant suites run by the `validate` command.
#pragma once

#include "qpt/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qpt {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Representation round trips, basis orthonormality, UIC tests, POVM
/// validity, design-matrix consistency, closed-form exactness, fidelity
/// identities and an exact-data LS reconstruction, all at dimension d.
std::vector<CheckResult> run_validation(int d, std::uint64_t seed = 1);

inline bool all_passed(const std::vector<CheckResult>& r) {
  for (const auto& c : r)
    if (!c.passed) return false;
  return true;
}

}  // namespace qpt
