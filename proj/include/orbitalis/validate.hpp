#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbitalis {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Every module's invariant suite (fast checks only; the PDE and Monte Carlo
/// kernel gates live in the test suite). Randomized checks draw from the seed.
std::vector<CheckResult> run_validation_suite(std::uint64_t seed = 20240801);

}  // namespace orbitalis
