#pragma once

// Randomized invariant suites run by `hilbmult verify`.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hilbmult/calculus.hpp"

namespace hilbmult::cli {

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::string family = "mult";  // family for the calculus suite: mult | add
  std::map<std::string, double> tolerances;  // "suite.invariant" or "invariant" -> tol
};

const std::vector<std::string>& suite_names();

/// Runs one named suite; unknown names raise UsageError.
std::vector<CheckReport> run_suite(const std::string& suite, const SuiteOptions& opts);

}  // namespace hilbmult::cli
