#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace levycollapse {

// One property check; detail always carries the observed effect size and
// the statistical or numerical tolerance it was judged against.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> validate_quantum();
std::vector<CheckResult> validate_levy(std::uint64_t seed);
std::vector<CheckResult> validate_information(std::uint64_t seed);
std::vector<CheckResult> validate_reduction(std::uint64_t seed);
std::vector<CheckResult> validate_decoherence(std::uint64_t seed);
std::vector<CheckResult> validate_harness(std::uint64_t seed);

// Every module suite in order; names are prefixed module.check.
std::vector<CheckResult> validate_all(std::uint64_t seed);

}  // namespace levycollapse
