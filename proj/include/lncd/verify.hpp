#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lncd/model.hpp"
#include "lncd/queue_sim.hpp"

namespace lncd {

enum class Verdict { Pass, Fail, Skipped };

struct PropertyResult {
  std::string name;
  Verdict verdict = Verdict::Fail;
  std::string measured;
  std::string required;
};

struct SuiteOptions {
  std::uint64_t trials = 20'000;
  RunOptions run;
};

// Runs the invariant checks of every module against `config`. Statistical
// checks use 5-sigma margins so verdicts do not depend on the seed.
std::vector<PropertyResult> run_property_suite(const NetworkConfig& config,
                                               const SuiteOptions& options = {});

const char* to_string(Verdict v) noexcept;

}  // namespace lncd
