#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lncd/model.hpp"
#include "lncd/stats.hpp"

namespace lncd {

inline constexpr std::uint64_t kDefaultSlotCap = 1'000'000'000;

struct TrialOutcome {
  std::uint64_t total_time = 0;       // T_n
  std::uint64_t first_link_time = 0;  // slot of the n-th success on link 1
  std::uint64_t tail_time = 0;        // T_n - first_link_time
  // Entry t is the destination rank after slot t; entry 0 is the start.
  std::optional<std::vector<std::uint32_t>> rank_trace;
};

struct TrialOptions {
  bool capture_trace = false;
  std::uint64_t slot_cap = kDefaultSlotCap;
};

// Worker count for trial-parallel drivers. 0 means hardware concurrency.
// Results never depend on this value.
struct RunOptions {
  unsigned workers = 0;
};

struct StepOutcome {
  QueueState state;
  bool delivered = false;  // a unit crossed the last link
};

// One synchronous slot: link i moves a unit iff it held one before the slot
// and is up. A unit that arrives during the slot waits for the next one.
StepOutcome step(const QueueState& state, std::span<const bool> link_up);

TrialOutcome run_trial(const NetworkConfig& config, std::uint64_t trial_index,
                       const TrialOptions& options = {});

// Destination rank R_t after `slots` slots of trial `trial_index`, drawn from
// the same streams as run_trial.
std::uint32_t rank_after(const NetworkConfig& config, std::uint64_t trial_index,
                         std::uint64_t slots);

struct DelaySummary {
  DelayEstimate total;
  DelayEstimate first_link;
  DelayEstimate tail;
  double capacity_term = 0.0;   // n / (1 - p_m)
  double delay_function = 0.0;  // total.mean - capacity_term
  WorstLink worst;              // a tie is metadata only here
};

// Per-trial T_n for trials 0..trials-1; element k belongs to trial k.
std::vector<std::uint32_t> sample_total_times(const NetworkConfig& config, std::uint64_t trials,
                                              const RunOptions& run = {});

DelaySummary estimate_delay(const NetworkConfig& config, std::uint64_t trials,
                            const RunOptions& run = {});

std::vector<PmfPoint> empirical_pmf(const NetworkConfig& config, std::uint64_t trials,
                                    const RunOptions& run = {});

}  // namespace lncd
