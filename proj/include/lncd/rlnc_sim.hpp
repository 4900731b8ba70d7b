#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "lncd/gf.hpp"
#include "lncd/queue_sim.hpp"

namespace lncd {

// Called after every slot with the rank of each node, source first.
using RankObserver = std::function<void(std::uint64_t slot, std::span<const std::size_t> ranks)>;

// Packet-level trial: every node with a non-empty store sends a fresh random
// combination of its basis each slot; erasures come from the same per-link
// streams as run_trial, coefficients from a separate per-node stream.
TrialOutcome run_rlnc_trial(const NetworkConfig& config, std::uint64_t trial_index,
                            const TrialOptions& options = {},
                            const RankObserver& observer = {});

struct FidelityReport {
  DelayEstimate queue;
  DelayEstimate rlnc;
  double gap = 0.0;                   // rlnc.mean - queue.mean
  double gap_half_width = 0.0;        // 95%, from paired per-trial differences
  std::uint64_t dominance_violations = 0;  // trials with rlnc T_n < queue T_n
};

FidelityReport compare_fidelities(const NetworkConfig& config, std::uint64_t trials,
                                  const RunOptions& run = {});

}  // namespace lncd
