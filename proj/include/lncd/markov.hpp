#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lncd/model.hpp"
#include "lncd/stats.hpp"

namespace lncd {

inline constexpr std::uint64_t kMaxChainStates = 10'000'000;

// Lexicographic ranking of the vectors d in N^parts with sum(d) <= max_sum.
class CompositionIndex {
 public:
  CompositionIndex(std::size_t parts, std::uint32_t max_sum);

  std::size_t parts() const noexcept { return parts_; }
  std::uint32_t max_sum() const noexcept { return max_sum_; }
  std::uint64_t size() const noexcept { return size_; }

  std::uint64_t encode(std::span<const std::uint32_t> d) const;
  std::vector<std::uint32_t> decode(std::uint64_t index) const;

  // C(max_sum + parts, parts) without building anything; saturates at
  // UINT64_MAX.
  static std::uint64_t count(std::size_t parts, std::uint32_t max_sum);

 private:
  std::uint64_t binom(std::uint64_t n, std::uint64_t k) const;

  std::size_t parts_;
  std::uint32_t max_sum_;
  std::uint64_t size_;
  std::vector<std::uint64_t> table_;  // table_[n * (parts_ + 2) + k] = C(n, k)
};

struct Transition {
  std::uint32_t target;
  double prob;
};

// Absorbing chain of the full queue state (d_1..d_l). State 0 is the empty
// network, i.e. decoding done.
class Chain {
 public:
  const NetworkConfig& config() const noexcept { return config_; }
  const CompositionIndex& index() const noexcept { return index_; }
  std::uint64_t state_count() const noexcept { return index_.size(); }
  std::uint64_t reachable_count() const noexcept { return reachable_; }
  std::uint32_t initial_state() const noexcept { return initial_; }
  static constexpr std::uint32_t absorbed_state() noexcept { return 0; }

  // Every outcome of one slot from `state`, the self-transition included.
  std::span<const Transition> row(std::uint32_t state) const {
    return {transitions_.data() + offsets_[state], transitions_.data() + offsets_[state + 1]};
  }
  double self_loop(std::uint32_t state) const noexcept { return self_loop_[state]; }

  // Transient states ordered so that every non-self transition points to an
  // earlier entry; the absorbed state comes first.
  std::span<const std::uint32_t> solve_order() const noexcept { return order_; }

 private:
  friend Chain build_chain(const NetworkConfig& config);
  explicit Chain(const NetworkConfig& config);

  NetworkConfig config_;
  CompositionIndex index_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Transition> transitions_;
  std::vector<double> self_loop_;
  std::vector<std::uint32_t> order_;
  std::uint32_t initial_ = 0;
  std::uint64_t reachable_ = 0;
};

Chain build_chain(const NetworkConfig& config);

struct ChainSolution {
  double expected_total = 0.0;       // E T_n, first-step analysis
  double expected_first_link = 0.0;  // E T_n^(1), from visit counts
  double expected_tail = 0.0;        // E tau_n, from the hand-off distribution
  double capacity_term = 0.0;        // n / (1 - p_m)
  double delay_function = 0.0;       // expected_total - capacity_term
};

ChainSolution solve_expected(const Chain& chain);

struct ExactPmf {
  std::vector<PmfPoint> pmf;  // strictly positive entries only
  double captured_mass = 0.0;
  double tail_mass = 0.0;     // mass still transient after the horizon
  bool complete = false;      // captured_mass >= 1 - 1e-9
  // E R_t for t = 0..last propagated slot.
  std::vector<double> expected_rank;
};

// Forward propagation for up to `horizon` slots. Stops early once the
// remaining transient mass drops below 1e-15.
ExactPmf solve_pmf(const Chain& chain, std::uint64_t horizon);

// Published closed forms of D(n) for a two-hop network, n in 1..4.
double closed_form_delay_two_hop(unsigned n, double p1, double p2);

struct DelayPoint {
  std::uint32_t n = 0;
  double delay_function = 0.0;
  double expected_tail = 0.0;  // with the worst link first
};

// D(n) for n in [first, last], worst link moved to position 1.
std::vector<DelayPoint> delay_sequence(const NetworkConfig& base, std::uint32_t first,
                                       std::uint32_t last);

}  // namespace lncd
