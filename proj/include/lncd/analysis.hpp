#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lncd/model.hpp"
#include "lncd/queue_sim.hpp"

namespace lncd {

// sum over i != m of p_m / (p_m - p_i). Throws TiedWorstLink on ties.
double delay_bound(const NetworkConfig& config);

// Steady-state single-customer delay behind a worst first link:
// sum over i >= 2 of p_1 / (p_1 - p_i). Throws unless p_1 > p_i for all i >= 2.
double steady_state_tau(const NetworkConfig& config);

struct BoundsReport {
  double capacity_term = 0.0;       // n / (1 - p_m)
  std::optional<double> dbar;       // empty when the worst link is tied
  std::optional<double> steady_tau; // evaluated with the worst link first
  bool unique_worst = false;
  WorstLink worst;
};

BoundsReport bounds_report(const NetworkConfig& config);

// sqrt((t l / 2) ln(2t)): the deviation for which Azuma-Hoeffding with l
// unit-Lipschitz link states per slot gives P(|R_t - E R_t| >= eps) <= 1/t.
double azuma_epsilon(double t, std::size_t links);

struct CrossingTimes {
  double t_lower = 0.0;  // (n - n^(1/2+delta')) / A
  double t_upper = 0.0;  // (n + n^(1/2+delta')) / A
  // Sufficient conditions using E R_t >= A t - B and E R_t <= A t:
  //   A t_upper - B - eps(t_upper) >= n  and  A t_lower + eps(t_lower) <= n.
  double upper_margin = 0.0;
  double lower_margin = 0.0;
  bool large_enough = false;
};

CrossingTimes crossing_times(double n, double capacity, double delta_prime, std::size_t links,
                             double r_bound);

// Smallest n for which crossing_times(...).large_enough holds (and keeps
// holding); empty if none below 2^62.
std::optional<std::uint64_t> crossing_threshold(double capacity, double delta_prime,
                                                std::size_t links, double r_bound);

struct ConcentrationReport {
  double delta = 0.0;
  double delta_prime = 0.0;      // delta / 2
  double epsilon_n = 0.0;        // n^(1/2+delta) / (1 - p_m)
  double leading_term = 0.0;     // 2 (1 - p_m) / n
  double correction_term = 0.0;  // 2 (1 - p_m) n^(2 delta) / (n^2 - n^(1+2 delta))
  double prob_bound = 0.0;
  bool bound_meaningful = false;  // prob_bound in (0, 1]
  double t_lower = 0.0;
  double t_upper = 0.0;
  double azuma_epsilon_t = 0.0;  // at t_upper
};

ConcentrationReport concentration_bound(double n, double worst_prob, double delta,
                                        std::size_t links);

struct ConcentrationCheck {
  double expected_total = 0.0;
  bool expected_from_exact = false;
  double epsilon_n = 0.0;
  std::uint64_t deviations = 0;
  std::uint64_t trials = 0;
  double empirical_prob = 0.0;
  double theorem_bound = 0.0;
  bool pass = false;
  std::string warning;  // set when n is below the asymptotic regime
};

// Fraction of trials with |T_n - E T_n| > eps_n against the two-term bound.
ConcentrationCheck verify_concentration(const NetworkConfig& config, std::uint64_t trials,
                                        double delta = 0.25, const RunOptions& run = {});

struct RankConcentrationCheck {
  std::uint64_t t = 0;
  double epsilon_t = 0.0;
  double mean_rank = 0.0;  // Monte Carlo estimate of E R_t
  std::uint64_t deviations = 0;
  std::uint64_t trials = 0;
  double empirical_prob = 0.0;
  double bound = 0.0;  // 1 / t
  bool pass = false;
  std::string warning;
};

RankConcentrationCheck verify_rank_concentration(const NetworkConfig& config, std::uint64_t t,
                                                 std::uint64_t trials,
                                                 const RunOptions& run = {});

struct CrossingCheck {
  CrossingTimes surrogate;
  std::uint64_t slot_lower = 0;  // floor(t_lower)
  std::uint64_t slot_upper = 0;  // ceil(t_upper)
  double rank_lower = 0.0;       // exact E R at slot_lower, saturated source
  double rank_upper = 0.0;
  double epsilon_lower = 0.0;
  double epsilon_upper = 0.0;
  bool upper_holds = false;  // E R - eps >= n at slot_upper
  bool lower_holds = false;  // E R + eps <= n at slot_lower
};

// Exact check of the crossing inequalities for batch size n. E R_t is the
// delivered count with a source that never runs dry, which is what T_n
// hits: the first n deliveries do not depend on later packets.
CrossingCheck verify_crossings(const NetworkConfig& config, std::uint32_t n, double delta_prime);

}  // namespace lncd
