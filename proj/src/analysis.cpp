#include "lncd/analysis.hpp"

#include <cmath>
#include <sstream>

#include "lncd/markov.hpp"
#include "parallel.hpp"

namespace lncd {

double delay_bound(const NetworkConfig& config) {
  validate(config);
  const WorstLink worst = worst_link(config);
  if (!worst.unique)
    throw Error(ErrorCode::TiedWorstLink, "delay bound undefined: tied worst links");
  double sum = 0.0;
  for (std::size_t i = 0; i < config.links(); ++i) {
    if (i + 1 == worst.index) continue;
    sum += worst.prob / (worst.prob - config.erasure_probs[i]);
  }
  return sum;
}

double steady_state_tau(const NetworkConfig& config) {
  validate(config);
  const auto& p = config.erasure_probs;
  double sum = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i] < p[0])) {
      std::ostringstream msg;
      msg << "steady_state_tau: first link not the worst (link " << i + 1 << " has p=" << p[i]
          << " >= p_1=" << p[0] << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    sum += p[0] / (p[0] - p[i]);
  }
  return sum;
}

BoundsReport bounds_report(const NetworkConfig& config) {
  validate(config);
  BoundsReport r;
  r.worst = worst_link(config);
  r.unique_worst = r.worst.unique;
  r.capacity_term = static_cast<double>(config.batch_size) / (1.0 - r.worst.prob);
  if (r.unique_worst) {
    r.dbar = delay_bound(config);
    r.steady_tau = steady_state_tau(worst_link_first(config));
  }
  return r;
}

double azuma_epsilon(double t, std::size_t links) {
  if (!(t >= 1.0)) throw Error(ErrorCode::InvalidArgument, "azuma_epsilon: t must be >= 1");
  return std::sqrt(t * static_cast<double>(links) / 2.0 * std::log(2.0 * t));
}

namespace {

void check_delta(double delta, const char* name) {
  if (!(delta > 0.0 && delta < 0.5)) {
    std::ostringstream msg;
    msg << name << ": must lie in (0, 1/2) (got " << delta << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

void check_capacity(double capacity) {
  if (!(capacity > 0.0 && capacity <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "capacity: must lie in (0, 1]");
}

}  // namespace

CrossingTimes crossing_times(double n, double capacity, double delta_prime, std::size_t links,
                             double r_bound) {
  check_delta(delta_prime, "delta_prime");
  check_capacity(capacity);
  CrossingTimes c;
  const double spread = std::pow(n, 0.5 + delta_prime);
  c.t_upper = (n + spread) / capacity;
  c.t_lower = (n - spread) / capacity;
  c.upper_margin = capacity * c.t_upper - r_bound - azuma_epsilon(c.t_upper, links) - n;
  if (c.t_lower >= 1.0) {
    c.lower_margin = n - capacity * c.t_lower - azuma_epsilon(c.t_lower, links);
  } else {
    c.lower_margin = -1.0;
  }
  c.large_enough = c.upper_margin >= 0.0 && c.lower_margin >= 0.0;
  return c;
}

std::optional<std::uint64_t> crossing_threshold(double capacity, double delta_prime,
                                                std::size_t links, double r_bound) {
  auto holds = [&](std::uint64_t n) {
    return crossing_times(static_cast<double>(n), capacity, delta_prime, links, r_bound)
        .large_enough;
  };
  std::uint64_t hi = 1;
  while (!holds(hi)) {
    if (hi >= (std::uint64_t{1} << 62)) return std::nullopt;
    hi *= 2;
  }
  std::uint64_t lo = hi / 2;  // fails, or 0
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ConcentrationReport concentration_bound(double n, double worst_prob, double delta,
                                        std::size_t links) {
  check_delta(delta, "delta");
  if (!(n >= 2.0)) throw Error(ErrorCode::InvalidArgument, "concentration_bound: n must be >= 2");
  if (!(worst_prob >= 0.0 && worst_prob < 1.0))
    throw Error(ErrorCode::InvalidArgument, "concentration_bound: p_m must lie in [0, 1)");
  const double a = 1.0 - worst_prob;
  ConcentrationReport r;
  r.delta = delta;
  r.delta_prime = delta / 2.0;
  r.epsilon_n = std::pow(n, 0.5 + delta) / a;
  r.leading_term = 2.0 * a / n;
  r.correction_term = 2.0 * a * std::pow(n, 2.0 * delta) / (n * n - std::pow(n, 1.0 + 2.0 * delta));
  r.prob_bound = r.leading_term + r.correction_term;
  r.bound_meaningful = r.prob_bound > 0.0 && r.prob_bound <= 1.0;
  const CrossingTimes c = crossing_times(n, a, r.delta_prime, links, 0.0);
  r.t_lower = c.t_lower;
  r.t_upper = c.t_upper;
  r.azuma_epsilon_t = azuma_epsilon(c.t_upper, links);
  return r;
}

ConcentrationCheck verify_concentration(const NetworkConfig& config, std::uint64_t trials,
                                        double delta, const RunOptions& run) {
  validate(config);
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials: must be >= 1");
  const WorstLink worst = worst_link(config);
  const double n = config.batch_size;
  ConcentrationCheck check;
  check.trials = trials;

  if (CompositionIndex::count(config.links(), config.batch_size) <= kMaxChainStates) {
    check.expected_total = solve_expected(build_chain(config)).expected_total;
    check.expected_from_exact = true;
  } else {
    // Independent trial indices, ten times as many as the deviation run.
    std::vector<std::uint32_t> reference(10 * trials);
    detail::for_each_trial(reference.size(), run.workers, [&](std::uint64_t t) {
      reference[t] = static_cast<std::uint32_t>(run_trial(config, trials + t).total_time);
    });
    check.expected_total = summarize(reference).mean;
  }

  const std::vector<std::uint32_t> times = sample_total_times(config, trials, run);
  if (n >= 2.0) {
    const ConcentrationReport bound =
        concentration_bound(n, worst.prob, delta, config.links());
    check.epsilon_n = bound.epsilon_n;
    check.theorem_bound = bound.prob_bound;
  } else {
    check.epsilon_n = std::pow(n, 0.5 + delta) / (1.0 - worst.prob);
    check.theorem_bound = 1.0;
  }
  for (const auto x : times)
    if (std::abs(static_cast<double>(x) - check.expected_total) > check.epsilon_n)
      ++check.deviations;
  check.empirical_prob = static_cast<double>(check.deviations) / static_cast<double>(trials);
  check.pass = check.empirical_prob <= check.theorem_bound;

  const double r_bound = worst.unique ? delay_bound(config) : 0.0;
  const CrossingTimes regime =
      crossing_times(n, 1.0 - worst.prob, delta / 2.0, config.links(), r_bound);
  if (!regime.large_enough || !worst.unique) {
    std::ostringstream msg;
    msg << "n=" << config.batch_size
        << " is below the regime where the bound is proven (stated for sufficiently large n)";
    check.warning = msg.str();
  }
  return check;
}

RankConcentrationCheck verify_rank_concentration(const NetworkConfig& config, std::uint64_t t,
                                                 std::uint64_t trials, const RunOptions& run) {
  validate(config);
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials: must be >= 1");
  if (t == 0) throw Error(ErrorCode::InvalidArgument, "t: must be >= 1");
  RankConcentrationCheck check;
  check.t = t;
  check.trials = trials;
  check.epsilon_t = azuma_epsilon(static_cast<double>(t), config.links());
  check.bound = 1.0 / static_cast<double>(t);

  std::vector<std::uint32_t> ranks(trials);
  detail::for_each_trial(trials, run.workers,
                         [&](std::uint64_t k) { ranks[k] = rank_after(config, k, t); });
  check.mean_rank = summarize(ranks).mean;
  for (const auto r : ranks)
    if (std::abs(static_cast<double>(r) - check.mean_rank) >= check.epsilon_t) ++check.deviations;
  check.empirical_prob = static_cast<double>(check.deviations) / static_cast<double>(trials);
  check.pass = check.empirical_prob <= check.bound;
  if (config.batch_size < t)
    check.warning = "batch smaller than t: the source can run dry and R_t saturates at n";
  if (check.bound >= 1.0) check.warning += check.warning.empty() ? "bound is vacuous" : "; bound is vacuous";
  return check;
}

CrossingCheck verify_crossings(const NetworkConfig& config, std::uint32_t n, double delta_prime) {
  validate(config);
  const WorstLink worst = worst_link(config);
  const double capacity = 1.0 - worst.prob;
  const double r_bound = worst.unique ? delay_bound(config) : 0.0;
  CrossingCheck check;
  check.surrogate = crossing_times(n, capacity, delta_prime, config.links(), r_bound);
  check.slot_upper = static_cast<std::uint64_t>(std::ceil(check.surrogate.t_upper));
  check.slot_lower = check.surrogate.t_lower > 1.0
                         ? static_cast<std::uint64_t>(std::floor(check.surrogate.t_lower))
                         : 1;

  // A batch at least as large as the horizon never lets the source run dry.
  NetworkConfig saturated = config;
  saturated.batch_size = static_cast<std::uint32_t>(check.slot_upper);
  const ExactPmf exact = solve_pmf(build_chain(saturated), check.slot_upper);
  check.rank_upper = exact.expected_rank.at(check.slot_upper);
  check.rank_lower = exact.expected_rank.at(check.slot_lower);
  check.epsilon_upper = azuma_epsilon(static_cast<double>(check.slot_upper), config.links());
  check.epsilon_lower = azuma_epsilon(static_cast<double>(check.slot_lower), config.links());
  check.upper_holds = check.rank_upper - check.epsilon_upper >= n;
  check.lower_holds = check.rank_lower + check.epsilon_lower <= n;
  return check;
}

}  // namespace lncd
