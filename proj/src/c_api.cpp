#include "lncdelay.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "lncd/analysis.hpp"
#include "lncd/markov.hpp"
#include "lncd/model.hpp"
#include "lncd/queue_sim.hpp"
#include "lncd/rlnc_sim.hpp"
#include "lncd/verify.hpp"

struct lncd_network {
  lncd::NetworkConfig config;
};

struct lncd_chain {
  lncd::Chain chain;
};

struct lncd_pmf {
  std::vector<std::uint64_t> slots;
  std::vector<double> probs;
  double tail_mass = 0.0;
  bool complete = true;
};

struct lncd_suite {
  std::vector<lncd::PropertyResult> results;
};

namespace {

thread_local std::string g_last_error;

lncd_status to_status(lncd::ErrorCode code) {
  using lncd::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return LNCD_ERR_INVALID_ARGUMENT;
    case ErrorCode::TiedWorstLink:
      return LNCD_ERR_TIED_WORST_LINK;
    case ErrorCode::StateSpaceTooLarge:
      return LNCD_ERR_STATE_SPACE;
    case ErrorCode::SingularSystem:
      return LNCD_ERR_SINGULAR;
    case ErrorCode::SafetyCapExceeded:
      return LNCD_ERR_SAFETY_CAP;
    case ErrorCode::EmptyStorage:
      return LNCD_ERR_EMPTY_STORAGE;
    case ErrorCode::DimensionMismatch:
      return LNCD_ERR_DIMENSION;
    case ErrorCode::ZeroInverse:
      return LNCD_ERR_ZERO_INVERSE;
    case ErrorCode::Io:
      return LNCD_ERR_IO;
  }
  return LNCD_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
lncd_status guard(Body&& body) {
  try {
    body();
    g_last_error.clear();
    return LNCD_OK;
  } catch (const lncd::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LNCD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LNCD_ERR_INTERNAL;
  }
}

lncd_status null_pointer(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return LNCD_ERR_NULL_POINTER;
}

lncd_worst_link to_c(const lncd::WorstLink& w) { return {w.index, w.prob, w.unique ? 1 : 0}; }

lncd_estimate to_c(const lncd::DelayEstimate& e) {
  return {e.mean, e.variance, e.half_width, e.trials};
}

lncd_pmf* to_c(const std::vector<lncd::PmfPoint>& pmf, double tail, bool complete) {
  auto* out = new lncd_pmf;
  out->slots.reserve(pmf.size());
  out->probs.reserve(pmf.size());
  for (const auto& pt : pmf) {
    out->slots.push_back(pt.t);
    out->probs.push_back(pt.probability);
  }
  out->tail_mass = tail;
  out->complete = complete;
  return out;
}

}  // namespace

extern "C" {

const char* lncd_last_error(void) { return g_last_error.c_str(); }

const char* lncd_status_string(lncd_status status) {
  switch (status) {
    case LNCD_OK:
      return "ok";
    case LNCD_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case LNCD_ERR_TIED_WORST_LINK:
      return "tied worst links";
    case LNCD_ERR_STATE_SPACE:
      return "state space too large";
    case LNCD_ERR_SINGULAR:
      return "singular system";
    case LNCD_ERR_SAFETY_CAP:
      return "slot cap exceeded";
    case LNCD_ERR_EMPTY_STORAGE:
      return "empty storage";
    case LNCD_ERR_DIMENSION:
      return "dimension mismatch";
    case LNCD_ERR_ZERO_INVERSE:
      return "zero has no inverse";
    case LNCD_ERR_IO:
      return "i/o error";
    case LNCD_ERR_NULL_POINTER:
      return "null pointer";
    case LNCD_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* lncd_version(void) { return "0.1.0"; }

// --- network ---------------------------------------------------------------

lncd_status lncd_network_create(const double* erasure_probs, size_t links, uint32_t batch_size,
                                unsigned field_exponent, uint64_t seed, lncd_network** out) {
  if (!out) return null_pointer("out");
  if (links > 0 && !erasure_probs) return null_pointer("erasure_probs");
  return guard([&] {
    lncd::NetworkConfig config;
    config.erasure_probs.assign(erasure_probs, erasure_probs + links);
    config.batch_size = batch_size;
    config.field_exponent = field_exponent;
    config.seed = seed;
    lncd::validate(config);
    *out = new lncd_network{std::move(config)};
  });
}

lncd_status lncd_network_with_batch(const lncd_network* net, uint32_t batch_size,
                                    lncd_network** out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    lncd::NetworkConfig config = net->config;
    config.batch_size = batch_size;
    lncd::validate(config);
    *out = new lncd_network{std::move(config)};
  });
}

lncd_status lncd_network_worst_first(const lncd_network* net, lncd_network** out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] { *out = new lncd_network{lncd::worst_link_first(net->config)}; });
}

void lncd_network_destroy(lncd_network* net) { delete net; }

size_t lncd_network_links(const lncd_network* net) { return net ? net->config.links() : 0; }

uint32_t lncd_network_batch_size(const lncd_network* net) {
  return net ? net->config.batch_size : 0;
}

double lncd_network_erasure_prob(const lncd_network* net, size_t link) {
  if (!net || link == 0 || link > net->config.links())
    return std::numeric_limits<double>::quiet_NaN();
  return net->config.erasure_probs[link - 1];
}

lncd_status lncd_worst_link_of(const lncd_network* net, lncd_worst_link* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] { *out = to_c(lncd::worst_link(net->config)); });
}

// --- Monte Carlo -----------------------------------------------------------

lncd_status lncd_run_trial(const lncd_network* net, lncd_fidelity fidelity, uint64_t trial_index,
                           lncd_trial* out, uint32_t* trace, size_t trace_capacity,
                           size_t* trace_length) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    lncd::TrialOptions options;
    options.capture_trace = trace != nullptr || trace_length != nullptr;
    const lncd::TrialOutcome o = fidelity == LNCD_RLNC
                                     ? lncd::run_rlnc_trial(net->config, trial_index, options)
                                     : lncd::run_trial(net->config, trial_index, options);
    *out = {o.total_time, o.first_link_time, o.tail_time};
    if (o.rank_trace) {
      if (trace_length) *trace_length = o.rank_trace->size();
      if (trace) {
        const size_t k = std::min(trace_capacity, o.rank_trace->size());
        std::memcpy(trace, o.rank_trace->data(), k * sizeof(uint32_t));
      }
    }
  });
}

lncd_status lncd_estimate_delay(const lncd_network* net, uint64_t trials, unsigned workers,
                                lncd_delay_summary* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    const auto s = lncd::estimate_delay(net->config, trials, {workers});
    *out = {to_c(s.total), to_c(s.first_link), to_c(s.tail), s.capacity_term, s.delay_function,
            to_c(s.worst)};
  });
}

lncd_status lncd_sample_total_times(const lncd_network* net, uint64_t trials, unsigned workers,
                                    uint32_t* out) {
  if (!net || (!out && trials > 0)) return null_pointer("net/out");
  return guard([&] {
    const auto times = lncd::sample_total_times(net->config, trials, {workers});
    std::copy(times.begin(), times.end(), out);
  });
}

// --- pmf -------------------------------------------------------------------

lncd_status lncd_empirical_pmf(const lncd_network* net, uint64_t trials, unsigned workers,
                               lncd_pmf** out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] { *out = to_c(lncd::empirical_pmf(net->config, trials, {workers}), 0.0, true); });
}

size_t lncd_pmf_size(const lncd_pmf* pmf) { return pmf ? pmf->slots.size() : 0; }
const uint64_t* lncd_pmf_slots(const lncd_pmf* pmf) { return pmf ? pmf->slots.data() : nullptr; }
const double* lncd_pmf_probabilities(const lncd_pmf* pmf) {
  return pmf ? pmf->probs.data() : nullptr;
}
double lncd_pmf_tail_mass(const lncd_pmf* pmf) { return pmf ? pmf->tail_mass : 0.0; }
int lncd_pmf_complete(const lncd_pmf* pmf) { return pmf && pmf->complete ? 1 : 0; }
void lncd_pmf_destroy(lncd_pmf* pmf) { delete pmf; }

// --- exact chain -----------------------------------------------------------

lncd_status lncd_chain_build(const lncd_network* net, lncd_chain** out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] { *out = new lncd_chain{lncd::build_chain(net->config)}; });
}

void lncd_chain_destroy(lncd_chain* chain) { delete chain; }

uint64_t lncd_chain_state_count(const lncd_chain* chain) {
  return chain ? chain->chain.state_count() : 0;
}

uint64_t lncd_chain_reachable_count(const lncd_chain* chain) {
  return chain ? chain->chain.reachable_count() : 0;
}

lncd_status lncd_chain_solve_expected(const lncd_chain* chain, lncd_chain_solution* out) {
  if (!chain || !out) return null_pointer("chain/out");
  return guard([&] {
    const auto s = lncd::solve_expected(chain->chain);
    *out = {s.expected_total, s.expected_first_link, s.expected_tail, s.capacity_term,
            s.delay_function};
  });
}

lncd_status lncd_chain_solve_pmf(const lncd_chain* chain, uint64_t horizon, lncd_pmf** out) {
  if (!chain || !out) return null_pointer("chain/out");
  return guard([&] {
    const auto r = lncd::solve_pmf(chain->chain, horizon);
    *out = to_c(r.pmf, r.tail_mass, r.complete);
  });
}

uint64_t lncd_chain_states_required(const lncd_network* net) {
  return net ? lncd::CompositionIndex::count(net->config.links(), net->config.batch_size) : 0;
}

uint64_t lncd_chain_state_limit(void) { return lncd::kMaxChainStates; }

lncd_status lncd_closed_form_delay_two_hop(unsigned n, double p1, double p2, double* out) {
  if (!out) return null_pointer("out");
  return guard([&] { *out = lncd::closed_form_delay_two_hop(n, p1, p2); });
}

lncd_status lncd_delay_sequence(const lncd_network* net, uint32_t first, uint32_t last,
                                double* delay_out, double* tail_out) {
  if (!net || !delay_out) return null_pointer("net/delay_out");
  return guard([&] {
    const auto seq = lncd::delay_sequence(net->config, first, last);
    for (size_t k = 0; k < seq.size(); ++k) {
      delay_out[k] = seq[k].delay_function;
      if (tail_out) tail_out[k] = seq[k].expected_tail;
    }
  });
}

// --- bounds ----------------------------------------------------------------

lncd_status lncd_bounds_report(const lncd_network* net, lncd_bounds* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    const auto r = lncd::bounds_report(net->config);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = {r.capacity_term, r.dbar.value_or(nan), r.steady_tau.value_or(nan),
            r.unique_worst ? 1 : 0, to_c(r.worst)};
  });
}

lncd_status lncd_delay_bound(const lncd_network* net, double* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] { *out = lncd::delay_bound(net->config); });
}

lncd_status lncd_steady_state_tau(const lncd_network* net, double* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] { *out = lncd::steady_state_tau(net->config); });
}

lncd_status lncd_azuma_epsilon(double t, size_t links, double* out) {
  if (!out) return null_pointer("out");
  return guard([&] { *out = lncd::azuma_epsilon(t, links); });
}

lncd_status lncd_crossing_times_of(double n, double capacity, double delta_prime, size_t links,
                                   double r_bound, lncd_crossing_times* out) {
  if (!out) return null_pointer("out");
  return guard([&] {
    const auto c = lncd::crossing_times(n, capacity, delta_prime, links, r_bound);
    *out = {c.t_lower, c.t_upper, c.upper_margin, c.lower_margin, c.large_enough ? 1 : 0};
  });
}

lncd_status lncd_concentration_bound(double n, double worst_prob, double delta, size_t links,
                                     lncd_concentration_report* out) {
  if (!out) return null_pointer("out");
  return guard([&] {
    const auto r = lncd::concentration_bound(n, worst_prob, delta, links);
    *out = {r.delta,      r.delta_prime,          r.epsilon_n, r.leading_term,
            r.correction_term, r.prob_bound, r.bound_meaningful ? 1 : 0,
            r.t_lower,    r.t_upper,              r.azuma_epsilon_t};
  });
}

lncd_status lncd_verify_concentration(const lncd_network* net, uint64_t trials, double delta,
                                      unsigned workers, lncd_concentration_check* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    const auto c = lncd::verify_concentration(net->config, trials, delta, {workers});
    *out = {c.expected_total,  c.expected_from_exact ? 1 : 0, c.epsilon_n, c.deviations,
            c.trials,          c.empirical_prob,              c.theorem_bound,
            c.pass ? 1 : 0,    c.warning.empty() ? 0 : 1};
  });
}

lncd_status lncd_verify_rank_concentration(const lncd_network* net, uint64_t t, uint64_t trials,
                                           unsigned workers, lncd_rank_concentration_check* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    const auto c = lncd::verify_rank_concentration(net->config, t, trials, {workers});
    *out = {c.t,          c.epsilon_t, c.mean_rank,     c.deviations,
            c.trials,     c.empirical_prob, c.bound,    c.pass ? 1 : 0,
            net->config.batch_size < t ? 1 : 0};
  });
}

// --- fidelity ----------------------------------------------------------------

lncd_status lncd_compare_fidelities(const lncd_network* net, uint64_t trials, unsigned workers,
                                    lncd_fidelity_report* out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    const auto r = lncd::compare_fidelities(net->config, trials, {workers});
    *out = {to_c(r.queue), to_c(r.rlnc), r.gap, r.gap_half_width, r.dominance_violations};
  });
}

// --- property suite ----------------------------------------------------------

lncd_status lncd_suite_run(const lncd_network* net, uint64_t trials, unsigned workers,
                           lncd_suite** out) {
  if (!net || !out) return null_pointer("net/out");
  return guard([&] {
    lncd::SuiteOptions options;
    options.trials = trials;
    options.run.workers = workers;
    *out = new lncd_suite{lncd::run_property_suite(net->config, options)};
  });
}

size_t lncd_suite_size(const lncd_suite* suite) { return suite ? suite->results.size() : 0; }

lncd_status lncd_suite_entry(const lncd_suite* suite, size_t i, lncd_property* out) {
  if (!suite || !out) return null_pointer("suite/out");
  if (i >= suite->results.size()) {
    g_last_error = "suite entry index out of range";
    return LNCD_ERR_INVALID_ARGUMENT;
  }
  const auto& r = suite->results[i];
  lncd_verdict v = LNCD_FAIL;
  if (r.verdict == lncd::Verdict::Pass) v = LNCD_PASS;
  if (r.verdict == lncd::Verdict::Skipped) v = LNCD_SKIPPED;
  *out = {r.name.c_str(), v, r.measured.c_str(), r.required.c_str()};
  return LNCD_OK;
}

void lncd_suite_destroy(lncd_suite* suite) { delete suite; }

}  // extern "C"
