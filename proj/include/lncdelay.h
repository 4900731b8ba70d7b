/*
 * lncdelay: batch delay of random linear network coding over line networks
 * of erasure links.
 *
 * C interface. Objects are opaque handles created by *_create / *_build /
 * *_run functions and released with the matching *_destroy. Every fallible
 * call returns an lncd_status; on failure lncd_last_error() describes the
 * problem. Output structs are only written on LNCD_OK.
 */
#ifndef LNCDELAY_H
#define LNCDELAY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LNCD_BUILDING_LIBRARY)
#    define LNCD_API __declspec(dllexport)
#  else
#    define LNCD_API __declspec(dllimport)
#  endif
#else
#  define LNCD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lncd_status {
  LNCD_OK = 0,
  LNCD_ERR_INVALID_ARGUMENT = 1,
  LNCD_ERR_TIED_WORST_LINK = 2,
  LNCD_ERR_STATE_SPACE = 3,
  LNCD_ERR_SINGULAR = 4,
  LNCD_ERR_SAFETY_CAP = 5,
  LNCD_ERR_EMPTY_STORAGE = 6,
  LNCD_ERR_DIMENSION = 7,
  LNCD_ERR_ZERO_INVERSE = 8,
  LNCD_ERR_IO = 9,
  LNCD_ERR_NULL_POINTER = 10,
  LNCD_ERR_INTERNAL = 99
} lncd_status;

/* Message for the most recent failure on the calling thread. */
LNCD_API const char* lncd_last_error(void);
LNCD_API const char* lncd_status_string(lncd_status status);
LNCD_API const char* lncd_version(void);

/* ------------------------------------------------------------------------ */
/* Network */

typedef struct lncd_network lncd_network;

LNCD_API lncd_status lncd_network_create(const double* erasure_probs, size_t links,
                                         uint32_t batch_size, unsigned field_exponent,
                                         uint64_t seed, lncd_network** out);
/* Copy of `net` with a different batch size. */
LNCD_API lncd_status lncd_network_with_batch(const lncd_network* net, uint32_t batch_size,
                                             lncd_network** out);
/* Copy of `net` with the worst link swapped into position 1. */
LNCD_API lncd_status lncd_network_worst_first(const lncd_network* net, lncd_network** out);
LNCD_API void lncd_network_destroy(lncd_network* net);

LNCD_API size_t lncd_network_links(const lncd_network* net);
LNCD_API uint32_t lncd_network_batch_size(const lncd_network* net);
LNCD_API double lncd_network_erasure_prob(const lncd_network* net, size_t link); /* 1-based */

typedef struct lncd_worst_link {
  size_t index; /* 1-based */
  double prob;
  int unique;
} lncd_worst_link;

LNCD_API lncd_status lncd_worst_link_of(const lncd_network* net, lncd_worst_link* out);

/* ------------------------------------------------------------------------ */
/* Monte Carlo */

typedef struct lncd_estimate {
  double mean;
  double variance;
  double half_width; /* 95% */
  uint64_t trials;
} lncd_estimate;

typedef struct lncd_delay_summary {
  lncd_estimate total;
  lncd_estimate first_link;
  lncd_estimate tail;
  double capacity_term;
  double delay_function;
  lncd_worst_link worst;
} lncd_delay_summary;

typedef enum lncd_fidelity { LNCD_QUEUE = 0, LNCD_RLNC = 1 } lncd_fidelity;

typedef struct lncd_trial {
  uint64_t total_time;
  uint64_t first_link_time;
  uint64_t tail_time;
} lncd_trial;

/* Runs one trial. If `trace` is non-NULL, up to `trace_capacity` entries of
 * the destination rank trace (entry t = rank after slot t) are copied and
 * `trace_length` receives the full trace length. */
LNCD_API lncd_status lncd_run_trial(const lncd_network* net, lncd_fidelity fidelity,
                                    uint64_t trial_index, lncd_trial* out, uint32_t* trace,
                                    size_t trace_capacity, size_t* trace_length);

/* workers = 0 uses every hardware thread; results do not depend on it. */
LNCD_API lncd_status lncd_estimate_delay(const lncd_network* net, uint64_t trials,
                                         unsigned workers, lncd_delay_summary* out);

/* Per-trial T_n for trials 0..trials-1 into `out` (length trials). */
LNCD_API lncd_status lncd_sample_total_times(const lncd_network* net, uint64_t trials,
                                             unsigned workers, uint32_t* out);

/* ------------------------------------------------------------------------ */
/* Probability mass functions */

typedef struct lncd_pmf lncd_pmf;

LNCD_API lncd_status lncd_empirical_pmf(const lncd_network* net, uint64_t trials,
                                        unsigned workers, lncd_pmf** out);
LNCD_API size_t lncd_pmf_size(const lncd_pmf* pmf);
LNCD_API const uint64_t* lncd_pmf_slots(const lncd_pmf* pmf);
LNCD_API const double* lncd_pmf_probabilities(const lncd_pmf* pmf);
/* Mass not covered by the entries (0 for empirical pmfs). */
LNCD_API double lncd_pmf_tail_mass(const lncd_pmf* pmf);
LNCD_API int lncd_pmf_complete(const lncd_pmf* pmf);
LNCD_API void lncd_pmf_destroy(lncd_pmf* pmf);

/* ------------------------------------------------------------------------ */
/* Exact absorbing chain */

typedef struct lncd_chain lncd_chain;

typedef struct lncd_chain_solution {
  double expected_total;
  double expected_first_link;
  double expected_tail;
  double capacity_term;
  double delay_function;
} lncd_chain_solution;

LNCD_API lncd_status lncd_chain_build(const lncd_network* net, lncd_chain** out);
LNCD_API void lncd_chain_destroy(lncd_chain* chain);
LNCD_API uint64_t lncd_chain_state_count(const lncd_chain* chain);
LNCD_API uint64_t lncd_chain_reachable_count(const lncd_chain* chain);
LNCD_API lncd_status lncd_chain_solve_expected(const lncd_chain* chain, lncd_chain_solution* out);
LNCD_API lncd_status lncd_chain_solve_pmf(const lncd_chain* chain, uint64_t horizon,
                                          lncd_pmf** out);
/* Number of states the exact chain would need; UINT64_MAX on overflow. */
LNCD_API uint64_t lncd_chain_states_required(const lncd_network* net);
LNCD_API uint64_t lncd_chain_state_limit(void);

LNCD_API lncd_status lncd_closed_form_delay_two_hop(unsigned n, double p1, double p2,
                                                    double* out);

/* D(n) and E tau_n (worst link first) for n = first..last into arrays of
 * length last-first+1. `tail_out` may be NULL. */
LNCD_API lncd_status lncd_delay_sequence(const lncd_network* net, uint32_t first, uint32_t last,
                                         double* delay_out, double* tail_out);

/* ------------------------------------------------------------------------ */
/* Bounds and concentration */

typedef struct lncd_bounds {
  double capacity_term;
  double dbar;       /* NaN when the worst link is tied */
  double steady_tau; /* NaN when the worst link is tied */
  int unique_worst;
  lncd_worst_link worst;
} lncd_bounds;

LNCD_API lncd_status lncd_bounds_report(const lncd_network* net, lncd_bounds* out);
LNCD_API lncd_status lncd_delay_bound(const lncd_network* net, double* out);
LNCD_API lncd_status lncd_steady_state_tau(const lncd_network* net, double* out);
LNCD_API lncd_status lncd_azuma_epsilon(double t, size_t links, double* out);

typedef struct lncd_crossing_times {
  double t_lower;
  double t_upper;
  double upper_margin;
  double lower_margin;
  int large_enough;
} lncd_crossing_times;

LNCD_API lncd_status lncd_crossing_times_of(double n, double capacity, double delta_prime,
                                            size_t links, double r_bound,
                                            lncd_crossing_times* out);

typedef struct lncd_concentration_report {
  double delta;
  double delta_prime;
  double epsilon_n;
  double leading_term;
  double correction_term;
  double prob_bound;
  int bound_meaningful;
  double t_lower;
  double t_upper;
  double azuma_epsilon_t;
} lncd_concentration_report;

LNCD_API lncd_status lncd_concentration_bound(double n, double worst_prob, double delta,
                                              size_t links, lncd_concentration_report* out);

typedef struct lncd_concentration_check {
  double expected_total;
  int expected_from_exact;
  double epsilon_n;
  uint64_t deviations;
  uint64_t trials;
  double empirical_prob;
  double theorem_bound;
  int pass;
  int below_regime; /* n is smaller than the proven asymptotic regime */
} lncd_concentration_check;

LNCD_API lncd_status lncd_verify_concentration(const lncd_network* net, uint64_t trials,
                                               double delta, unsigned workers,
                                               lncd_concentration_check* out);

typedef struct lncd_rank_concentration_check {
  uint64_t t;
  double epsilon_t;
  double mean_rank;
  uint64_t deviations;
  uint64_t trials;
  double empirical_prob;
  double bound;
  int pass;
  int source_may_drain; /* batch smaller than t */
} lncd_rank_concentration_check;

LNCD_API lncd_status lncd_verify_rank_concentration(const lncd_network* net, uint64_t t,
                                                    uint64_t trials, unsigned workers,
                                                    lncd_rank_concentration_check* out);

/* ------------------------------------------------------------------------ */
/* Fidelity comparison */

typedef struct lncd_fidelity_report {
  lncd_estimate queue;
  lncd_estimate rlnc;
  double gap;
  double gap_half_width;
  uint64_t dominance_violations;
} lncd_fidelity_report;

LNCD_API lncd_status lncd_compare_fidelities(const lncd_network* net, uint64_t trials,
                                             unsigned workers, lncd_fidelity_report* out);

/* ------------------------------------------------------------------------ */
/* Property suite */

typedef struct lncd_suite lncd_suite;

typedef enum lncd_verdict { LNCD_PASS = 0, LNCD_FAIL = 1, LNCD_SKIPPED = 2 } lncd_verdict;

typedef struct lncd_property {
  const char* name; /* owned by the suite */
  lncd_verdict verdict;
  const char* measured;
  const char* required;
} lncd_property;

LNCD_API lncd_status lncd_suite_run(const lncd_network* net, uint64_t trials, unsigned workers,
                                    lncd_suite** out);
LNCD_API size_t lncd_suite_size(const lncd_suite* suite);
LNCD_API lncd_status lncd_suite_entry(const lncd_suite* suite, size_t i, lncd_property* out);
LNCD_API void lncd_suite_destroy(lncd_suite* suite);

#ifdef __cplusplus
}
#endif

#endif /* LNCDELAY_H */
