#include "lncd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "lncd/analysis.hpp"
#include "lncd/gf.hpp"
#include "lncd/markov.hpp"
#include "lncd/rlnc_sim.hpp"

namespace lncd {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Skipped:
      return "skipped";
  }
  return "?";
}

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

PropertyResult make(std::string name, bool ok, std::string measured, std::string required) {
  return {std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(measured),
          std::move(required)};
}

PropertyResult skipped(std::string name, std::string why) {
  return {std::move(name), Verdict::Skipped, "skipped: " + why, "-"};
}

bool chain_fits(const NetworkConfig& c) {
  return CompositionIndex::count(c.links(), c.batch_size) <= kMaxChainStates;
}

NetworkConfig reversed(NetworkConfig c) {
  std::reverse(c.erasure_probs.begin(), c.erasure_probs.end());
  return c;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(const NetworkConfig& input,
                                               const SuiteOptions& options) {
  const NetworkConfig& config = validate(input);
  const std::uint64_t trials = std::max<std::uint64_t>(options.trials, 100);
  const WorstLink worst = worst_link(config);
  std::vector<PropertyResult> out;

  // A property that throws is reported as a failure rather than aborting the
  // suite.
  auto guarded = [&](const std::string& name, const std::function<PropertyResult()>& body) {
    try {
      out.push_back(body());
    } catch (const std::exception& e) {
      out.push_back(make(name, false, std::string("error: ") + e.what(), "no error"));
    }
  };

  // --- model ---------------------------------------------------------------
  guarded("model.worst_link_is_max", [&] {
    const double mx = *std::max_element(config.erasure_probs.begin(), config.erasure_probs.end());
    return make("model.worst_link_is_max", worst.prob == mx,
                "p_m=" + num(worst.prob) + " at link " + std::to_string(worst.index) +
                    (worst.unique ? " (unique)" : " (tied)"),
                "p_m = max p_i=" + num(mx));
  });

  guarded("model.stream_determinism", [&] {
    RandomStream a = derive_stream(config.seed, 7, StreamKind::Erasure, 1);
    RandomStream b = derive_stream(config.seed, 7, StreamKind::Erasure, 1);
    std::uint64_t mismatches = 0;
    for (int i = 0; i < 100'000; ++i) mismatches += a.next() != b.next();
    return make("model.stream_determinism", mismatches == 0,
                std::to_string(mismatches) + " mismatches in 1e5 draws", "0 mismatches");
  });

  guarded("model.bernoulli_rate", [&] {
    constexpr std::uint64_t kDraws = 1'000'000;
    BernoulliStream s = derive_link_stream(config, 0, 1);
    std::uint64_t up = 0;
    for (std::uint64_t i = 0; i < kDraws; ++i) up += s.next();
    const double p = config.erasure_probs[0];
    const double rate = static_cast<double>(up) / kDraws;
    const double se = std::sqrt(p * (1 - p) / kDraws);
    return make("model.bernoulli_rate", std::abs(rate - (1 - p)) <= 5 * se + 1e-15,
                "success rate " + num(rate), num(1 - p) + " +/- 5 SE (" + num(5 * se) + ")");
  });

  // --- gf ------------------------------------------------------------------
  guarded("gf.field_axioms", [&] {
    const gf::FieldContext field(config.field_exponent);
    RandomStream rng = derive_stream(config.seed, 0, StreamKind::Coefficient, 999);
    std::uint64_t bad = 0;
    for (int i = 0; i < 10'000; ++i) {
      const auto a = static_cast<gf::Element>(rng.bits(field.exponent()));
      const auto b = static_cast<gf::Element>(rng.bits(field.exponent()));
      const auto c = static_cast<gf::Element>(rng.bits(field.exponent()));
      bad += field.mul(a, b) != field.mul(b, a);
      bad += field.mul(field.mul(a, b), c) != field.mul(a, field.mul(b, c));
      bad += field.mul(a, b ^ c) != (field.mul(a, b) ^ field.mul(a, c));
      bad += field.mul(a, b) != gf::mul_shift_reduce(a, b, field.polynomial(), field.exponent());
    }
    for (std::uint32_t a = 1; a < field.order(); ++a)
      bad += field.mul(static_cast<gf::Element>(a), field.inv(static_cast<gf::Element>(a))) != 1;
    return make("gf.field_axioms", bad == 0, std::to_string(bad) + " violations",
                "0 violations (1e4 random triples, all inverses, q=" +
                    std::to_string(config.field_exponent) + ")");
  });

  guarded("gf.rank_idempotent", [&] {
    const gf::FieldContext field(config.field_exponent);
    const std::size_t n = std::min<std::size_t>(config.batch_size, 32);
    gf::RankTracker tracker(n);
    RandomStream rng = derive_stream(config.seed, 1, StreamKind::Coefficient, 999);
    std::uint64_t bad = 0;
    for (std::size_t k = 0; k < 2 * n; ++k) {
      gf::CoefficientVector v(n);
      for (auto& x : v) x = static_cast<gf::Element>(rng.bits(field.exponent()));
      const std::size_t before = tracker.rank();
      tracker.insert(field, v);
      const std::size_t mid = tracker.rank();
      tracker.insert(field, v);
      bad += tracker.rank() != mid || mid > before + 1;
    }
    return make("gf.rank_idempotent", bad == 0, std::to_string(bad) + " violations",
                "second insert never changes rank");
  });

  // --- queue simulation ----------------------------------------------------
  guarded("queue.trial_invariants", [&] {
    const std::uint64_t count = std::min<std::uint64_t>(trials, 2'000);
    std::uint64_t bad = 0;
    for (std::uint64_t t = 0; t < count; ++t) {
      const TrialOutcome o = run_trial(config, t, {.capture_trace = true});
      const auto& trace = *o.rank_trace;
      bad += o.total_time != o.first_link_time + o.tail_time;
      bad += trace.size() != o.total_time + 1 || trace.back() != config.batch_size;
      for (std::size_t k = 1; k < trace.size(); ++k) bad += trace[k] < trace[k - 1] || trace[k] > trace[k - 1] + 1;
      for (std::size_t k = 0; k + 1 < trace.size(); ++k) bad += trace[k] == config.batch_size;
    }
    // Conservation through the public step rule.
    QueueState s = QueueState::initial(config);
    std::uint64_t delivered = 0;
    std::vector<BernoulliStream> links;
    for (std::size_t i = 1; i <= config.links(); ++i) links.push_back(derive_link_stream(config, 0, i));
    auto up = std::make_unique<bool[]>(config.links());
    while (delivered < config.batch_size) {
      for (std::size_t i = 0; i < config.links(); ++i) up[i] = links[i].next();
      const StepOutcome st = step(s, {up.get(), config.links()});
      s = st.state;
      delivered += st.delivered;
      bad += s.in_flight() + delivered != config.batch_size;
    }
    return make("queue.trial_invariants", bad == 0,
                std::to_string(bad) + " violations over " + std::to_string(count) + " trials",
                "T=T1+tau, R_t 1-Lipschitz, conservation");
  });

  guarded("queue.interchangeability", [&] {
    if (config.links() < 2) return skipped("queue.interchangeability", "single link");
    NetworkConfig small = config;
    small.batch_size = std::min<std::uint32_t>(config.batch_size, 10);
    const std::uint64_t count = std::min<std::uint64_t>(trials, 100'000);
    const auto a = sample_total_times(small, count, options.run);
    const auto b = sample_total_times(reversed(small), count, options.run);
    const double d = ks_statistic(a, b);
    const double crit = ks_critical_value(1e-6, count, count);
    return make("queue.interchangeability", d <= crit, "KS D=" + num(d),
                "D <= " + num(crit) + " (alpha=1e-6, n=" + std::to_string(small.batch_size) + ")");
  });

  // --- exact chain ---------------------------------------------------------
  guarded("exact.closed_form_table", [&] {
    if (config.links() != 2) return skipped("exact.closed_form_table", "needs two links");
    double worst_gap = 0.0;
    NetworkConfig c = config;
    for (unsigned n = 1; n <= 4; ++n) {
      c.batch_size = n;
      const double exact = solve_expected(build_chain(c)).delay_function;
      const double closed = closed_form_delay_two_hop(n, c.erasure_probs[0], c.erasure_probs[1]);
      worst_gap = std::max(worst_gap, std::abs(exact - closed));
    }
    return make("exact.closed_form_table", worst_gap <= 1e-9, "max |diff|=" + num(worst_gap),
                "<= 1e-9 for n=1..4");
  });

  const bool fits = chain_fits(config);
  std::optional<ChainSolution> solution;
  if (fits) solution = solve_expected(build_chain(config));

  guarded("exact.decomposition", [&] {
    if (!solution) return skipped("exact.decomposition", "state space too large");
    const double first = config.batch_size / (1.0 - config.erasure_probs[0]);
    const double e1 = std::abs(solution->expected_total -
                               (solution->expected_first_link + solution->expected_tail));
    const double e2 = std::abs(solution->expected_first_link - first);
    return make("exact.decomposition", e1 <= 1e-10 * std::max(1.0, solution->expected_total) && e2 <= 1e-10 * std::max(1.0, first),
                "|ET-(ET1+Etau)|=" + num(e1) + ", |ET1-n/(1-p1)|=" + num(e2), "<= 1e-10 (relative)");
  });

  guarded("exact.solver_vs_mc", [&] {
    if (!solution) return skipped("exact.solver_vs_mc", "state space too large");
    const DelaySummary mc = estimate_delay(config, trials, options.run);
    const double gap = std::abs(mc.total.mean - solution->expected_total);
    return make("exact.solver_vs_mc", gap <= 5 * mc.total.standard_error(),
                "MC " + num(mc.total.mean) + " vs exact " + num(solution->expected_total),
                "within 5 SE (" + num(5 * mc.total.standard_error()) + ")");
  });

  std::vector<DelayPoint> sweep;
  {
    NetworkConfig c = config;
    std::uint32_t last = 0;
    for (std::uint32_t n = 1; n <= 12; ++n) {
      c.batch_size = n;
      if (!chain_fits(c)) break;
      last = n;
    }
    if (last >= 1) sweep = delay_sequence(config, 1, last);
  }

  guarded("exact.delay_monotone", [&] {
    if (sweep.size() < 2) return skipped("exact.delay_monotone", "state space too large");
    double worst_drop = 0.0;
    for (std::size_t k = 1; k < sweep.size(); ++k)
      worst_drop = std::max(worst_drop, sweep[k - 1].delay_function - sweep[k].delay_function);
    return make("exact.delay_monotone", worst_drop <= 1e-10, "max decrease " + num(worst_drop),
                "D(n+1) >= D(n) - 1e-10, n=1.." + std::to_string(sweep.size()));
  });

  guarded("exact.delay_bound", [&] {
    if (!worst.unique) return skipped("exact.delay_bound", "tie");
    const double dbar = delay_bound(config);
    double top = 0.0;
    for (const auto& pt : sweep) top = std::max(top, pt.delay_function);
    if (solution) top = std::max(top, solution->delay_function);
    return make("exact.delay_bound", top <= dbar + 1e-10, "max D(n)=" + num(top),
                "<= Dbar=" + num(dbar));
  });

  guarded("exact.steady_tau_limit", [&] {
    if (!worst.unique) return skipped("exact.steady_tau_limit", "tie");
    const double limit = steady_state_tau(worst_link_first(config));
    double top = 0.0;
    for (const auto& pt : sweep) top = std::max(top, pt.expected_tail);
    return make("exact.steady_tau_limit", top <= limit + 1e-10, "max E tau_n=" + num(top),
                "<= steady-state " + num(limit));
  });

  guarded("exact.pmf_reversal", [&] {
    if (config.links() < 2) return skipped("exact.pmf_reversal", "single link");
    NetworkConfig c = config;
    c.batch_size = std::min<std::uint32_t>(config.batch_size, 5);
    if (!chain_fits(c)) return skipped("exact.pmf_reversal", "state space too large");
    const ExactPmf a = solve_pmf(build_chain(c), 100'000);
    const ExactPmf b = solve_pmf(build_chain(reversed(c)), 100'000);
    double gap = a.pmf.size() == b.pmf.size() ? 0.0 : 1.0;
    for (std::size_t k = 0; k < std::min(a.pmf.size(), b.pmf.size()); ++k)
      gap = std::max(gap, a.pmf[k].t == b.pmf[k].t
                              ? std::abs(a.pmf[k].probability - b.pmf[k].probability)
                              : 1.0);
    return make("exact.pmf_reversal", gap <= 1e-10, "max |diff|=" + num(gap),
                "<= 1e-10 (n=" + std::to_string(c.batch_size) + ")");
  });

  // --- packet-level simulation ----------------------------------------------
  guarded("rlnc.dominance", [&] {
    NetworkConfig c = config;
    c.batch_size = std::min<std::uint32_t>(config.batch_size, 20);
    const std::uint64_t count = std::min<std::uint64_t>(trials, 2'000);
    const FidelityReport r = compare_fidelities(c, count, options.run);
    return make("rlnc.dominance", r.dominance_violations == 0,
                std::to_string(r.dominance_violations) + " trials with rlnc T < queue T, gap " +
                    num(r.gap),
                "0 violations (" + std::to_string(count) + " trials, q=" +
                    std::to_string(c.field_exponent) + ")");
  });

  // --- concentration -------------------------------------------------------
  guarded("analysis.concentration", [&] {
    if (config.batch_size < 2) return skipped("analysis.concentration", "n < 2");
    const ConcentrationCheck ch = verify_concentration(config, trials, 0.25, options.run);
    return make("analysis.concentration", ch.pass, "P(|T-ET|>eps)=" + num(ch.empirical_prob),
                "<= " + num(ch.theorem_bound) + (ch.warning.empty() ? "" : " [small n]"));
  });

  guarded("analysis.rank_concentration", [&] {
    NetworkConfig c = config;
    constexpr std::uint64_t kSlot = 100;
    c.batch_size = std::max<std::uint32_t>(config.batch_size, kSlot);
    const RankConcentrationCheck ch = verify_rank_concentration(c, kSlot, trials, options.run);
    return make("analysis.rank_concentration", ch.pass,
                "P(|R_t-ER_t|>=eps_t)=" + num(ch.empirical_prob),
                "<= 1/t=" + num(ch.bound) + " (t=100)");
  });

  return out;
}

}  // namespace lncd
