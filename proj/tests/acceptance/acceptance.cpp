// Acceptance gate: one line per criterion, PASS or FAIL, with the measured
// values next to the limits.
//
//   acceptance [--waive N[,M...]]
//
// Exit status is the number of failed criteria that were not waived. A waived
// criterion is still run and still printed as FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lncd/analysis.hpp"
#include "lncd/markov.hpp"
#include "lncd/queue_sim.hpp"
#include "lncd/rlnc_sim.hpp"
#include "lncd/stats.hpp"

using namespace lncd;

namespace {

NetworkConfig net(std::vector<double> p, std::uint32_t n, std::uint64_t seed = 1, unsigned q = 8) {
  NetworkConfig c;
  c.erasure_probs = std::move(p);
  c.batch_size = n;
  c.field_exponent = q;
  c.seed = seed;
  return c;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok) { pass = pass && ok; }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds, 0 = none
  std::function<void(Outcome&)> body;
};

// ---------------------------------------------------------------------------

void table_one(Outcome& o) {
  const double grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  double worst = 0.0;
  std::vector<std::string> flags;
  for (double p1 : grid)
    for (double p2 : grid)
      for (unsigned n = 1; n <= 4; ++n) {
        const double exact = solve_expected(build_chain(net({p1, p2}, n))).delay_function;
        const double diff = std::abs(closed_form_delay_two_hop(n, p1, p2) - exact);
        worst = std::max(worst, diff);
        if (diff > 1e-9) {
          std::ostringstream f;
          f << "n=" << n << " (" << p1 << "," << p2 << ")";
          flags.push_back(f.str());
        }
      }
  o.require(flags.empty());
  o.detail << "max |closed form - solver| = " << worst << " over 25 pairs x n=1..4 (limit 1e-9)";
  for (const auto& f : flags) o.detail << "; transcription flag " << f << " (solver authoritative)";
}

void delay_bound_sequence(Outcome& o) {
  const auto seq = delay_sequence(net({0.5, 0.3}, 1), 1, 40);
  const double bound = delay_bound(net({0.5, 0.3}, 1));
  double max_drop = 0.0, max_d = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    max_d = std::max(max_d, seq[i].delay_function);
    if (i > 0) max_drop = std::max(max_drop, seq[i - 1].delay_function - seq[i].delay_function);
  }
  o.require(max_drop <= 0.0);
  o.require(max_d <= bound + 1e-10);
  o.require(seq[39].delay_function > seq[3].delay_function);
  o.detail << "largest decrease " << max_drop << ", max D = " << max_d << " <= " << bound
           << ", D(4) = " << seq[3].delay_function << " < D(40) = " << seq[39].delay_function;
}

void decomposition(Outcome& o) {
  double worst = 0.0;
  const std::vector<std::vector<double>> links{{0.5, 0.3}, {0.3, 0.5}, {0.5, 0.3, 0.2},
                                               {0.2, 0.6, 0.4}};
  for (const auto& p : links)
    for (std::uint32_t n = 1; n <= 20; ++n) {
      const auto c = worst_link_first(net(p, n));
      const auto s = solve_expected(build_chain(c));
      const double capacity = n / (1.0 - c.erasure_probs[0]);
      worst = std::max(worst, std::abs(s.expected_total - (capacity + s.expected_tail)));
      worst = std::max(worst, std::abs(s.expected_first_link - capacity));
    }
  o.require(worst <= 1e-10);
  o.detail << "max |E T - n/(1-p1) - E tau| = " << worst << " for n<=20, l in {2,3} (limit 1e-10)";
}

void mc_vs_exact(Outcome& o) {
  const auto c = net({0.5, 0.3}, 10);
  const double exact = solve_expected(build_chain(c)).expected_total;
  const auto s = estimate_delay(c, 1'000'000);
  const double hw99 = s.total.half_width_at(kZ99);
  o.require(std::abs(s.total.mean - exact) <= hw99);
  o.require(hw99 < 0.05);
  o.detail << "MC " << s.total.mean << " vs exact " << exact << ", |diff| = "
           << std::abs(s.total.mean - exact) << " <= 99% hw " << hw99 << " (< 0.05)";
}

void fifty_packet_regime(Outcome& o) {
  const auto c = net({0.5, 0.3}, 50);
  const auto times = sample_total_times(c, 1'000'000);
  const auto s = summarize(times);
  std::uint64_t near = 0;
  for (const auto t : times)
    if (std::abs(static_cast<double>(t) - s.mean) <= 15.0) ++near;
  const double mass = static_cast<double>(near) / static_cast<double>(times.size());
  const bool bracket = s.mean >= 101.68 - s.half_width && s.mean <= 102.50 + s.half_width;
  o.require(bracket);
  o.require(mass >= 0.95);
  o.detail << "mean " << s.mean << " in [" << 101.68 - s.half_width << ", "
           << 102.50 + s.half_width << "]: " << (bracket ? "yes" : "no")
           << "; mass within +/-15 = " << mass << " (required >= 0.95, sd = "
           << std::sqrt(s.variance) << ")";
}

void theorem_concentration(Outcome& o) {
  for (std::uint32_t n : {200u, 400u}) {
    const auto c = net({0.5, 0.3}, n);
    const auto check = verify_concentration(c, 1'000'000, 0.25);
    const auto bound = concentration_bound(n, 0.5, 0.25, 2);
    const double limit = 0.01 + bound.correction_term;
    o.require(check.expected_from_exact);
    o.require(check.empirical_prob <= limit);
    o.detail << "n=" << n << ": P(|T-ET|>" << check.epsilon_n << ") = " << check.empirical_prob
             << " <= " << limit << " (two-term bound " << bound.prob_bound << ")";
    if (n == 200) o.detail << "; ";
  }
}

void rank_concentration(Outcome& o) {
  const auto check = verify_rank_concentration(net({0.5, 0.3}, 200), 100, 1'000'000);
  o.require(check.pass);
  o.detail << "P(|R_100 - " << check.mean_rank << "| >= " << check.epsilon_t
           << ") = " << check.empirical_prob << " <= 1/100";
}

void interchangeability(Outcome& o) {
  double worst = 0.0;
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{0.5, 0.3}, {0.9, 0.1}, {0.2, 0.6}})
    for (std::uint32_t n = 1; n <= 5; ++n) {
      const auto fwd = solve_pmf(build_chain(net({a, b}, n)), 100'000);
      const auto rev = solve_pmf(build_chain(net({b, a}, n)), 100'000);
      if (fwd.pmf.size() != rev.pmf.size()) {
        worst = 1.0;
        continue;
      }
      for (std::size_t i = 0; i < fwd.pmf.size(); ++i) {
        if (fwd.pmf[i].t != rev.pmf[i].t) worst = 1.0;
        worst = std::max(worst, std::abs(fwd.pmf[i].probability - rev.pmf[i].probability));
      }
    }
  const auto x = sample_total_times(net({0.5, 0.3}, 10, 1), 100'000);
  const auto y = sample_total_times(net({0.3, 0.5}, 10, 2), 100'000);
  const double ks = ks_statistic(x, y);
  const double crit = ks_critical_value(0.01, x.size(), y.size());
  o.require(worst <= 1e-10);
  o.require(ks < crit);
  o.detail << "exact max |pmf - reversed pmf| = " << worst << " (limit 1e-10); MC KS D = " << ks
           << " < " << crit << " (1% critical value)";
}

void rlnc_fidelity(Outcome& o) {
  const auto dom = compare_fidelities(net({0.5, 0.3}, 20, 1, 8), 100'000);
  const auto gap = compare_fidelities(net({0.5, 0.3}, 20, 1, 16), 100'000);
  o.require(dom.dominance_violations == 0);
  o.require(gap.gap <= 0.1 && gap.gap >= 0.0);
  o.detail << "q=8: " << dom.dominance_violations
           << " trials with rlnc T < queue T (of 1e5); q=16 mean gap = " << gap.gap << " <= 0.1";
}

void degenerate(Outcome& o) {
  bool deterministic = true;
  for (std::size_t links = 1; links <= 4; ++links)
    for (std::uint32_t n : {1u, 5u, 17u}) {
      const auto c = net(std::vector<double>(links, 0.0), n);
      const std::uint64_t expect = n + links - 1;
      for (std::uint64_t t = 0; t < 200; ++t) {
        deterministic &= run_trial(c, t).total_time == expect;
        deterministic &= run_rlnc_trial(net(c.erasure_probs, n, 1, 16), t).total_time >= expect;
      }
      const auto chain = build_chain(c);
      const auto pmf = solve_pmf(chain, 1000);
      deterministic &= pmf.pmf.size() == 1 && pmf.pmf[0].t == expect;
      deterministic &= std::abs(solve_expected(chain).expected_total - double(expect)) <= 1e-10;
    }
  // Coded transfer over perfect links only slips on a non-innovative packet.
  std::uint64_t rlnc_exact = 0;
  for (std::uint64_t t = 0; t < 1000; ++t)
    rlnc_exact += run_rlnc_trial(net({0, 0, 0}, 6, 1, 16), t).total_time == 8;

  double solver_err = 0.0;
  bool mc_ok = true;
  for (double p : {0.0, 0.25, 0.5, 0.9})
    for (std::uint32_t n : {1u, 7u, 40u}) {
      const auto c = net({p}, n);
      const double target = n / (1.0 - p);
      solver_err = std::max(solver_err, std::abs(solve_expected(build_chain(c)).expected_total - target));
      const auto s = estimate_delay(c, 100'000);
      mc_ok &= std::abs(s.total.mean - target) <= std::max(s.total.half_width_at(kZ99), 1e-12);
    }
  o.require(deterministic);
  o.require(rlnc_exact >= 990);
  o.require(solver_err <= 1e-10);
  o.require(mc_ok);
  o.detail << "pipeline T = n+l-1 in queue sim and solver: " << (deterministic ? "yes" : "no")
           << ", rlnc q=16 on time in " << rlnc_exact << "/1000; single link solver err "
           << solver_err << ", MC within half-width: " << (mc_ok ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> waived;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--waive" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string item;
      while (std::getline(ss, item, ',')) waived.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: acceptance [--waive N[,M...]]\n");
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "closed form two-hop table", 1.0, table_one},
      {2, "delay function bounded and increasing", 10.0, delay_bound_sequence},
      {3, "first-link decomposition", 0.0, decomposition},
      {4, "Monte Carlo vs exact", 30.0, mc_vs_exact},
      {5, "n=50 regime", 60.0, fifty_packet_regime},
      {6, "T_n concentration", 0.0, theorem_concentration},
      {7, "R_t concentration", 0.0, rank_concentration},
      {8, "link interchangeability", 0.0, interchangeability},
      {9, "coded vs queue fidelity", 0.0, rlnc_fidelity},
      {10, "degenerate networks", 0.0, degenerate},
  };

  int failed = 0, unwaived = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.pass = false;
      o.detail << "; runtime over " << c.time_limit << " s";
    }
    if (!o.pass) {
      ++failed;
      if (!waived.count(c.id)) ++unwaived;
    }
    std::printf("criterion %2d %s%s  %s: %s [%.2f s]\n", c.id, o.pass ? "PASS" : "FAIL",
                !o.pass && waived.count(c.id) ? " (waived)" : "", c.title, o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed, %d not waived\n", failed, criteria.size(), unwaived);
  return unwaived;
}
