// lncdelay command-line driver. Links only against the C interface.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lncdelay.h"

using nlohmann::ordered_json;

namespace {

struct Options {
  std::vector<double> links{0.5, 0.3};
  std::uint32_t n = 50;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned field_exponent = 8;
  double delta = 0.25;
  std::uint64_t t = 100;
  std::string format = "csv";
  std::string out;
  std::string n_range = "1:40";
  unsigned workers = 0;
};

struct CliError : std::runtime_error {
  int exit_code;
  CliError(const std::string& msg, int code = 2) : std::runtime_error(msg), exit_code(code) {}
};

void check(lncd_status s, const char* what) {
  if (s != LNCD_OK)
    throw CliError(std::string(what) + ": " + lncd_status_string(s) + ": " + lncd_last_error(), 1);
}

struct NetDeleter {
  void operator()(lncd_network* p) const { lncd_network_destroy(p); }
};
struct ChainDeleter {
  void operator()(lncd_chain* p) const { lncd_chain_destroy(p); }
};
struct PmfDeleter {
  void operator()(lncd_pmf* p) const { lncd_pmf_destroy(p); }
};
struct SuiteDeleter {
  void operator()(lncd_suite* p) const { lncd_suite_destroy(p); }
};
using Net = std::unique_ptr<lncd_network, NetDeleter>;
using ChainPtr = std::unique_ptr<lncd_chain, ChainDeleter>;
using PmfPtr = std::unique_ptr<lncd_pmf, PmfDeleter>;
using SuitePtr = std::unique_ptr<lncd_suite, SuiteDeleter>;

Net make_network(const Options& o, std::uint32_t n) {
  lncd_network* raw = nullptr;
  check(lncd_network_create(o.links.data(), o.links.size(), n, o.field_exponent, o.seed, &raw),
        "network");
  return Net(raw);
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// JSON numbers carry the same 12 significant digits as the CSV.
ordered_json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(num(x).c_str(), nullptr);
}

double rounded(double x) { return std::strtod(num(x).c_str(), nullptr); }

// One flat table; written as CSV rows or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<ordered_json>> rows;

  void add(std::vector<ordered_json> row) { rows.push_back(std::move(row)); }
};

std::string cell(const ordered_json& v) {
  if (v.is_null()) return "nan";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  return num(v.get<double>());
}

std::string render_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell(row[i]);
    s += '\n';
  }
  return s;
}

ordered_json table_json(const Table& t) {
  ordered_json arr = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
    arr.push_back(obj);
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError("cannot open '" + path + "' for writing", 1);
  f << text;
  if (!f) throw CliError("write failed for '" + path + "'", 1);
}

void emit(const Options& o, const Table& t) {
  write_text(o.out, o.format == "json" ? table_json(t).dump(2) + "\n" : render_csv(t));
}

// --- commands ----------------------------------------------------------------

int cmd_simulate(const Options& o) {
  const Net net = make_network(o, o.n);
  lncd_delay_summary s;
  check(lncd_estimate_delay(net.get(), o.trials, o.workers, &s), "simulate");
  Table t{{"n", "trials", "mean", "variance", "half_width", "first_link_mean", "tail_mean",
           "capacity_term", "delay_function", "worst_link"},
          {}};
  t.add({o.n, s.total.trials, jnum(s.total.mean), jnum(s.total.variance),
         jnum(s.total.half_width), jnum(s.first_link.mean), jnum(s.tail.mean),
         jnum(s.capacity_term), jnum(s.delay_function), s.worst.index});
  emit(o, t);
  return 0;
}

int cmd_exact(const Options& o) {
  const Net net = make_network(o, o.n);
  lncd_chain* raw = nullptr;
  check(lncd_chain_build(net.get(), &raw), "exact");
  const ChainPtr chain(raw);
  lncd_chain_solution s;
  check(lncd_chain_solve_expected(chain.get(), &s), "exact");
  Table t{{"n", "states", "expected_total", "expected_first_link", "expected_tail",
           "capacity_term", "delay_function"},
          {}};
  t.add({o.n, lncd_chain_state_count(chain.get()), jnum(s.expected_total),
         jnum(s.expected_first_link), jnum(s.expected_tail), jnum(s.capacity_term),
         jnum(s.delay_function)});
  emit(o, t);
  return 0;
}

int cmd_bounds(const Options& o) {
  const Net net = make_network(o, o.n);
  lncd_bounds b;
  check(lncd_bounds_report(net.get(), &b), "bounds");
  Table t{{"n", "capacity_term", "dbar", "steady_tau", "worst_link", "worst_prob", "unique_worst",
           "epsilon_n", "prob_bound", "t_lower", "t_upper"},
          {}};
  std::vector<ordered_json> row{o.n,       jnum(b.capacity_term), jnum(b.dbar),
                                jnum(b.steady_tau), b.worst.index, jnum(b.worst.prob),
                                b.unique_worst != 0};
  lncd_concentration_report c;
  if (o.n >= 2 &&
      lncd_concentration_bound(o.n, b.worst.prob, o.delta, lncd_network_links(net.get()), &c) ==
          LNCD_OK) {
    row.insert(row.end(), {jnum(c.epsilon_n), jnum(c.prob_bound), jnum(c.t_lower),
                           jnum(c.t_upper)});
  } else {
    row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr});
  }
  t.add(std::move(row));
  emit(o, t);
  if (!b.unique_worst) std::cerr << "note: worst link is tied; dbar and steady_tau undefined\n";
  return 0;
}

struct PmfRows {
  std::vector<std::uint64_t> t;
  std::vector<double> p;
  std::vector<std::string> source;
};

struct Moments {
  double mass = 0.0, mean = 0.0, variance = 0.0;
};

// Moments of the rows as written, so a reader of the file reproduces them.
Moments moments(const PmfRows& rows, const std::string& source) {
  Moments m;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < rows.t.size(); ++i) {
    if (rows.source[i] != source) continue;
    const double x = static_cast<double>(rows.t[i]);
    m.mass += rows.p[i];
    s1 += x * rows.p[i];
  }
  if (m.mass <= 0.0) return m;
  m.mean = s1 / m.mass;
  for (std::size_t i = 0; i < rows.t.size(); ++i) {
    if (rows.source[i] != source) continue;
    const double d = static_cast<double>(rows.t[i]) - m.mean;
    s2 += d * d * rows.p[i];
  }
  m.variance = s2 / m.mass;
  return m;
}

void append(PmfRows& rows, const lncd_pmf* pmf, const char* source) {
  const std::size_t k = lncd_pmf_size(pmf);
  const std::uint64_t* t = lncd_pmf_slots(pmf);
  const double* p = lncd_pmf_probabilities(pmf);
  for (std::size_t i = 0; i < k; ++i) {
    rows.t.push_back(t[i]);
    rows.p.push_back(rounded(p[i]));
    rows.source.emplace_back(source);
  }
}

int cmd_pmf(const Options& o) {
  const Net net = make_network(o, o.n);
  PmfRows rows;

  lncd_pmf* raw = nullptr;
  check(lncd_empirical_pmf(net.get(), o.trials, o.workers, &raw), "pmf");
  PmfPtr mc(raw);
  append(rows, mc.get(), "mc");

  ordered_json summary;
  summary["n"] = o.n;
  summary["links"] = o.links;
  summary["seed"] = o.seed;
  summary["trials"] = o.trials;

  lncd_delay_summary sim;
  check(lncd_estimate_delay(net.get(), o.trials, o.workers, &sim), "pmf");
  lncd_bounds b;
  check(lncd_bounds_report(net.get(), &b), "pmf");

  bool have_exact = false;
  lncd_chain_solution exact{};
  if (lncd_chain_states_required(net.get()) <= lncd_chain_state_limit()) {
    lncd_chain* craw = nullptr;
    check(lncd_chain_build(net.get(), &craw), "pmf");
    const ChainPtr chain(craw);
    check(lncd_chain_solve_expected(chain.get(), &exact), "pmf");
    // Far beyond the mean; propagation stops once the transient mass is negligible.
    const auto horizon = static_cast<std::uint64_t>(50.0 * exact.expected_total) + 1000;
    lncd_pmf* praw = nullptr;
    check(lncd_chain_solve_pmf(chain.get(), horizon, &praw), "pmf");
    PmfPtr ep(praw);
    append(rows, ep.get(), "exact");
    summary["exact_tail_mass"] = jnum(lncd_pmf_tail_mass(ep.get()));
    have_exact = true;
  }

  if (o.format == "json") {
    ordered_json j;
    j["t"] = rows.t;
    ordered_json p = ordered_json::array();
    for (const double x : rows.p) p.push_back(jnum(x));
    j["p"] = p;
    j["source"] = rows.source;
    write_text(o.out, j.dump(2) + "\n");
  } else {
    Table t{{"t", "probability", "source"}, {}};
    for (std::size_t i = 0; i < rows.t.size(); ++i)
      t.add({rows.t[i], jnum(rows.p[i]), rows.source[i]});
    write_text(o.out, render_csv(t));
  }

  const Moments mm = moments(rows, "mc");
  summary["mc"] = {{"mass", jnum(mm.mass)},
                   {"mean", jnum(mm.mean)},
                   {"variance", jnum(mm.variance)},
                   {"half_width", jnum(sim.total.half_width)}};
  if (have_exact) {
    const Moments me = moments(rows, "exact");
    summary["exact"] = {{"mass", jnum(me.mass)},
                        {"mean", jnum(me.mean)},
                        {"variance", jnum(me.variance)},
                        {"expected_total", jnum(exact.expected_total)}};
  }
  ordered_json decomposition = {{"capacity_term", jnum(b.capacity_term)},
                                {"expected_tail_mc", jnum(sim.tail.mean)},
                                {"delay_function_mc", jnum(sim.delay_function)},
                                {"dbar", jnum(b.dbar)}};
  if (have_exact) {
    decomposition["expected_tail_exact"] = jnum(exact.expected_tail);
    decomposition["delay_function_exact"] = jnum(exact.delay_function);
  }
  summary["decomposition"] = decomposition;

  if (!o.out.empty() && o.out != "-")
    write_text(o.out + ".summary.json", summary.dump(2) + "\n");
  else
    std::cerr << summary.dump(2) << "\n";
  return 0;
}

std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw CliError("--n-range: expected a:b");
  try {
    const long a = std::stol(text.substr(0, colon));
    const long b = std::stol(text.substr(colon + 1));
    if (a < 1 || b < a || b > 0xffffffffL) throw CliError("--n-range: need 1 <= a <= b");
    return {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  } catch (const std::logic_error&) {
    throw CliError("--n-range: expected a:b");
  }
}

int cmd_convergence(const Options& o) {
  const auto [first, last] = parse_range(o.n_range);
  const Net net = make_network(o, last);
  lncd_bounds b;
  check(lncd_bounds_report(net.get(), &b), "convergence");

  const bool exact = lncd_chain_states_required(net.get()) <= lncd_chain_state_limit();
  Table t{{"n", exact ? "D_exact" : "D_mc", "half_width", "dbar"}, {}};
  if (exact) {
    std::vector<double> d(last - first + 1);
    check(lncd_delay_sequence(net.get(), first, last, d.data(), nullptr), "convergence");
    for (std::uint32_t n = first; n <= last; ++n)
      t.add({n, jnum(d[n - first]), jnum(0.0), jnum(b.dbar)});
  } else {
    for (std::uint32_t n = first; n <= last; ++n) {
      lncd_network* raw = nullptr;
      check(lncd_network_with_batch(net.get(), n, &raw), "convergence");
      const Net sized(raw);
      lncd_delay_summary s;
      check(lncd_estimate_delay(sized.get(), o.trials, o.workers, &s), "convergence");
      t.add({n, jnum(s.delay_function), jnum(s.total.half_width), jnum(b.dbar)});
    }
  }
  emit(o, t);
  return 0;
}

int cmd_concentration(const Options& o) {
  const Net net = make_network(o, o.n);
  lncd_concentration_check c;
  check(lncd_verify_concentration(net.get(), o.trials, o.delta, o.workers, &c), "concentration");
  lncd_rank_concentration_check r;
  check(lncd_verify_rank_concentration(net.get(), o.t, o.trials, o.workers, &r), "concentration");
  Table t{{"quantity", "parameter", "epsilon", "reference_mean", "deviations", "trials",
           "empirical_prob", "bound", "pass"},
          {}};
  t.add({"T_n", o.n, jnum(c.epsilon_n), jnum(c.expected_total), c.deviations, c.trials,
         jnum(c.empirical_prob), jnum(c.theorem_bound), c.pass != 0});
  t.add({"R_t", r.t, jnum(r.epsilon_t), jnum(r.mean_rank), r.deviations, r.trials,
         jnum(r.empirical_prob), jnum(r.bound), r.pass != 0});
  emit(o, t);
  if (c.below_regime)
    std::cerr << "warning: n=" << o.n
              << " is below the range where the T_n bound is proven; shown for reference\n";
  if (r.source_may_drain)
    std::cerr << "warning: batch smaller than t, R_t saturates at n\n";
  return 0;
}

int cmd_compare(const Options& o) {
  const Net net = make_network(o, o.n);
  lncd_fidelity_report r;
  check(lncd_compare_fidelities(net.get(), o.trials, o.workers, &r), "compare");
  Table t{{"n", "field_exponent", "trials", "queue_mean", "rlnc_mean", "gap", "gap_half_width",
           "dominance_violations"},
          {}};
  t.add({o.n, o.field_exponent, r.queue.trials, jnum(r.queue.mean), jnum(r.rlnc.mean),
         jnum(r.gap), jnum(r.gap_half_width), r.dominance_violations});
  emit(o, t);
  return 0;
}

int cmd_verify(const Options& o) {
  const Net net = make_network(o, o.n);
  lncd_suite* raw = nullptr;
  check(lncd_suite_run(net.get(), o.trials, o.workers, &raw), "verify");
  const SuitePtr suite(raw);
  Table t{{"property", "verdict", "measured", "required"}, {}};
  int failures = 0;
  for (std::size_t i = 0; i < lncd_suite_size(suite.get()); ++i) {
    lncd_property p;
    check(lncd_suite_entry(suite.get(), i, &p), "verify");
    const char* verdict = p.verdict == LNCD_PASS ? "pass" : p.verdict == LNCD_FAIL ? "FAIL" : "skipped";
    if (p.verdict == LNCD_FAIL) ++failures;
    std::printf("%-32s %-8s measured %s; required %s\n", p.name, verdict, p.measured, p.required);
    t.add({p.name, verdict, p.measured, p.required});
  }
  std::printf("%d of %zu properties failed\n", failures, lncd_suite_size(suite.get()));
  std::fflush(stdout);
  if (!o.out.empty()) emit(o, t);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay of random linear network coding over erasure line networks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  Options o;
  app.add_option("--links", o.links, "erasure probabilities, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--n", o.n, "batch size")->capture_default_str()->check(CLI::Range(1u, 0xffffffffu));
  app.add_option("--trials", o.trials, "Monte Carlo trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "base seed")->envname("LNCD_SEED")->capture_default_str();
  app.add_option("--field-exponent", o.field_exponent, "q for GF(2^q)")
      ->capture_default_str()
      ->check(CLI::Range(1u, 16u));
  app.add_option("--delta", o.delta, "concentration exponent in (0, 1/2)")->capture_default_str();
  app.add_option("--t", o.t, "slot for the rank concentration check")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "csv or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", o.out, "output file (stdout when omitted)");
  app.add_option("--n-range", o.n_range, "a:b for convergence")->capture_default_str();
  app.add_option("--workers", o.workers, "worker threads, 0 = all cores")->capture_default_str();

  using Command = int (*)(const Options&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands{
      {"simulate", "Monte Carlo estimate of E T_n", cmd_simulate},
      {"exact", "exact E T_n from the absorbing chain", cmd_exact},
      {"bounds", "capacity term, delay bound and concentration bound", cmd_bounds},
      {"pmf", "distribution of T_n (Monte Carlo and exact)", cmd_pmf},
      {"convergence", "delay function over a range of n", cmd_convergence},
      {"concentration", "empirical concentration of T_n and R_t", cmd_concentration},
      {"compare", "coded simulation against the queue model", cmd_compare},
      {"verify", "run every property check", cmd_verify},
  };
  Command selected = nullptr;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->callback([&selected, fn = fn] { selected = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return selected(o);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code;
  }
}
