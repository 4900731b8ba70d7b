#include "lncd/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lncd {

// ---------------------------------------------------------------------------
// CompositionIndex

std::uint64_t CompositionIndex::count(std::size_t parts, std::uint32_t max_sum) {
  // C(max_sum + parts, parts) = prod_{k=1..parts} (max_sum + k) / k, exact at
  // every step because each partial product is itself a binomial.
  unsigned __int128 c = 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t k = 1; k <= parts; ++k) {
    c = c * (max_sum + k) / k;
    if (c > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(c);
}

CompositionIndex::CompositionIndex(std::size_t parts, std::uint32_t max_sum)
    : parts_(parts), max_sum_(max_sum), size_(count(parts, max_sum)) {
  if (size_ > kMaxChainStates) {
    std::ostringstream msg;
    msg << "state space of " << size_ << " states exceeds the limit of " << kMaxChainStates
        << "; use Monte Carlo instead";
    throw Error(ErrorCode::StateSpaceTooLarge, msg.str());
  }
  const std::size_t rows = max_sum_ + parts_ + 2;
  const std::size_t cols = parts_ + 2;
  table_.assign(rows * cols, 0);
  for (std::size_t n = 0; n < rows; ++n) {
    table_[n * cols] = 1;
    for (std::size_t k = 1; k < cols && k <= n; ++k)
      table_[n * cols + k] = table_[(n - 1) * cols + k - 1] + table_[(n - 1) * cols + k];
  }
}

std::uint64_t CompositionIndex::binom(std::uint64_t n, std::uint64_t k) const {
  if (k > n) return 0;
  return table_[n * (parts_ + 2) + k];
}

std::uint64_t CompositionIndex::encode(std::span<const std::uint32_t> d) const {
  if (d.size() != parts_)
    throw Error(ErrorCode::DimensionMismatch, "encode: wrong number of parts");
  std::uint64_t idx = 0;
  std::uint64_t budget = max_sum_;
  for (std::size_t i = 0; i < parts_; ++i) {
    if (d[i] > budget) throw Error(ErrorCode::InvalidArgument, "encode: sum exceeds maximum");
    const std::uint64_t r = parts_ - i - 1;
    // Number of vectors whose i-th entry is below d[i], by the hockey stick.
    idx += binom(budget + r + 1, r + 1) - binom(budget - d[i] + r + 1, r + 1);
    budget -= d[i];
  }
  return idx;
}

std::vector<std::uint32_t> CompositionIndex::decode(std::uint64_t index) const {
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "decode: index out of range");
  std::vector<std::uint32_t> d(parts_, 0);
  std::uint64_t budget = max_sum_;
  for (std::size_t i = 0; i < parts_; ++i) {
    const std::uint64_t r = parts_ - i - 1;
    std::uint32_t x = 0;
    for (;;) {
      const std::uint64_t block = binom(budget - x + r, r);
      if (index < block) break;
      index -= block;
      ++x;
    }
    d[i] = x;
    budget -= x;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Chain

Chain::Chain(const NetworkConfig& config)
    : config_(validate(config)), index_(config.links(), config.batch_size) {}

Chain build_chain(const NetworkConfig& config) {
  Chain chain(config);
  const std::size_t links = config.links();
  const auto& p = config.erasure_probs;
  const std::uint64_t states = chain.index_.size();

  std::vector<std::uint32_t> initial(links, 0);
  initial[0] = config.batch_size;
  chain.initial_ = static_cast<std::uint32_t>(chain.index_.encode(initial));

  chain.offsets_.assign(states + 1, 0);
  chain.self_loop_.assign(states, 0.0);
  chain.transitions_.reserve(states * 2);

  std::vector<std::uint64_t> sum_key(states);
  std::vector<std::size_t> active;
  std::vector<std::uint32_t> next(links);
  for (std::uint64_t s = 0; s < states; ++s) {
    chain.offsets_[s] = chain.transitions_.size();
    const std::vector<std::uint32_t> d = chain.index_.decode(s);

    // Order key: units remaining, then how far they still have to travel.
    std::uint64_t total = 0;
    std::uint64_t potential = 0;
    for (std::size_t i = 0; i < links; ++i) {
      total += d[i];
      potential += static_cast<std::uint64_t>(d[i]) * (links - i - 1);
    }
    sum_key[s] = total * (static_cast<std::uint64_t>(config.batch_size) * links + 1) + potential;

    if (s == Chain::absorbed_state()) {
      chain.transitions_.push_back({0, 1.0});
      chain.self_loop_[s] = 1.0;
      continue;
    }
    active.clear();
    for (std::size_t i = 0; i < links; ++i)
      if (d[i] > 0) active.push_back(i);
    const std::uint64_t outcomes = std::uint64_t{1} << active.size();
    for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
      double prob = 1.0;
      next = d;
      for (std::size_t k = 0; k < active.size(); ++k) {
        const std::size_t i = active[k];
        if (mask >> k & 1u) {
          prob *= 1.0 - p[i];
          --next[i];
          if (i + 1 < links) ++next[i + 1];
        } else {
          prob *= p[i];
        }
      }
      if (prob == 0.0) continue;
      if (mask == 0) {
        chain.self_loop_[s] = prob;
      }
      chain.transitions_.push_back({static_cast<std::uint32_t>(chain.index_.encode(next)), prob});
    }
  }
  chain.offsets_[states] = chain.transitions_.size();

  chain.order_.resize(states);
  std::iota(chain.order_.begin(), chain.order_.end(), 0u);
  std::stable_sort(chain.order_.begin(), chain.order_.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return sum_key[a] < sum_key[b]; });

  std::vector<char> seen(states, 0);
  std::vector<std::uint32_t> stack{chain.initial_};
  seen[chain.initial_] = 1;
  while (!stack.empty()) {
    const std::uint32_t s = stack.back();
    stack.pop_back();
    for (const auto& tr : chain.row(s)) {
      if (!seen[tr.target]) {
        seen[tr.target] = 1;
        stack.push_back(tr.target);
      }
    }
  }
  chain.reachable_ = static_cast<std::uint64_t>(std::count(seen.begin(), seen.end(), 1));
  return chain;
}

// ---------------------------------------------------------------------------
// Expected values

ChainSolution solve_expected(const Chain& chain) {
  const auto& config = chain.config();
  const std::uint64_t states = chain.state_count();
  const auto order = chain.solve_order();

  // Backward pass: expected slots to absorption from every state.
  std::vector<double> to_absorb(states, 0.0);
  for (const std::uint32_t s : order) {
    if (s == Chain::absorbed_state()) continue;
    const double leave = 1.0 - chain.self_loop(s);
    if (!(leave > 0.0)) {
      std::ostringstream msg;
      msg << "singular first-step system at state " << s << " (self-loop probability 1)";
      throw Error(ErrorCode::SingularSystem, msg.str());
    }
    double acc = 1.0;
    for (const auto& tr : chain.row(s))
      if (tr.target != s) acc += tr.prob * to_absorb[tr.target];
    to_absorb[s] = acc / leave;
  }

  // Forward pass: probability of ever visiting each state. The first link is
  // empty exactly on the states whose leading entry is 0; T_n^(1) is the time
  // spent outside that set and tau_n the time spent inside it.
  std::vector<double> visit(states, 0.0);
  visit[chain.initial_state()] = 1.0;
  std::vector<char> first_link_busy(states, 0);
  for (std::uint64_t s = 0; s < states; ++s)
    first_link_busy[s] = chain.index().decode(s)[0] > 0;

  double first_link_time = 0.0;
  double tail_time = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::uint32_t s = *it;
    if (s == Chain::absorbed_state() || visit[s] == 0.0) continue;
    const double leave = 1.0 - chain.self_loop(s);
    if (!first_link_busy[s]) continue;
    first_link_time += visit[s] / leave;
    for (const auto& tr : chain.row(s)) {
      if (tr.target == s) continue;
      const double flow = visit[s] * tr.prob / leave;
      if (first_link_busy[tr.target])
        visit[tr.target] += flow;
      else
        tail_time += flow * to_absorb[tr.target];  // hand-off into the tail phase
    }
  }

  ChainSolution sol;
  sol.expected_total = to_absorb[chain.initial_state()];
  sol.expected_first_link = first_link_time;
  sol.expected_tail = tail_time;
  sol.capacity_term = static_cast<double>(config.batch_size) / (1.0 - worst_link(config).prob);
  sol.delay_function = sol.expected_total - sol.capacity_term;
  return sol;
}

// ---------------------------------------------------------------------------
// Distribution of T_n

ExactPmf solve_pmf(const Chain& chain, std::uint64_t horizon) {
  if (horizon == 0) throw Error(ErrorCode::InvalidArgument, "horizon: must be >= 1");
  const std::uint64_t states = chain.state_count();
  const double n = chain.config().batch_size;

  std::vector<double> in_flight(states);
  for (std::uint64_t s = 0; s < states; ++s) {
    const auto d = chain.index().decode(s);
    in_flight[s] = std::accumulate(d.begin(), d.end(), 0.0);
  }

  ExactPmf out;
  std::vector<double> cur(states, 0.0);
  std::vector<double> nxt(states, 0.0);
  std::vector<std::uint32_t> live{chain.initial_state()};
  std::vector<char> queued(states, 0);
  cur[chain.initial_state()] = 1.0;
  out.expected_rank.push_back(n - in_flight[chain.initial_state()]);

  double absorbed = 0.0;
  double transient = 1.0;
  std::vector<std::uint32_t> next_live;
  for (std::uint64_t t = 1; t <= horizon && transient > 1e-15; ++t) {
    next_live.clear();
    double entering = 0.0;
    for (const std::uint32_t s : live) {
      const double mass = cur[s];
      cur[s] = 0.0;
      if (mass == 0.0) continue;
      for (const auto& tr : chain.row(s)) {
        if (tr.target == Chain::absorbed_state()) {
          entering += mass * tr.prob;
          continue;
        }
        if (!queued[tr.target]) {
          queued[tr.target] = 1;
          next_live.push_back(tr.target);
        }
        nxt[tr.target] += mass * tr.prob;
      }
    }
    transient = 0.0;
    double rank = n;
    for (const std::uint32_t s : next_live) {
      queued[s] = 0;
      transient += nxt[s];
      rank -= nxt[s] * in_flight[s];
    }
    std::swap(cur, nxt);
    std::swap(live, next_live);
    absorbed += entering;
    if (entering > 0.0) out.pmf.push_back({t, entering});
    out.expected_rank.push_back(rank);
  }
  out.captured_mass = absorbed;
  out.tail_mass = transient;
  out.complete = absorbed >= 1.0 - 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms and sweeps

double closed_form_delay_two_hop(unsigned n, double p1, double p2) {
  const double pm = std::max(p1, p2);
  const double capacity_shift = n / (1.0 - p1) - n / (1.0 - pm);
  const double q = 1.0 - p1 * p2;
  switch (n) {
    case 1:
      return capacity_shift + 1.0 / (1.0 - p2);
    case 2:
      return capacity_shift + 2.0 / (1.0 - p2) - 1.0 / q;
    case 3: {
      const double num =
          1.0 + p2 * (2.0 - p1 * (6.0 - p1 + (2.0 - 5.0 * p1) * p2 +
                                  (1.0 - 3.0 * (1.0 - p1) * p1) * p2 * p2));
      return capacity_shift + num / ((1.0 - p2) * q * q * q);
    }
    case 4: {
      const double p1_2 = p1 * p1;
      const double p1_3 = p1_2 * p1;
      const double p1_4 = p1_3 * p1;
      const double p2_4 = p2 * p2 * p2 * p2;
      const double inner =
          11.0 + 4.0 * p1_4 * p2_4 + p2 * (5.0 + (5.0 - p2) * p2) +
          p1_3 * p2 * (1.0 - p2 * (5.0 + 2.0 * p2 * (5.0 + 3.0 * p2))) -
          p1 * (4.0 + p2 * (15.0 + p2 * (21.0 - (1.0 - p2) * p2))) +
          p1_2 * (1.0 - p2 * (1.0 - p2 * (31.0 + p2 * (5.0 + 4.0 * p2))));
      const double num = 1.0 + p2 * (3.0 - p1 * inner);
      return capacity_shift + num / ((1.0 - p2) * q * q * q * q * q);
    }
    default: {
      std::ostringstream msg;
      msg << "closed_form_delay_two_hop: n must be in 1..4 (got " << n << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
}

std::vector<DelayPoint> delay_sequence(const NetworkConfig& base, std::uint32_t first,
                                       std::uint32_t last) {
  if (first == 0 || last < first)
    throw Error(ErrorCode::InvalidArgument, "n range must satisfy 1 <= first <= last");
  NetworkConfig config = worst_link_first(validate(base));
  std::vector<DelayPoint> out;
  out.reserve(last - first + 1);
  for (std::uint32_t n = first; n <= last; ++n) {
    config.batch_size = n;
    const ChainSolution sol = solve_expected(build_chain(config));
    out.push_back({n, sol.delay_function, sol.expected_tail});
  }
  return out;
}

}  // namespace lncd
