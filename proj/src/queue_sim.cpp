#include "lncd/queue_sim.hpp"

#include <sstream>

#include "parallel.hpp"

namespace lncd {

StepOutcome step(const QueueState& state, std::span<const bool> link_up) {
  const std::size_t links = state.diffs.size();
  if (link_up.size() != links)
    throw Error(ErrorCode::DimensionMismatch, "step: link_up length must equal link count");
  StepOutcome out{state, false};
  auto& d = out.state.diffs;
  for (std::size_t i = 0; i < links; ++i) {
    if (state.diffs[i] >= 1 && link_up[i]) {
      --d[i];
      if (i + 1 < links)
        ++d[i + 1];
      else
        out.delivered = true;
    }
  }
  return out;
}

namespace {

// Slot loop shared by run_trial and rank_after. `on_slot(t, rank)` runs after
// each slot; returning false stops the loop.
class QueueRun {
 public:
  QueueRun(const NetworkConfig& config, std::uint64_t trial)
      : diffs_(QueueState::initial(config).diffs), batch_(config.batch_size) {
    streams_.reserve(config.links());
    for (std::size_t i = 1; i <= config.links(); ++i)
      streams_.push_back(derive_link_stream(config, trial, i));
    moved_.resize(config.links());
  }

  // Advances one slot using pre-slot counts.
  void advance() {
    const std::size_t links = diffs_.size();
    for (std::size_t i = 0; i < links; ++i) moved_[i] = streams_[i].next() && diffs_[i] > 0;
    for (std::size_t i = 0; i < links; ++i) {
      if (!moved_[i]) continue;
      --diffs_[i];
      if (i + 1 < links)
        ++diffs_[i + 1];
      else
        ++rank_;
    }
    ++slot_;
    if (first_link_time_ == 0 && diffs_[0] == 0) first_link_time_ = slot_;
  }

  bool done() const noexcept { return rank_ == batch_; }
  std::uint64_t slot() const noexcept { return slot_; }
  std::uint32_t rank() const noexcept { return rank_; }
  std::uint64_t first_link_time() const noexcept { return first_link_time_; }

 private:
  std::vector<std::uint32_t> diffs_;
  std::vector<BernoulliStream> streams_;
  std::vector<char> moved_;
  std::uint32_t batch_;
  std::uint32_t rank_ = 0;
  std::uint64_t slot_ = 0;
  std::uint64_t first_link_time_ = 0;
};

[[noreturn]] void cap_exceeded(std::uint64_t cap, std::uint64_t trial) {
  std::ostringstream msg;
  msg << "trial " << trial << " did not finish within " << cap << " slots";
  throw Error(ErrorCode::SafetyCapExceeded, msg.str());
}

}  // namespace

TrialOutcome run_trial(const NetworkConfig& config, std::uint64_t trial_index,
                       const TrialOptions& options) {
  QueueRun run(config, trial_index);
  TrialOutcome out;
  std::vector<std::uint32_t> trace;
  if (options.capture_trace) trace.push_back(0);
  while (!run.done()) {
    if (run.slot() >= options.slot_cap) cap_exceeded(options.slot_cap, trial_index);
    run.advance();
    if (options.capture_trace) trace.push_back(run.rank());
  }
  out.total_time = run.slot();
  out.first_link_time = run.first_link_time();
  out.tail_time = out.total_time - out.first_link_time;
  if (options.capture_trace) out.rank_trace = std::move(trace);
  return out;
}

std::uint32_t rank_after(const NetworkConfig& config, std::uint64_t trial_index,
                         std::uint64_t slots) {
  QueueRun run(config, trial_index);
  while (run.slot() < slots && !run.done()) run.advance();
  return run.rank();
}

std::vector<std::uint32_t> sample_total_times(const NetworkConfig& config, std::uint64_t trials,
                                              const RunOptions& run) {
  validate(config);
  std::vector<std::uint32_t> times(trials);
  detail::for_each_trial(trials, run.workers, [&](std::uint64_t t) {
    times[t] = static_cast<std::uint32_t>(run_trial(config, t).total_time);
  });
  return times;
}

DelaySummary estimate_delay(const NetworkConfig& config, std::uint64_t trials,
                            const RunOptions& run) {
  validate(config);
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials: must be >= 1");
  std::vector<std::uint32_t> total(trials);
  std::vector<std::uint32_t> first(trials);
  std::vector<std::uint32_t> tail(trials);
  detail::for_each_trial(trials, run.workers, [&](std::uint64_t t) {
    const TrialOutcome o = run_trial(config, t);
    total[t] = static_cast<std::uint32_t>(o.total_time);
    first[t] = static_cast<std::uint32_t>(o.first_link_time);
    tail[t] = static_cast<std::uint32_t>(o.tail_time);
  });
  DelaySummary s;
  s.total = summarize(total);
  s.first_link = summarize(first);
  s.tail = summarize(tail);
  s.worst = worst_link(config);
  s.capacity_term = static_cast<double>(config.batch_size) / (1.0 - s.worst.prob);
  s.delay_function = s.total.mean - s.capacity_term;
  return s;
}

std::vector<PmfPoint> empirical_pmf(const NetworkConfig& config, std::uint64_t trials,
                                    const RunOptions& run) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials: must be >= 1");
  return histogram(sample_total_times(config, trials, run));
}

}  // namespace lncd
