#include "lncd/rlnc_sim.hpp"

#include <sstream>

#include "parallel.hpp"

namespace lncd {

TrialOutcome run_rlnc_trial(const NetworkConfig& config, std::uint64_t trial_index,
                            const TrialOptions& options, const RankObserver& observer) {
  validate(config);
  const std::size_t links = config.links();
  const std::size_t n = config.batch_size;
  const gf::FieldContext& field = gf::FieldContext::standard(config.field_exponent);

  // Node 0 is the source, node `links` the destination.
  std::vector<gf::RankTracker> nodes;
  nodes.reserve(links + 1);
  nodes.push_back(gf::RankTracker::full(n));
  for (std::size_t i = 0; i < links; ++i) nodes.emplace_back(n);

  std::vector<BernoulliStream> erasures;
  std::vector<RandomStream> coefficients;
  for (std::size_t i = 1; i <= links; ++i) {
    erasures.push_back(derive_link_stream(config, trial_index, i));
    coefficients.push_back(derive_stream(config.seed, trial_index, StreamKind::Coefficient, i));
  }

  std::vector<gf::CoefficientVector> in_transit(links);
  std::vector<char> received(links);
  std::vector<std::size_t> ranks(links + 1);

  TrialOutcome out;
  std::vector<std::uint32_t> trace;
  if (options.capture_trace) trace.push_back(0);
  std::uint64_t slot = 0;
  while (!nodes.back().complete()) {
    if (slot >= options.slot_cap) {
      std::ostringstream msg;
      msg << "rlnc trial " << trial_index << " did not finish within " << options.slot_cap
          << " slots";
      throw Error(ErrorCode::SafetyCapExceeded, msg.str());
    }
    // Every link state is drawn every slot so the erasure pattern matches the
    // queue simulation slot for slot. Combinations use pre-slot stores.
    for (std::size_t i = 0; i < links; ++i) {
      const bool up = erasures[i].next();
      received[i] = up && nodes[i].rank() > 0;
      if (received[i])
        in_transit[i] = gf::random_combination(field, nodes[i].basis(), coefficients[i]);
    }
    for (std::size_t i = 0; i < links; ++i)
      if (received[i]) nodes[i + 1].insert(field, std::move(in_transit[i]));
    ++slot;
    if (out.first_link_time == 0 && nodes[1].complete()) out.first_link_time = slot;
    if (options.capture_trace) trace.push_back(static_cast<std::uint32_t>(nodes.back().rank()));
    if (observer) {
      for (std::size_t i = 0; i <= links; ++i) ranks[i] = nodes[i].rank();
      observer(slot, ranks);
    }
  }
  out.total_time = slot;
  out.tail_time = out.total_time - out.first_link_time;
  if (options.capture_trace) out.rank_trace = std::move(trace);
  return out;
}

FidelityReport compare_fidelities(const NetworkConfig& config, std::uint64_t trials,
                                  const RunOptions& run) {
  validate(config);
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials: must be >= 1");
  std::vector<std::uint32_t> queue(trials);
  std::vector<std::uint32_t> rlnc(trials);
  detail::for_each_trial(trials, run.workers, [&](std::uint64_t t) {
    queue[t] = static_cast<std::uint32_t>(run_trial(config, t).total_time);
    rlnc[t] = static_cast<std::uint32_t>(run_rlnc_trial(config, t).total_time);
  });
  FidelityReport report;
  report.queue = summarize(queue);
  report.rlnc = summarize(rlnc);
  report.gap = report.rlnc.mean - report.queue.mean;
  std::vector<double> diff(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    diff[t] = static_cast<double>(rlnc[t]) - static_cast<double>(queue[t]);
    if (rlnc[t] < queue[t]) ++report.dominance_violations;
  }
  report.gap_half_width = summarize(diff).half_width;
  return report;
}

}  // namespace lncd
