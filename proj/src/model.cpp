#include "lncd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lncd {

QueueState QueueState::initial(const NetworkConfig& config) {
  QueueState state;
  state.diffs.assign(config.links(), 0);
  if (!state.diffs.empty()) state.diffs.front() = config.batch_size;
  return state;
}

std::uint64_t QueueState::in_flight() const noexcept {
  return std::accumulate(diffs.begin(), diffs.end(), std::uint64_t{0});
}

const NetworkConfig& validate(const NetworkConfig& config) {
  if (config.erasure_probs.empty())
    throw Error(ErrorCode::InvalidArgument,
                "erasure_probs: at least one link required");
  for (std::size_t i = 0; i < config.erasure_probs.size(); ++i) {
    const double p = config.erasure_probs[i];
    if (!(p >= 0.0)) {
      std::ostringstream msg;
      msg << "erasure_probs[" << i + 1 << "]: erasure probability must be >= 0 (got " << p << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
    if (!(p < 1.0)) {
      std::ostringstream msg;
      msg << "erasure_probs[" << i + 1 << "]: erasure probability must be < 1 (got " << p << ")";
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
  if (config.batch_size == 0)
    throw Error(ErrorCode::InvalidArgument, "batch_size: must be >= 1");
  if (config.field_exponent < kMinFieldExponent || config.field_exponent > kMaxFieldExponent) {
    std::ostringstream msg;
    msg << "field_exponent: must be in [" << kMinFieldExponent << ", " << kMaxFieldExponent
        << "] (got " << config.field_exponent << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return config;
}

WorstLink worst_link(const NetworkConfig& config) {
  WorstLink worst;
  const auto& probs = config.erasure_probs;
  if (probs.empty()) return worst;
  const auto it = std::max_element(probs.begin(), probs.end());
  worst.index = static_cast<std::size_t>(it - probs.begin()) + 1;
  worst.prob = *it;
  worst.unique = std::count(probs.begin(), probs.end(), worst.prob) == 1;
  return worst;
}

NetworkConfig worst_link_first(const NetworkConfig& config) {
  NetworkConfig swapped = config;
  const WorstLink worst = worst_link(config);
  std::swap(swapped.erasure_probs.front(), swapped.erasure_probs[worst.index - 1]);
  return swapped;
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t key) noexcept {
  std::uint64_t sm = key;
  for (auto& word : s_) {
    sm += kGolden;
    word = mix64(sm);
  }
}

BernoulliStream::BernoulliStream(RandomStream stream, double erasure_prob) noexcept
    : stream_(stream), erasure_prob_(erasure_prob) {
  threshold_ = static_cast<std::uint64_t>(std::ceil(std::ldexp(erasure_prob, 53)));
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial, StreamKind kind,
                         std::uint64_t index) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (trial + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(kind) << 56 ^ index));
  return h;
}

RandomStream derive_stream(std::uint64_t seed, std::uint64_t trial, StreamKind kind,
                           std::uint64_t index) noexcept {
  return RandomStream(stream_key(seed, trial, kind, index));
}

BernoulliStream derive_link_stream(const NetworkConfig& config, std::uint64_t trial,
                                   std::size_t link) {
  return BernoulliStream(derive_stream(config.seed, trial, StreamKind::Erasure, link),
                         config.erasure_probs.at(link - 1));
}

}  // namespace lncd
