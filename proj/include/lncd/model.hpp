#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lncd/error.hpp"

namespace lncd {

inline constexpr unsigned kMinFieldExponent = 1;
inline constexpr unsigned kMaxFieldExponent = 16;

// A line network of erasure links carrying one batch of packets.
struct NetworkConfig {
  std::vector<double> erasure_probs;  // p_1..p_l, link 1 leaves the source
  std::uint32_t batch_size = 1;       // n
  unsigned field_exponent = 8;        // q, packet-level sim uses GF(2^q)
  std::uint64_t seed = 0;

  std::size_t links() const noexcept { return erasure_probs.size(); }
};

struct WorstLink {
  std::size_t index = 1;  // 1-based
  double prob = 0.0;
  bool unique = true;
};

// Per-link rank differences: diffs[i] is the number of innovative packets the
// node before link i+1 holds that the node after it lacks.
struct QueueState {
  std::vector<std::uint32_t> diffs;

  static QueueState initial(const NetworkConfig& config);
  std::uint64_t in_flight() const noexcept;
};

/// Throws Error(InvalidArgument) naming the offending field; returns the
/// config unchanged otherwise.
const NetworkConfig& validate(const NetworkConfig& config);

WorstLink worst_link(const NetworkConfig& config);

// Same network with the worst link swapped into position 1, all other links
// left in place.
NetworkConfig worst_link_first(const NetworkConfig& config);

// ---------------------------------------------------------------------------
// Randomness. Every stream is a pure function of (seed, trial, kind, index),
// so trials can be run in any order or in parallel and reproduce bit-for-bit.

enum class StreamKind : std::uint32_t {
  Erasure = 1,      // index = 1-based link
  Coefficient = 2,  // index = 1-based node
};

// xoshiro256** seeded through SplitMix64 from a mixed key.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) noexcept;

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform integer in [0, 2^bits), bits in [1, 64].
  std::uint64_t bits(unsigned count) noexcept { return next() >> (64 - count); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Per-slot link state: success (link up) with probability 1 - p.
class BernoulliStream {
 public:
  BernoulliStream(RandomStream stream, double erasure_prob) noexcept;

  bool next() noexcept { return (stream_.next() >> 11) >= threshold_; }

  double erasure_prob() const noexcept { return erasure_prob_; }

 private:
  RandomStream stream_;
  std::uint64_t threshold_;  // ceil(p * 2^53)
  double erasure_prob_;
};

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t trial,
                         StreamKind kind, std::uint64_t index) noexcept;

RandomStream derive_stream(std::uint64_t seed, std::uint64_t trial,
                           StreamKind kind, std::uint64_t index) noexcept;

// Erasure stream for link `link` (1-based) of `config` in trial `trial`.
BernoulliStream derive_link_stream(const NetworkConfig& config,
                                   std::uint64_t trial, std::size_t link);

}  // namespace lncd
