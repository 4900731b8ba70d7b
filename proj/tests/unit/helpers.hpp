#pragma once

#include <cstdint>
#include <vector>

#include "lncd/model.hpp"

inline lncd::NetworkConfig net(std::vector<double> p, std::uint32_t n, std::uint64_t seed = 1,
                               unsigned q = 8) {
  lncd::NetworkConfig c;
  c.erasure_probs = std::move(p);
  c.batch_size = n;
  c.field_exponent = q;
  c.seed = seed;
  return c;
}
