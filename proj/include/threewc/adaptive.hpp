#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "threewc/channel.hpp"
#include "threewc/config.hpp"
#include "threewc/rational.hpp"
#include "threewc/regions.hpp"

namespace threewc::relay {

using poly::Rational;

/// Closed form of the adaptive block-Markov construction: node 3 sends a3
/// fresh streams per slot, node 2 relays a2 of the missed ones per available
/// slot of the next block. Exceeds the nonadaptive outer bound d31 <= tau*M3
/// exactly when a2 >= 1 with tau > 0.
struct AdaptiveScheme {
  int a3 = 0;
  int a2 = 0;
  Rational d31;
  Rational outer_bound;
  bool violates_outer = false;
};

inline AdaptiveScheme adaptive_scheme(const NodeConfig& cfg, const Rational& tau) {
  poly::check_tau(tau);
  AdaptiveScheme s;
  s.a3 = cfg.m3;
  s.outer_bound = tau * cfg.m3;
  if (sgn(tau) == 0) {
    // Node 1 never listens; nothing arrives on either path.
    s.a2 = std::min(cfg.m1 - cfg.m3, cfg.m2);
    s.d31 = 0;
    return s;
  }
  const Rational spare_floor = poly::rational_floor((1 - tau) * cfg.m3 / tau);
  // The floor can be astronomically large for tiny tau; it only matters up
  // to the other two caps.
  const long spare_int =
      spare_floor > cfg.m2 ? cfg.m2 : spare_floor.get_num().get_si();
  s.a2 = static_cast<int>(std::min<long>(
      {static_cast<long>(cfg.m1 - cfg.m3), static_cast<long>(cfg.m2), spare_int}));
  s.d31 = tau * (cfg.m3 + s.a2);
  s.violates_outer = s.d31 > s.outer_bound;
  return s;
}

/// Outcome of a finite block-Markov run, counted in decoded fresh symbols of
/// the 3 -> 1 message.
struct BlockMarkovResult {
  long long direct = 0;
  long long relayed = 0;
  long long slots = 0;

  double d31() const {
    return slots == 0 ? 0.0 : static_cast<double>(direct + relayed) / static_cast<double>(slots);
  }
};

/// Slot-by-slot run over externally supplied availability states, one block
/// per sequence. Blocks except the last carry a3 fresh symbols per slot;
/// node 1 decodes them in available slots, node 2 queues the missed ones.
/// From the second block on, node 2 relays the previous block's queue in
/// chunks of a2: a chunk is refreshed at the block start and after every
/// available slot (the states are known causally one slot late), delivered
/// whenever the current slot is available, and whatever remains of the queue
/// is dropped at the block boundary. The final block only relays.
inline BlockMarkovResult run_block_markov_states(const NodeConfig& cfg, int a2, int a3,
                                                 const std::vector<StateSequence>& blocks) {
  if (a3 < 1 || a3 > cfg.m3) throw std::invalid_argument("fresh stream count out of range");
  if (a2 < 0 || a2 > std::min(cfg.m1 - cfg.m3, cfg.m2))
    throw std::invalid_argument("relay stream count out of range");
  BlockMarkovResult result;
  if (blocks.empty()) return result;
  const std::size_t n = blocks.front().size();
  if (n == 0) throw std::invalid_argument("blocks need at least one slot");
  for (const auto& b : blocks) {
    if (b.size() != n) throw std::invalid_argument("blocks must share one length");
  }

  long long queue = 0;  // symbols node 1 missed in the previous block
  const std::size_t num_blocks = blocks.size();
  for (std::size_t b = 0; b < num_blocks; ++b) {
    const auto& s = blocks[b].s;
    const bool fresh_active = b + 1 < num_blocks;
    const bool relay_active = b > 0 && a2 > 0;
    long long missed = 0;
    long long cursor = 0;      // queue symbols already delivered
    long long chunk = 0;       // size of the chunk currently on air
    for (std::size_t t = 0; t < n; ++t) {
      if (relay_active) {
        const bool refresh = (t == 0) || s[t - 1] == 1;
        if (refresh) chunk = std::min<long long>(a2, queue - cursor);
        if (s[t] == 1 && chunk > 0) {
          result.relayed += chunk;
          cursor += chunk;
          chunk = 0;
        }
      }
      if (fresh_active) {
        if (s[t] == 1)
          result.direct += a3;
        else
          missed += a3;
      }
    }
    queue = missed;
    result.slots += static_cast<long long>(n);
  }
  return result;
}

/// Samples Bernoulli(tau) states per block and runs the construction sized
/// by the closed form.
inline BlockMarkovResult run_block_markov(const NodeConfig& cfg, const Rational& tau,
                                          std::size_t slots_per_block, std::size_t num_blocks,
                                          std::mt19937_64& rng) {
  const AdaptiveScheme scheme = adaptive_scheme(cfg, tau);
  std::vector<StateSequence> blocks;
  blocks.reserve(num_blocks);
  for (std::size_t b = 0; b < num_blocks; ++b)
    blocks.push_back(sample_states(slots_per_block, poly::to_double(tau), rng));
  return run_block_markov_states(cfg, scheme.a2, scheme.a3, blocks);
}

}  // namespace threewc::relay
