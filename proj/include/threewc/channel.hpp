#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "threewc/config.hpp"
#include "threewc/matrix_core.hpp"

namespace threewc {

struct DegenerateChannelError : std::runtime_error {
  DegenerateChannelError()
      : std::runtime_error("could not draw a generic channel realization") {}
};

/// Uniform double in (0, 1], built directly from the raw 64-bit stream so
/// sequences are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Circularly symmetric complex normal CN(0, 1) via Box-Muller; real and
/// imaginary parts are N(0, 1/2).
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

inline la::Matrix complex_gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  la::Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = complex_gaussian(rng);
  }
  return m;
}

/// One draw of the six cross links. h(i, j) carries the signal of node i to
/// node j and therefore has antennas(j) rows and antennas(i) columns.
class ChannelRealization {
 public:
  explicit ChannelRealization(NodeConfig cfg) : cfg_(cfg) {}

  const NodeConfig& config() const { return cfg_; }

  const la::Matrix& h(int from, int to) const { return links_[slot(from, to)]; }
  la::Matrix& h(int from, int to) { return links_[slot(from, to)]; }

 private:
  static std::size_t slot(int from, int to) {
    for (std::size_t k = 0; k < kLinkOrder.size(); ++k) {
      if (kLinkOrder[k].first == from && kLinkOrder[k].second == to) return k;
    }
    throw std::invalid_argument("links connect two distinct nodes in {1,2,3}");
  }

  NodeConfig cfg_;
  std::array<la::Matrix, 6> links_;
};

/// Draws i.i.d. CN(0,1) entries per link and redraws any link that fails the
/// full-rank (genericity) check; failure has probability zero and the retry
/// bound only guards against degenerate RNG states.
inline ChannelRealization sample_channel(const NodeConfig& cfg, std::mt19937_64& rng,
                                         int max_retries = 64) {
  ChannelRealization real(cfg);
  for (const auto [i, j] : kLinkOrder) {
    const int rows = cfg.antennas(j);
    const int cols = cfg.antennas(i);
    la::Matrix m;
    int attempt = 0;
    do {
      if (attempt++ > max_retries) throw DegenerateChannelError();
      m = complex_gaussian_matrix(rows, cols, rng);
    } while (la::rank(m) < std::min(rows, cols));
    real.h(i, j) = std::move(m);
  }
  return real;
}

/// Availability states of node 1 over a block of slots.
struct StateSequence {
  std::vector<std::uint8_t> s;

  std::size_t size() const { return s.size(); }
  std::size_t ones() const {
    std::size_t m = 0;
    for (auto v : s) m += v;
    return m;
  }
  double fraction() const { return s.empty() ? 0.0 : static_cast<double>(ones()) / s.size(); }
};

/// Bernoulli(tau) states; tau outside [0, 1] is rejected.
inline StateSequence sample_states(std::size_t n, double tau, std::mt19937_64& rng) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("availability probability must lie in [0, 1]");
  StateSequence seq;
  seq.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) seq.s[i] = uniform01(rng) <= tau ? 1 : 0;
  return seq;
}

}  // namespace threewc
