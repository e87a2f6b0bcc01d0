#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "threewc/allocation.hpp"
#include "threewc/beamforming.hpp"
#include "threewc/channel.hpp"
#include "threewc/config.hpp"
#include "threewc/matrix_core.hpp"

namespace threewc::scheme {

/// Per-stream transmit powers. The intermittent node concentrates its budget
/// on the fraction of slots it is present, so its per-stream power carries a
/// 1/fraction factor.
struct PowerAllocation {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;

  double per_stream(int node) const {
    switch (node) {
      case 1: return p1;
      case 2: return p2;
      case 3: return p3;
      default: throw std::invalid_argument("node index must be 1, 2, or 3");
    }
  }
};

inline PowerAllocation power_allocation(const StreamAllocation& alloc, double total_power,
                                        double fraction) {
  if (!(total_power > 0.0)) throw std::invalid_argument("total power must be positive");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("availability fraction must lie in [0, 1]");
  PowerAllocation p;
  const int a1 = alloc.node_total(1);
  const int a2 = alloc.node_total(2);
  const int a3 = alloc.node_total(3);
  p.p1 = (a1 > 0 && fraction > 0.0) ? total_power / (fraction * a1) : 0.0;
  p.p2 = a2 > 0 ? total_power / a2 : 0.0;
  p.p3 = a3 > 0 ? total_power / a3 : 0.0;
  return p;
}

/// Rates of the six ordered links in bits per slot, and their sum.
struct RateReport {
  double rate[6] = {0, 0, 0, 0, 0, 0};

  double link(int from, int to) const {
    for (std::size_t k = 0; k < kLinkOrder.size(); ++k) {
      if (kLinkOrder[k].first == from && kLinkOrder[k].second == to) return rate[k];
    }
    throw std::invalid_argument("links connect two distinct nodes in {1,2,3}");
  }

  double sum() const {
    double s = 0.0;
    for (double r : rate) s += r;
    return s;
  }
};

/// All beamformer columns of one link, zero-forced group first.
inline la::Matrix stacked_link_beamformer(const ChannelRealization& ch,
                                          const BeamformerSet& beams, int i, int j) {
  const auto a = beams.v(i, j, 1).cols() + beams.v(i, j, 2).cols();
  la::Matrix v(ch.config().antennas(i), a);
  v.leftCols(beams.v(i, j, 1).cols()) = beams.v(i, j, 1);
  v.rightCols(beams.v(i, j, 2).cols()) = beams.v(i, j, 2);
  return v;
}

/// Post-projection effective channel of one link: T_j H_ij [V1 | V2].
inline la::Matrix effective_channel(const ChannelRealization& ch, const BeamformerSet& beams,
                                    const PostcoderSet& posts, int i, int j) {
  return posts.t(j) * (ch.h(i, j) * stacked_link_beamformer(ch, beams, i, j));
}

/// Gaussian point-to-point rate of one postcoded link: log2 det of
/// I + (p/sigma^2) E^H E with E the postcoded effective channel. The
/// postcoder has orthonormal rows, so the noise stays white.
inline double link_rate_bits(const la::Matrix& effective, double per_stream_power,
                             double noise_var) {
  const auto n = effective.cols();
  if (n == 0) return 0.0;
  la::Matrix gram = la::Matrix::Identity(n, n) +
                    (per_stream_power / noise_var) * (effective.adjoint() * effective);
  Eigen::SelfAdjointEigenSolver<la::Matrix> eig(gram, Eigen::EigenvaluesOnly);
  double bits = 0.0;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    bits += std::log2(std::max(eig.eigenvalues()(i), 1.0));
  return bits;
}

/// Evaluates all six link rates for one channel draw. `availability_factor`
/// scales the four links touching the intermittent node: pass the exact
/// probability for analytic rates or the realized fraction of available
/// slots for empirical ones. The power allocation is an explicit input so
/// callers can hold it fixed while varying the factor.
inline RateReport evaluate_rates(const ChannelRealization& ch, const BeamformerSet& beams,
                                 const PostcoderSet& posts, const PowerAllocation& power,
                                 double noise_var, double availability_factor) {
  if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be positive");
  if (!(availability_factor >= 0.0 && availability_factor <= 1.0))
    throw std::invalid_argument("availability factor must lie in [0, 1]");
  RateReport report;
  for (std::size_t k = 0; k < kLinkOrder.size(); ++k) {
    const auto [i, j] = kLinkOrder[k];
    const la::Matrix effective = effective_channel(ch, beams, posts, i, j);
    if (effective.cols() == 0) continue;
    const double factor = (i == 1 || j == 1) ? availability_factor : 1.0;
    report.rate[k] = factor * link_rate_bits(effective, power.per_stream(i), noise_var);
  }
  return report;
}

inline double snr_db_to_power_ratio(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

/// Smallest singular value of any active link's effective channel. Small
/// values mean some stream only separates from the interference (or from its
/// companions) at very high SNR, dragging finite-SNR slope fits down.
inline double scheme_conditioning(const ChannelRealization& ch, const BeamformerSet& beams,
                                  const PostcoderSet& posts) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto [i, j] : kLinkOrder) {
    const la::Matrix effective = effective_channel(ch, beams, posts, i, j);
    if (effective.cols() == 0) continue;
    Eigen::JacobiSVD<la::Matrix> svd(effective);
    worst = std::min(worst, svd.singularValues().minCoeff());
  }
  return std::isfinite(worst) ? worst : 0.0;
}

struct SchemeRealization {
  BeamformerSet beams;
  PostcoderSet posts;
  double conditioning = 0.0;
};

struct SynthesisOptions {
  /// Upper bound on candidate draws; the best-conditioned one wins.
  int max_draws = 16;
  /// Early exit once a draw's conditioning reaches this level.
  double good_enough = 0.1;
};

/// Synthesizes beamformers and postcoders, redrawing the free random
/// directions up to `max_draws` times and keeping the draw whose worst link
/// is best conditioned. Deterministic for a given generator state.
inline SchemeRealization synthesize_scheme(const ChannelRealization& ch,
                                           const StreamAllocation& alloc,
                                           std::mt19937_64& rng,
                                           const SynthesisOptions& options = {}) {
  if (options.max_draws < 1) throw std::invalid_argument("max_draws must be at least 1");
  SchemeRealization best;
  bool have = false;
  std::exception_ptr last_error;
  for (int draw = 0; draw < options.max_draws; ++draw) {
    try {
      SchemeRealization cand;
      cand.beams = synthesize_beamformers(ch, alloc, rng);
      cand.posts = synthesize_postcoders(ch, cand.beams);
      cand.conditioning = scheme_conditioning(ch, cand.beams, cand.posts);
      if (!have || cand.conditioning > best.conditioning) {
        best = std::move(cand);
        have = true;
      }
      if (best.conditioning >= options.good_enough) break;
    } catch (const SynthesisError&) {
      last_error = std::current_exception();
    }
  }
  if (!have) {
    if (last_error) std::rethrow_exception(last_error);
    throw SynthesisError("no candidate synthesis succeeded");
  }
  return best;
}

/// Least-squares slope of rate against log2(SNR): the finite-SNR estimate of
/// the degrees of freedom.
inline double fit_dof_slope(const std::vector<std::pair<double, double>>& db_rate_points) {
  if (db_rate_points.size() < 2)
    throw std::invalid_argument("slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (const auto& [db, r] : db_rate_points) {
    mx += std::log2(snr_db_to_power_ratio(db));
    my += r;
  }
  mx /= static_cast<double>(db_rate_points.size());
  my /= static_cast<double>(db_rate_points.size());
  double num = 0.0, den = 0.0;
  for (const auto& [db, r] : db_rate_points) {
    const double x = std::log2(snr_db_to_power_ratio(db)) - mx;
    num += x * (r - my);
    den += x * x;
  }
  return num / den;
}

}  // namespace threewc::scheme
