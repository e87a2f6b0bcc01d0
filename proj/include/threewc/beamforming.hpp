#pragma once

#include <array>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "threewc/allocation.hpp"
#include "threewc/channel.hpp"
#include "threewc/config.hpp"
#include "threewc/matrix_core.hpp"

namespace threewc::scheme {

struct SynthesisError : std::runtime_error {
  explicit SynthesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Transmit beamformers: one matrix per ordered link and stream type, with
/// orthonormal columns (possibly zero columns). Rows match the sender's
/// antenna count.
class BeamformerSet {
 public:
  const la::Matrix& v(int from, int to, int q) const { return mats_[slot(from, to, q)]; }
  la::Matrix& v(int from, int to, int q) { return mats_[slot(from, to, q)]; }

  /// All stream groups of one sender side by side: q=1 then q=2 per
  /// destination, destinations in ascending node order.
  la::Matrix stacked(int node, const NodeConfig& cfg) const {
    int cols = 0;
    for (const auto [i, j] : kLinkOrder) {
      if (i == node) cols += v(i, j, 1).cols() + v(i, j, 2).cols();
    }
    la::Matrix m(cfg.antennas(node), cols);
    int at = 0;
    for (const auto [i, j] : kLinkOrder) {
      if (i != node) continue;
      for (int q = 1; q <= 2; ++q) {
        const auto& g = v(i, j, q);
        m.middleCols(at, g.cols()) = g;
        at += static_cast<int>(g.cols());
      }
    }
    return m;
  }

 private:
  static std::size_t slot(int from, int to, int q) {
    if (q != 1 && q != 2) throw std::invalid_argument("stream type q must be 1 or 2");
    for (std::size_t k = 0; k < kLinkOrder.size(); ++k) {
      if (kLinkOrder[k].first == from && kLinkOrder[k].second == to)
        return 2 * k + static_cast<std::size_t>(q - 1);
    }
    throw std::invalid_argument("links connect two distinct nodes in {1,2,3}");
  }

  std::array<la::Matrix, 12> mats_;
};

/// Receive postcoders: per node one matrix T with orthonormal rows that
/// annihilates the cross-pair interference while keeping the desired
/// effective channel invertible.
class PostcoderSet {
 public:
  const la::Matrix& t(int node) const { return mats_.at(static_cast<std::size_t>(node - 1)); }
  la::Matrix& t(int node) { return mats_.at(static_cast<std::size_t>(node - 1)); }

 private:
  std::array<la::Matrix, 3> mats_;
};

namespace detail {

// Random orthonormal group of `count` columns inside the span of `basis`.
inline la::Matrix random_group(const la::Matrix& basis, int count, std::mt19937_64& rng,
                               la::Tolerance tol) {
  if (count == 0) return la::Matrix(basis.rows(), 0);
  if (basis.cols() < count)
    throw SynthesisError("requested more streams than the available subspace holds");
  la::Matrix g = la::orthonormal_basis(
      basis * complex_gaussian_matrix(static_cast<int>(basis.cols()), count, rng), tol);
  if (g.cols() != count) throw SynthesisError("random subspace draw degenerated");
  return g;
}

}  // namespace detail

/// Builds beamformers realizing an allocation on a channel draw: zero-forced
/// groups live in the null space toward the unintended receiver; aligned
/// groups of each pair share a subspace at the third node, reached through
/// pseudoinverse preimages of a common intersection basis.
inline BeamformerSet synthesize_beamformers(const ChannelRealization& ch,
                                            const StreamAllocation& alloc,
                                            std::mt19937_64& rng,
                                            la::Tolerance tol = {}) {
  const NodeConfig& cfg = ch.config();
  const AllocationCheck check = validate_allocation(cfg, alloc);
  if (!check.ok) throw SynthesisError("allocation infeasible: " + check.violations.front());

  BeamformerSet beams;

  // Zero-forced groups.
  for (const auto [i, j] : kLinkOrder) {
    const int k = other_node(i, j);
    const int a1 = alloc.count(i, j, 1);
    la::Matrix null_basis = la::null_space(ch.h(i, k), tol);
    beams.v(i, j, 1) = detail::random_group(null_basis, a1, rng, tol);
    if (a1 > 0 && la::max_abs(ch.h(i, k) * beams.v(i, j, 1)) > 1e-8)
      throw SynthesisError("zero-forcing residual too large");
  }

  // Aligned groups, pair by pair. The overlap columns of both directions map
  // onto one orthonormal basis g of the channel-range intersection at the
  // third node.
  for (const auto [i, j] : {std::pair{2, 3}, std::pair{1, 3}, std::pair{1, 2}}) {
    const int k = other_node(i, j);
    const int ov = alloc.overlap(i, j);
    la::Matrix g(cfg.antennas(k), 0);
    if (ov > 0) {
      la::Matrix inter = la::subspace_intersection(ch.h(i, k), ch.h(j, k), tol);
      if (inter.cols() < ov)
        throw SynthesisError("channel ranges do not overlap enough to align");
      g = inter.leftCols(ov);
    }
    for (const auto [s, t] : {std::pair{i, j}, std::pair{j, i}}) {
      const int a2 = alloc.count(s, t, 2);
      if (a2 == 0) {
        beams.v(s, t, 2) = la::Matrix(cfg.antennas(s), 0);
        continue;
      }
      la::Matrix cols(cfg.antennas(s), a2);
      if (ov > 0) cols.leftCols(ov) = la::pseudo_inverse(ch.h(s, k), tol) * g;
      if (a2 > ov)
        cols.rightCols(a2 - ov) =
            complex_gaussian_matrix(cfg.antennas(s), a2 - ov, rng);
      la::Matrix group = la::orthonormal_basis(cols, tol);
      if (group.cols() != a2) throw SynthesisError("aligned group degenerated");
      beams.v(s, t, 2) = std::move(group);
    }
  }

  // Streams of one sender must stay separable.
  for (int node = 1; node <= 3; ++node) {
    const int total = alloc.node_total(node);
    if (total == 0) continue;
    if (la::rank(beams.stacked(node, cfg), tol) != total)
      throw SynthesisError("stacked beamformer lost rank at node " + std::to_string(node));
  }
  return beams;
}

/// Effective desired matrix at a receiver: effective columns of both senders,
/// ascending sender order, q=1 before q=2.
inline la::Matrix desired_matrix(const ChannelRealization& ch, const BeamformerSet& beams,
                                 int node) {
  const NodeConfig& cfg = ch.config();
  int cols = 0;
  for (const auto [i, j] : kLinkOrder) {
    if (j == node) cols += beams.v(i, j, 1).cols() + beams.v(i, j, 2).cols();
  }
  la::Matrix d(cfg.antennas(node), cols);
  int at = 0;
  for (int sender = 1; sender <= 3; ++sender) {
    if (sender == node) continue;
    for (int q = 1; q <= 2; ++q) {
      const auto& v = beams.v(sender, node, q);
      d.middleCols(at, v.cols()) = ch.h(sender, node) * v;
      at += static_cast<int>(v.cols());
    }
  }
  return d;
}

/// Interference seen at a receiver: the alignment-eligible cross traffic of
/// the other two nodes (their zero-forced traffic vanishes by construction).
inline la::Matrix interference_matrix(const ChannelRealization& ch,
                                      const BeamformerSet& beams, int node) {
  const NodeConfig& cfg = ch.config();
  const int j = (node == 1) ? 2 : 1;
  const int k = other_node(node, j);
  const auto& vjk = beams.v(j, k, 2);
  const auto& vkj = beams.v(k, j, 2);
  la::Matrix m(cfg.antennas(node), vjk.cols() + vkj.cols());
  m.leftCols(vjk.cols()) = ch.h(j, node) * vjk;
  m.rightCols(vkj.cols()) = ch.h(k, node) * vkj;
  return m;
}

/// Builds the per-node postcoders for a synthesized beamformer set. The rows
/// span the interference orthocomplement directions that best capture the
/// desired streams.
inline PostcoderSet synthesize_postcoders(const ChannelRealization& ch,
                                          const BeamformerSet& beams,
                                          la::Tolerance tol = {}) {
  const NodeConfig& cfg = ch.config();
  PostcoderSet posts;
  for (int node = 1; node <= 3; ++node) {
    la::Matrix d = desired_matrix(ch, beams, node);
    const int want = static_cast<int>(d.cols());
    if (want == 0) {
      posts.t(node) = la::Matrix(0, cfg.antennas(node));
      continue;
    }
    la::Matrix intf = interference_matrix(ch, beams, node);
    la::Matrix x = la::null_space(intf.adjoint(), tol);
    if (x.cols() < want)
      throw SynthesisError("interference leaves too little receive space at node " +
                           std::to_string(node));
    la::Matrix xd = x.adjoint() * d;
    if (la::rank(xd, tol) != want)
      throw SynthesisError("desired streams not separable at node " +
                           std::to_string(node));
    auto svd = Eigen::JacobiSVD<la::Matrix>(xd, Eigen::ComputeFullU);
    la::Matrix u = svd.matrixU().leftCols(want);
    posts.t(node) = (x * u).adjoint();
  }
  return posts;
}

/// Largest absolute entry of any zero-forcing leak h(i,k) * v(i,j,1).
inline double zero_forcing_residual(const ChannelRealization& ch, const BeamformerSet& beams) {
  double worst = 0.0;
  for (const auto [i, j] : kLinkOrder) {
    const int k = other_node(i, j);
    if (beams.v(i, j, 1).cols() == 0) continue;
    worst = std::max(worst, la::max_abs(ch.h(i, k) * beams.v(i, j, 1)));
  }
  return worst;
}

/// Achieved alignment overlap of each pair, as the exact dimension of the
/// intersection of the two interfering images at the third node.
struct AlignmentReport {
  int pair23 = 0;
  int pair13 = 0;
  int pair12 = 0;

  int overlap(int a, int b) const {
    if (a > b) std::swap(a, b);
    if (a == 2 && b == 3) return pair23;
    if (a == 1 && b == 3) return pair13;
    if (a == 1 && b == 2) return pair12;
    throw std::invalid_argument("pairs are unordered subsets of {1,2,3}");
  }
};

inline AlignmentReport measure_alignment(const ChannelRealization& ch,
                                         const BeamformerSet& beams,
                                         la::Tolerance tol = {}) {
  AlignmentReport report;
  const auto measure = [&](int i, int j) {
    const int k = other_node(i, j);
    const la::Matrix a = ch.h(i, k) * beams.v(i, j, 2);
    const la::Matrix b = ch.h(j, k) * beams.v(j, i, 2);
    if (a.cols() == 0 || b.cols() == 0) return 0;
    return la::intersection_dim(a, b, tol);
  };
  report.pair23 = measure(2, 3);
  report.pair13 = measure(1, 3);
  report.pair12 = measure(1, 2);
  return report;
}

}  // namespace threewc::scheme
