#pragma once

#include <cstdint>
#include <functional>

#include "recwalk/distribution.hpp"
#include "recwalk/tree.hpp"

namespace recwalk {

enum class OverflowPolicy { error, resample_with_count };

// node_cap bounds arena size; height_cap is the number of ancestor
// generations kept for eternal trees; depth_cap > 0 stops expanding vertices
// at that graph distance from the root (laws of balls of radius < depth_cap
// are unaffected; cut vertices carry children_complete=false).
struct SamplerBudget {
  std::size_t node_cap = 1u << 20;
  int height_cap = 16;
  int depth_cap = 0;  // 0 = unbounded
  OverflowPolicy policy = OverflowPolicy::resample_with_count;
};

// Resample and truncation counts, reported for bias accounting.
struct SampleStats {
  std::uint64_t resamples = 0;
  std::uint64_t truncated_nodes = 0;
  std::uint64_t oversize_rejections = 0;
};

// Galton-Watson tree, every vertex reproducing i.i.d. pi. Children are
// appended in draw order, which realizes the uniform sibling order.
OrderedTree sample_gw(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                      SampleStats* stats = nullptr);

// Typically rooted GW tree: Geometric(1-m) many ancestors of the root, each
// with size-biased offspring (the line child at uniform rank, the extra
// children carrying fresh GW(pi) trees); requires 0 < m(pi) < 1.
OrderedTree sample_tgwt(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                        SampleStats* stats = nullptr);

// Size-biased GW tree: a TGWT re-rooted at its unique progenitor.
OrderedTree sample_sbgw(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                        SampleStats* stats = nullptr);

// Unimodular ordered eternal GW tree, truncated at height_cap generations of
// ancestors: spine vertices reproduce with the size-biased law, everyone else
// with pi; requires m(pi) = 1.
OrderedTree sample_egwt(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                        SampleStats* stats = nullptr);

// Ordered eternal Kesten tree: two-sided spine of special vertices (size-
// biased offspring, one special child each at uniform rank), common vertices
// GW(pi); requires m(pi) = 1.
OrderedTree sample_ekt(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                       SampleStats* stats = nullptr);

// One marked bush of the positive-mean record law: root mark m and bush
// offspring k jointly P[X0 = m+k] c^k, children carrying GW(pi_tilde) trees,
// every non-root mark -1.
OrderedTree sample_mekt_bush(const IncrementDistribution& d, const SamplerBudget& b, Rng& rng,
                             SampleStats* stats = nullptr);

// Marked ECS-ordered bi-variate eternal Kesten tree for the positive-mean
// increment law d: i.i.d. bushes joined along a two-sided path, the path
// child smallest among its siblings. Root is the central bush root.
OrderedTree sample_mekt(const IncrementDistribution& d, const SamplerBudget& b, int up_bushes,
                        int down_bushes, Rng& rng, SampleStats* stats = nullptr);

// Typically rooted joining of i.i.d. bushes: the central bush is drawn by
// exact size-biased rejection (accept with #V/node_cap), the root uniform in
// it. Bushes larger than node_cap are rejected and counted.
using BushSampler = std::function<OrderedTree(Rng&)>;
OrderedTree unimodularise_joining(const BushSampler& bush, const SamplerBudget& b, int up_bushes,
                                  int down_bushes, Rng& rng, SampleStats* stats = nullptr);

// Canopy tree C_d cut to the given radius around a root placed at level
// i ~ levels; deterministic structure apart from the level draw.
OrderedTree sample_canopy(const DiscreteLaw& levels, int d, int radius, Rng& rng);

// Ball of the d+1-regular tree with one selected end (every vertex: one
// parent, d children), radius r around the root.
OrderedTree t_regular_ball(int d, int radius);

}  // namespace recwalk
