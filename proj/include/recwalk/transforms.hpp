#pragma once

#include <vector>

#include "recwalk/record.hpp"
#include "recwalk/tree.hpp"

namespace recwalk {

// Component of 0 in a shift graph, as an ordered tree with per-node original
// positions. Children are ordered by position; truncation flags on the nodes
// record window censoring.
struct MarkedComponent {
  OrderedTree tree;
  std::vector<long long> position;  // node id -> integer position
  int root = -1;                    // node at position 0
  bool has_types = false;
  std::size_t censored_parents = 0;   // nodes whose parent link is unknown
  std::size_t censored_children = 0;  // nodes with possibly-incomplete child lists
  std::vector<std::pair<long long, int>> position_index;  // sorted (position, node)

  int node_at(long long pos) const;  // -1 when the position is not in the component
};

// Psi_R: component of 0, rooted at 0, children ordered by position.
// max_dist >= 0 keeps only vertices within that tree distance of the root
// (enough for ball extraction at radius < max_dist); -1 keeps the whole
// in-window component.
MarkedComponent forward_psi(const Window& w);
MarkedComponent forward_psi(const RecordGraph& g, int max_dist = -1);

// Construction output: marks plus the bookkeeping that certifies the
// bi-infinite-path vertices (and for positive mean, their types).
struct ConstructedWindow {
  Window window;
  std::vector<long long> path_positions;  // ascending, always contains 0
  std::vector<long long> path_types;      // parallel; empty for zero mean
  bool left_truncated_block = false;      // span ran out mid-block
  // provenance per mark: 0 = i.i.d. nonnegative side, 1 = block head,
  // 2 = block in-fill
  std::vector<signed char> provenance;
  // (K_n, tau_n) per completed negative-side block, outermost first
  std::vector<std::pair<long long, long long>> blocks;
};

// Psi_R with the type function attached. The bare-window overload resolves
// types by in-window witness only (all resolved types are -1); the
// construction overload attaches every type from the bookkeeping.
MarkedComponent forward_psi_hat(const Window& w);
MarkedComponent forward_psi_hat(const ConstructedWindow& cw, int max_dist = -1);

struct BackwardInfo {
  bool backward_uncertain = false;
  bool forward_uncertain = false;
  long long emitted_lo = 0;  // marks emitted on [emitted_lo, emitted_hi)
  long long emitted_hi = 0;
};

// Phi_R: x_n = d1(u_{n+1}) - 1 along the succession line through o, emitted
// on the largest certain range inside [-span, span).
Window backward_phi(const OrderedTree& t, int o, long long span, BackwardInfo* info = nullptr);

// Extended backward map: x_n = d1 - 1 off the path, d1 + M - 1 on it, path
// vertices identified by mark >= 0. Throws if a needed mark is missing.
Window backward_phi_hat(const OrderedTree& t, int o, long long span, BackwardInfo* info = nullptr);

// R-probability generators. Nonnegative side i.i.d. d throughout.
ConstructedWindow construction1_zero_mean(const IncrementDistribution& d, long long span,
                                          Rng& rng);
ConstructedWindow construction2_zero_mean(const IncrementDistribution& d, long long span,
                                          Rng& rng);
ConstructedWindow construction_positive_mean(const IncrementDistribution& d, long long span,
                                             Rng& rng);

struct RoundtripReport {
  long long core_lo = 0;
  long long core_hi = 0;
  std::vector<long long> mismatches;
  bool exact() const { return mismatches.empty(); }
};

// Phi_R . Psi_R on the uncensored core of the window.
RoundtripReport roundtrip_psi_phi(const Window& w);

// PhiHat_R . PsiHat_R on a construction-positive window.
RoundtripReport roundtrip_psi_phi_hat(const ConstructedWindow& cw);

}  // namespace recwalk
