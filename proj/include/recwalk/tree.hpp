#pragma once

#include <optional>
#include <string>
#include <vector>

#include "recwalk/resolved.hpp"

namespace recwalk {

// Arena-allocated ordered family tree: out-degree <= 1, ordered child lists,
// optional integer marks (>= -1). Node ids are an implementation detail; all
// equality semantics go through canonical_encode.
//
// Truncation/censoring flags: children_complete=false means the child list
// may be missing entries, with the convention that any missing child would
// precede (in the sibling order) every listed one. parent_known=false means
// the parent link is unknown rather than certainly absent.
struct OrderedTree {
  struct Node {
    int parent = -1;
    std::vector<int> children;
    std::optional<long long> mark;
    bool children_complete = true;
    bool parent_known = true;
  };

  std::vector<Node> nodes;
  int root = -1;

  int add_root();
  // rank -1 appends; otherwise inserts at that index in the sibling order.
  int add_child(int parent, int rank = -1);

  int size() const { return static_cast<int>(nodes.size()); }
  bool valid_node(int u) const { return u >= 0 && u < size(); }
  const Node& node(int u) const { return nodes[static_cast<std::size_t>(u)]; }
  Node& node(int u) { return nodes[static_cast<std::size_t>(u)]; }

  // Family-tree invariants: acyclic, single component, every non-root node in
  // exactly one child list. Throws on violation.
  void validate() const;
};

// F(u): parent if it exists, else u itself.
int parent_shift(const OrderedTree& t, int u);

enum class RlsOrder { precedes, succeeds, equal };

// Royal Line of Succession order: ancestors succeed; otherwise compare the
// branch children at the smallest common ancestor by sibling order.
RlsOrder rls_compare(const OrderedTree& t, int u, int v);

// b(u) = max{v : v precedes u} and a(u) = min{v : v succeeds u}, by the
// constructive cases (eldest child / previous sibling up the ancestor line;
// next sibling's minimal descendant / parent). Absence is a valid return.
std::optional<int> succ_b(const OrderedTree& t, int u);
std::optional<int> pred_a(const OrderedTree& t, int u);

// Flag-aware step results used on truncated or censored trees.
struct LineStep {
  int node = -1;
  bool exists = false;   // meaningful only when certain
  bool certain = true;
};
LineStep step_b(const OrderedTree& t, int u);
LineStep step_a(const OrderedTree& t, int u);

struct SuccessionLine {
  int center = -1;
  std::vector<int> backward;  // u_{-1}, u_{-2}, ...
  std::vector<int> forward;   // u_1, u_2, ...
  bool backward_ended = false;    // absence proven
  bool forward_ended = false;
  bool backward_uncertain = false;  // stopped on a censored step
  bool forward_uncertain = false;
  bool steps_exhausted = false;     // max_steps reached, not an error
};

SuccessionLine succession_line(const OrderedTree& t, int o, std::size_t max_steps);

enum class EncodeMode { ordered, unordered };

// Canonical byte key, injective on (ordered|unordered) marked rooted
// isomorphism classes, stable across arena permutations. With a radius, the
// tree is first cut to the graph ball around root; without one the whole
// arena is encoded (size-guarded by the caller).
std::string canonical_encode(const OrderedTree& t, int root, EncodeMode mode,
                             std::optional<int> radius = std::nullopt);

// Induced ball of the tree metric around center. certain=false when a vertex
// at distance < radius carries a truncation flag.
struct Ball {
  OrderedTree tree;
  int root = -1;
  bool certain = true;
};
Ball ball_around(const OrderedTree& t, int center, int radius);

// Finite ordered tree: sum of d1(v)-1 over all vertices in ascending RLS
// order is -1, with every proper prefix < 0.
bool lukasiewicz_sum_check(const OrderedTree& t);

// Vertices in ascending RLS order (post-order with children ascending).
std::vector<int> rls_ascending(const OrderedTree& t);

// l(v,w): generation offset, l(v,v)=0, l(v,F(w))=l(v,w)-1.
long long level_offset(const OrderedTree& t, int v, int w);

}  // namespace recwalk
