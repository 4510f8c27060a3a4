#pragma once

#include <climits>
#include <vector>

#include "recwalk/resolved.hpp"
#include "recwalk/window.hpp"

namespace recwalk {

// R(i): smallest j > i with y(i,j) >= 0, Censored when no in-window j
// qualifies (the true record may lie beyond hi).
Resolved<long long> record_map(const Window& w, long long i);

// R^n(i); Censored propagates. R^0(i) = i.
Resolved<long long> record_iterate(const Window& w, long long i, long long n);

// L(i): smallest j < i with y(k,i) >= 0 for all j <= k < i, equal to i when
// x_{i-1} = -1. Resolved only with an in-window negative witness at j-1;
// Censored when sums stay >= 0 all the way back to lo (the true L may be
// smaller than lo, or -infinity).
Resolved<long long> L_of(const Window& w, long long i);

// D(i) = {j : L(i) <= j < i}; Censored when L is.
Resolved<std::vector<long long>> descendants_of(const Window& w, long long i);

// true iff {i..R(i)-1} is contained in the chain-oracle descendants of R(i);
// requires R(i) resolved. Property-test helper.
bool interval_property_check(const Window& w, long long i);

// t(i) = inf over m < i of y(m,i) clipped below at -1. Resolved (to -1) as
// soon as some in-window m has y(m,i) <= -1; otherwise Censored.
Resolved<long long> type_of(const Window& w, long long i);

// The in-window running minimum of y(m,i) over lo <= m < i, clipped at -1;
// reported alongside a censored type as a lower-confidence attachment.
long long past_running_min(const Window& w, long long i);

// l(i) = sup{m < i : y(m,i) = t(i)}; equals L(i)-1 when t(i) = -1. Resolved
// only when the type resolves.
Resolved<long long> l_of(const Window& w, long long i);

// d_1(i) = x_{i-1} + 1 when t(i) = -1; Censored otherwise (a resolved type
// >= 0 never arises from bare window data).
Resolved<long long> offspring_count(const Window& w, long long i);

// d_1(i) = x_{i-1} + 1 - max(type, 0), for externally certified types.
long long offspring_count_given_type(const Window& w, long long i, long long type);

// Child positions ascending; the m-th child (counted from the largest) is the
// largest i' < i with y(i', i) = x_{i-1} + 1 - m.
Resolved<std::vector<long long>> children_positions(const Window& w, long long i);

// SR(i) = min{n > i : y(i,n) > 0}, window-censored. Defined for general
// integer marks.
Resolved<long long> strict_record_map(const Window& w, long long i);

// C(i): first position of the suffix minimum of the walk on (i, hi]. The
// true value depends on the unseen future; the candidate is certified only
// when the walk has risen at least `margin` above it by hi, which bounds the
// error probability by c^margin under positive drift. Requires marks in
// {-1,0,1} and margin >= 0.
Resolved<long long> climbing_map(const Window& w, long long i, long long margin);

enum class ShiftKind { record, strict_record, climbing };

// Whole-window shift graph with per-vertex censoring. succ/children are
// consistent: every i with resolved successor j appears in children(j).
// children_complete(v) certifies that no out-of-window or unresolved vertex
// can be a child of v; any child missing from an incomplete list would
// precede all listed ones.
class RecordGraph {
 public:
  static RecordGraph build(const Window& w, ShiftKind kind = ShiftKind::record,
                           long long margin = 0);

  const Window& window() const { return window_; }
  ShiftKind kind() const { return kind_; }

  Resolved<long long> successor(long long v) const;
  const std::vector<long long>& children(long long v) const;
  bool children_complete(long long v) const;

  // End of the resolved successor chain from v, and the number of steps to it.
  long long apex(long long v) const;
  long long depth(long long v) const;
  // u,v provably share a foil: same chain end reached with equal step counts.
  bool same_foil(long long u, long long v) const;

 private:
  std::size_t idx(long long v) const;

  Window window_;
  ShiftKind kind_ = ShiftKind::record;
  long long margin_ = 0;
  static constexpr long long kCensored = LLONG_MIN;
  std::vector<long long> succ_;
  std::vector<std::vector<long long>> kids_;
  std::vector<char> kids_complete_;
  std::vector<long long> apex_;
  std::vector<long long> depth_;
};

RecordGraph build_record_graph(const Window& w);

// R-foliation restricted to the window. Listed members of one foil are true
// co-foil vertices; the boundary flag records that membership may still grow
// under extension (finite windows never certify a full foil).
struct FoilPartition {
  std::vector<long long> foil_of;               // vertex -> foil id, indexed v - lo
  std::vector<std::vector<long long>> members;  // per foil, ascending positions
  std::vector<char> boundary_censored;
};

FoilPartition foils(const RecordGraph& g);

// Smallest in-window k > i provably in the foil of i. Censored when some
// vertex between i and the candidate belongs to another in-window component
// (the foils could merge beyond the window), or when no candidate exists.
Resolved<long long> r_perp(const RecordGraph& g, long long i);

}  // namespace recwalk
