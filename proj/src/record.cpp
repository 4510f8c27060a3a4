#include "recwalk/record.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

namespace recwalk {

namespace {

void require_vertex(const Window& w, long long i) {
  if (!w.has_vertex(i)) throw std::out_of_range("record: vertex out of window");
}

}  // namespace

Resolved<long long> record_map(const Window& w, long long i) {
  require_vertex(w, i);
  if (i >= w.hi) return censored;
  long long s = 0;
  for (long long j = i + 1; j <= w.hi; ++j) {
    s += w.mark(j - 1);
    if (s >= 0) return j;
  }
  return censored;
}

Resolved<long long> record_iterate(const Window& w, long long i, long long n) {
  require_vertex(w, i);
  if (n < 0) throw std::invalid_argument("record_iterate: n >= 0");
  long long cur = i;
  for (long long k = 0; k < n; ++k) {
    auto r = record_map(w, cur);
    if (!r) return censored;
    cur = r.value();
  }
  return cur;
}

Resolved<long long> L_of(const Window& w, long long i) {
  require_vertex(w, i);
  // L(i) = prevStrictlyGreater(i) + 1 in prefix-sum terms: scanning m from
  // i-1 down, y(m,i) stays >= 0 until the first m with y(m,i) < 0.
  long long s = 0;  // y(m, i) for the current m
  for (long long m = i - 1; m >= w.lo; --m) {
    s += w.mark(m);
    if (s < 0) return m + 1;  // covers L(i) = i when x_{i-1} = -1
  }
  return censored;
}

Resolved<std::vector<long long>> descendants_of(const Window& w, long long i) {
  auto L = L_of(w, i);
  if (!L) return censored;
  std::vector<long long> d;
  for (long long j = L.value(); j < i; ++j) d.push_back(j);
  return d;
}

bool interval_property_check(const Window& w, long long i) {
  auto r = record_map(w, i);
  if (!r) throw std::invalid_argument("interval_property_check: R(i) must be resolved");
  // chain oracle: j is a descendant of R(i) iff some iterate of j hits R(i)
  for (long long j = i; j < r.value(); ++j) {
    long long cur = j;
    bool reached = false;
    while (true) {
      auto nxt = record_map(w, cur);
      if (!nxt || nxt.value() > r.value()) break;
      cur = nxt.value();
      if (cur == r.value()) {
        reached = true;
        break;
      }
    }
    if (!reached) return false;
  }
  return true;
}

Resolved<long long> type_of(const Window& w, long long i) {
  require_vertex(w, i);
  long long s = 0;
  for (long long m = i - 1; m >= w.lo; --m) {
    s += w.mark(m);
    if (s <= -1) return -1LL;  // the clipped infimum floor is attained
  }
  return censored;
}

long long past_running_min(const Window& w, long long i) {
  require_vertex(w, i);
  long long s = 0;
  long long best = LLONG_MAX;
  for (long long m = i - 1; m >= w.lo; --m) {
    s += w.mark(m);
    best = std::min(best, s);
  }
  if (best == LLONG_MAX) return 0;  // no past in window
  return std::max(best, -1LL);
}

Resolved<long long> l_of(const Window& w, long long i) {
  auto t = type_of(w, i);
  if (!t) return censored;
  // t(i) = -1, so l(i) = L(i) - 1 and the witness is in-window
  auto L = L_of(w, i);
  return L.value() - 1;
}

Resolved<long long> offspring_count(const Window& w, long long i) {
  require_vertex(w, i);
  if (i <= w.lo) return censored;  // x_{i-1} not in window
  auto t = type_of(w, i);
  if (!t) return censored;
  return static_cast<long long>(w.mark(i - 1)) + 1;
}

long long offspring_count_given_type(const Window& w, long long i, long long type) {
  if (!w.has_mark(i - 1)) throw std::out_of_range("offspring_count_given_type: x_{i-1} missing");
  if (type < -1) throw std::invalid_argument("offspring_count_given_type: type >= -1");
  return static_cast<long long>(w.mark(i - 1)) + 1 - std::max(type, 0LL);
}

Resolved<std::vector<long long>> children_positions(const Window& w, long long i) {
  auto n = offspring_count(w, i);
  if (!n) return censored;
  std::vector<long long> kids;
  if (n.value() == 0) return kids;
  // scanning j downward, j is a child iff y(j,i) >= 0 and y(j,i) is a strict
  // new minimum of y(.,i); its rank from the largest is x_{i-1}+1-y(j,i)
  long long L = L_of(w, i).value();
  long long s = 0;
  long long running_min = LLONG_MAX;
  for (long long j = i - 1; j >= L; --j) {
    s += w.mark(j);
    if (s >= 0 && s < running_min) kids.push_back(j);
    running_min = std::min(running_min, s);
  }
  std::reverse(kids.begin(), kids.end());
  if (static_cast<long long>(kids.size()) != n.value())
    throw std::logic_error("children_positions: inconsistent with offspring count");
  return kids;
}

Resolved<long long> strict_record_map(const Window& w, long long i) {
  require_vertex(w, i);
  long long s = 0;
  for (long long j = i + 1; j <= w.hi; ++j) {
    s += w.mark(j - 1);
    if (s > 0) return j;
  }
  return censored;
}

Resolved<long long> climbing_map(const Window& w, long long i, long long margin) {
  require_vertex(w, i);
  if (margin < 0) throw std::invalid_argument("climbing_map: margin >= 0");
  for (int x : w.marks)
    if (x < -1 || x > 1) throw std::invalid_argument("climbing_map: marks must be in {-1,0,1}");
  if (i >= w.hi) return censored;
  long long s = 0;
  long long best = LLONG_MAX, best_pos = i;
  for (long long j = i + 1; j <= w.hi; ++j) {
    s += w.mark(j - 1);
    if (s < best) {
      best = s;
      best_pos = j;
    }
  }
  long long rise = s - best;  // walk height at hi above the suffix minimum
  if (rise >= margin) return best_pos;
  return censored;
}

// ---------------------------------------------------------------------------

std::size_t RecordGraph::idx(long long v) const {
  if (!window_.has_vertex(v)) throw std::out_of_range("RecordGraph: vertex out of window");
  return static_cast<std::size_t>(v - window_.lo);
}

RecordGraph RecordGraph::build(const Window& w, ShiftKind kind, long long margin) {
  RecordGraph g;
  g.window_ = w;
  g.kind_ = kind;
  g.margin_ = margin;
  const std::size_t n = static_cast<std::size_t>(w.length()) + 1;  // vertices lo..hi
  g.succ_.assign(n, kCensored);
  g.kids_.assign(n, {});
  g.kids_complete_.assign(n, 1);
  g.apex_.assign(n, 0);
  g.depth_.assign(n, 0);

  auto P = prefix_sums(w);

  if (kind == ShiftKind::record || kind == ShiftKind::strict_record) {
    const bool strict = (kind == ShiftKind::strict_record);
    if (!strict && !w.skip_free())
      throw std::invalid_argument("RecordGraph: record shift needs skip-free marks");
    // next position j > i with P[j] >= P[i] (record) or P[j] > P[i] (strict),
    // via a monotonic stack scanned right to left
    std::vector<std::size_t> stack;
    for (std::size_t i = n; i-- > 0;) {
      if (strict) {
        while (!stack.empty() && P[stack.back()] <= P[i]) stack.pop_back();
      } else {
        while (!stack.empty() && P[stack.back()] < P[i]) stack.pop_back();
      }
      if (!stack.empty()) g.succ_[i] = w.lo + static_cast<long long>(stack.back());
      stack.push_back(i);
    }
    // children lists never retract; completeness fails exactly on the
    // prefix records of P seen from lo, since an unseen i < lo could map
    // onto those and only those
    long long run = LLONG_MIN;
    for (std::size_t i = 0; i < n; ++i) {
      if (strict)
        g.kids_complete_[i] = (i > 0 && run >= P[i]) ? 1 : 0;
      else
        g.kids_complete_[i] = (i > 0 && run > P[i]) ? 1 : 0;
      run = std::max(run, P[i]);
    }
  } else {
    // climbing: succ(i) = first suffix-argmin of P on (i, hi], certified by
    // the margin; only the climbing value of lo can gain unseen children
    std::vector<long long> cand(n, kCensored);
    long long best = LLONG_MAX;
    std::size_t best_pos = 0;
    for (std::size_t j = n; j-- > 0;) {
      if (j + 1 < n) cand[j] = w.lo + static_cast<long long>(best_pos);
      if (P[j] <= best) {
        best = P[j];
        best_pos = j;
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      long long k = cand[i];
      long long rise = P[n - 1] - P[static_cast<std::size_t>(k - w.lo)];
      if (rise >= margin) {
        g.succ_[i] = k;
      } else {
        g.kids_complete_[static_cast<std::size_t>(k - w.lo)] = 0;  // candidate child lost to censoring
      }
    }
    if (n > 1 && cand[0] != kCensored)
      g.kids_complete_[static_cast<std::size_t>(cand[0] - w.lo)] = 0;
  }

  for (std::size_t i = 0; i < n; ++i)
    if (g.succ_[i] != kCensored)
      g.kids_[static_cast<std::size_t>(g.succ_[i] - w.lo)].push_back(w.lo + static_cast<long long>(i));

  // chain ends and depths; successors always point right, so fill right to left
  for (std::size_t i = n; i-- > 0;) {
    if (g.succ_[i] == kCensored) {
      g.apex_[i] = w.lo + static_cast<long long>(i);
      g.depth_[i] = 0;
    } else {
      std::size_t j = static_cast<std::size_t>(g.succ_[i] - w.lo);
      g.apex_[i] = g.apex_[j];
      g.depth_[i] = g.depth_[j] + 1;
    }
  }
  return g;
}

RecordGraph build_record_graph(const Window& w) { return RecordGraph::build(w); }

Resolved<long long> RecordGraph::successor(long long v) const {
  long long s = succ_[idx(v)];
  if (s == kCensored) return censored;
  return s;
}

const std::vector<long long>& RecordGraph::children(long long v) const { return kids_[idx(v)]; }

bool RecordGraph::children_complete(long long v) const { return kids_complete_[idx(v)] != 0; }

long long RecordGraph::apex(long long v) const { return apex_[idx(v)]; }

long long RecordGraph::depth(long long v) const { return depth_[idx(v)]; }

bool RecordGraph::same_foil(long long u, long long v) const {
  return apex(u) == apex(v) && depth(u) == depth(v);
}

FoilPartition foils(const RecordGraph& g) {
  const Window& w = g.window();
  FoilPartition part;
  const long long n = w.length() + 1;
  part.foil_of.assign(static_cast<std::size_t>(n), -1);

  // group by (apex, depth); class keys assigned in ascending vertex order
  std::vector<std::pair<std::pair<long long, long long>, long long>> keyed;
  keyed.reserve(static_cast<std::size_t>(n));
  for (long long v = w.lo; v <= w.hi; ++v)
    keyed.push_back({{g.apex(v), g.depth(v)}, v});
  std::sort(keyed.begin(), keyed.end());
  long long id = -1;
  std::pair<long long, long long> last{LLONG_MIN, LLONG_MIN};
  for (const auto& [key, v] : keyed) {
    if (key != last) {
      ++id;
      last = key;
      part.members.push_back({});
    }
    part.members.back().push_back(v);
    part.foil_of[static_cast<std::size_t>(v - w.lo)] = id;
  }
  // a finite window never certifies a complete foil
  part.boundary_censored.assign(part.members.size(), 1);
  return part;
}

Resolved<long long> r_perp(const RecordGraph& g, long long i) {
  const Window& w = g.window();
  if (!w.has_vertex(i)) throw std::out_of_range("r_perp: vertex out of window");
  long long my_apex = g.apex(i);
  long long my_depth = g.depth(i);
  for (long long k = i + 1; k <= w.hi; ++k) {
    if (g.apex(k) != my_apex) return censored;  // relation to i undecidable in-window
    if (g.depth(k) == my_depth) return k;
  }
  return censored;  // foil tail is boundary-limited
}

}  // namespace recwalk
