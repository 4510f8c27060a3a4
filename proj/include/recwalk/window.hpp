#pragma once

#include <vector>

#include "recwalk/distribution.hpp"

namespace recwalk {

// Finite contiguous segment of the marked line: vertices lo..hi with the
// origin 0 inside, mark(i) on the edge (i, i+1) for lo <= i < hi. Immutable
// after construction.
struct Window {
  long long lo = 0;
  long long hi = 0;
  std::vector<int> marks;  // marks[i - lo] = x_i

  Window() = default;
  Window(long long lo_, std::vector<int> marks_);

  long long length() const { return hi - lo; }
  int mark(long long i) const;
  bool has_vertex(long long v) const { return v >= lo && v <= hi; }
  bool has_mark(long long i) const { return i >= lo && i < hi; }
  bool skip_free() const;
};

// y(n, j) = sum_{l=n}^{j-1} x_l, with y(n, n) = 0.
long long partial_sum(const Window& w, long long n, long long j);

// Prefix sums over vertices: out[i - lo] = y(lo, i), i in lo..hi.
std::vector<long long> prefix_sums(const Window& w);

// i.i.d. marks drawn left to right.
Window sample_window(const IncrementDistribution& d, long long lo, long long hi, Rng& rng);

// Extension keeps every existing mark (resolved quantities never change) and
// draws the right flank first, then the left flank from old lo-1 downward.
Window extend_window(const Window& w, const IncrementDistribution& d, long long new_lo,
                     long long new_hi, Rng& rng);

}  // namespace recwalk
