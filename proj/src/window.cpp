#include "recwalk/window.hpp"

#include <stdexcept>

namespace recwalk {

Window::Window(long long lo_, std::vector<int> marks_)
    : lo(lo_), hi(lo_ + static_cast<long long>(marks_.size())), marks(std::move(marks_)) {
  if (lo > 0 || hi < 0) throw std::invalid_argument("Window: origin 0 must satisfy lo <= 0 <= hi");
}

int Window::mark(long long i) const {
  if (!has_mark(i)) throw std::out_of_range("Window: mark index out of window");
  return marks[static_cast<std::size_t>(i - lo)];
}

bool Window::skip_free() const {
  for (int x : marks)
    if (x < -1) return false;
  return true;
}

long long partial_sum(const Window& w, long long n, long long j) {
  if (n > j) throw std::invalid_argument("partial_sum: need n <= j");
  if (n < w.lo || j > w.hi) throw std::out_of_range("partial_sum: indices out of window");
  long long s = 0;
  for (long long l = n; l < j; ++l) s += w.mark(l);
  return s;
}

std::vector<long long> prefix_sums(const Window& w) {
  std::vector<long long> p(static_cast<std::size_t>(w.length()) + 1);
  p[0] = 0;
  for (long long i = 0; i < w.length(); ++i)
    p[static_cast<std::size_t>(i + 1)] = p[static_cast<std::size_t>(i)] + w.marks[static_cast<std::size_t>(i)];
  return p;
}

Window sample_window(const IncrementDistribution& d, long long lo, long long hi, Rng& rng) {
  if (lo > 0 || hi < 0 || lo > hi) throw std::invalid_argument("sample_window: need lo <= 0 <= hi");
  std::vector<int> marks(static_cast<std::size_t>(hi - lo));
  for (auto& x : marks) x = static_cast<int>(d.sample(rng));
  return Window(lo, std::move(marks));
}

Window extend_window(const Window& w, const IncrementDistribution& d, long long new_lo,
                     long long new_hi, Rng& rng) {
  if (new_lo > w.lo || new_hi < w.hi)
    throw std::invalid_argument("extend_window: new bounds must contain the old window");
  std::vector<int> right(static_cast<std::size_t>(new_hi - w.hi));
  for (auto& x : right) x = static_cast<int>(d.sample(rng));
  std::vector<int> left(static_cast<std::size_t>(w.lo - new_lo));
  for (long long i = 0; i < static_cast<long long>(left.size()); ++i) {
    // drawn from old lo-1 downward, stored in line order
    left[static_cast<std::size_t>(left.size() - 1 - static_cast<std::size_t>(i))] =
        static_cast<int>(d.sample(rng));
  }
  std::vector<int> marks;
  marks.reserve(static_cast<std::size_t>(new_hi - new_lo));
  marks.insert(marks.end(), left.begin(), left.end());
  marks.insert(marks.end(), w.marks.begin(), w.marks.end());
  marks.insert(marks.end(), right.begin(), right.end());
  return Window(new_lo, std::move(marks));
}

}  // namespace recwalk
