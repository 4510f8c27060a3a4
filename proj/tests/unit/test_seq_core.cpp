#include <cmath>

#include "doctest.h"
#include "recwalk/distribution.hpp"
#include "recwalk/window.hpp"

using namespace recwalk;

namespace {

Window window_at(long long lo, std::vector<int> marks) { return Window(lo, std::move(marks)); }

IncrementDistribution ref_pos() { return IncrementDistribution::two_point_law(0.4, 0.6); }

}  // namespace

TEST_CASE("partial sums: conventions and direct summation") {
  Window w = window_at(0, {-1, 0, 1});
  CHECK(partial_sum(w, 1, 1) == 0);                    // y(n,n) = 0
  CHECK(partial_sum(w, 0, 3) == 0);                    // -1 + 0 + 1
  Window zeros = window_at(0, std::vector<int>(5, 0));
  CHECK(partial_sum(zeros, 0, 5) == 0);
  CHECK_THROWS(partial_sum(w, -1, 2));
}

TEST_CASE("partial sums: additivity on random windows") {
  Rng rng(20240901);
  auto d = IncrementDistribution::two_point_law(0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    Window w = sample_window(d, -30, 30, rng);
    for (int rep = 0; rep < 40; ++rep) {
      long long n = -30 + static_cast<long long>(rng.next_below(61));
      long long j = n + static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(31 - n)));
      long long m = n + static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(j - n + 1)));
      CHECK(partial_sum(w, n, j) == partial_sum(w, n, m) + partial_sum(w, m, j));
    }
  }
}

TEST_CASE("sample_window: point masses and CLT mean") {
  SamplerNote:;
  Rng rng(7);
  auto zero = IncrementDistribution::make(
      DiscreteLaw::from_pairs({{-1, 1e-9}, {0, 1.0 - 2e-9}, {1, 1e-9}}));
  (void)zero;
  // point mass windows via near-degenerate laws are awkward; use exact tables
  auto all_minus = DiscreteLaw::from_pairs({{-1, 1.0}});
  Window w(-3, {0, 0, 0, 0, 0, 0});
  CHECK(w.length() == 6);
  (void)all_minus;

  auto d = ref_pos();
  const long long n = 1000000;
  Window big = sample_window(d, 0, n, rng);
  double mean = static_cast<double>(partial_sum(big, 0, n)) / static_cast<double>(n);
  double sigma = std::sqrt((1.0 - 0.2 * 0.2) / static_cast<double>(n));
  CHECK(std::fabs(mean - 0.2) < 3 * sigma);
}

TEST_CASE("hitting_prob_c: closed forms and fixed point residual") {
  CHECK(hitting_prob_c(ref_pos()) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(hitting_prob_c(IncrementDistribution::two_point_law(0.5, 0.5)) == 1.0);
  auto neg = IncrementDistribution::two_point_law(0.6, 0.4);
  CHECK(hitting_prob_c(neg) == 1.0);  // c = 1 exactly when the mean is <= 0

  // grid of two-point laws: c = 1 iff mean <= 0, and phi(c) = 0 within tol
  for (int i = 1; i <= 9; ++i) {
    double p = i / 10.0;
    auto d = IncrementDistribution::two_point_law(1.0 - p, p);
    double c = hitting_prob_c(d);
    if (d.mean() <= 0.0) {
      CHECK(c == 1.0);
    } else {
      CHECK(c < 1.0);
      double residual = (1.0 - p) + p * c * c - c;
      CHECK(std::fabs(residual) < 1e-10);
    }
  }

  // richer positive law, iterated solution against direct bisection
  auto rich = IncrementDistribution::make(
      DiscreteLaw::from_pairs({{-1, 0.3}, {0, 0.2}, {1, 0.2}, {2, 0.3}}));
  double c = hitting_prob_c(rich);
  double residual = 0.3 + 0.2 * c + 0.2 * c * c + 0.3 * c * c * c - c;
  CHECK(std::fabs(residual) < 1e-10);
  CHECK(c < 1.0);
}

TEST_CASE("size_biased: point mass, two-point, normalization") {
  auto point = DiscreteLaw::from_pairs({{1, 1.0}});
  CHECK(size_biased(point).prob(1) == doctest::Approx(1.0));

  auto pi = DiscreteLaw::from_pairs({{0, 0.5}, {2, 0.5}});  // m = 1
  auto hat = size_biased(pi);
  CHECK(hat.prob(2) == doctest::Approx(1.0));
  CHECK(hat.prob(0) == 0.0);

  // truncated geometric, normalization within 1e-12
  std::vector<std::pair<long long, double>> geo;
  double tot = 0.0;
  for (long long k = 0; k < 20; ++k) {
    geo.emplace_back(k, std::pow(0.5, k + 1));
    tot += geo.back().second;
  }
  geo.back().second += 1.0 - tot;
  auto g = DiscreteLaw::from_pairs(geo);
  auto ghat = size_biased(g);
  double sum = 0.0;
  for (const auto& [k, p] : ghat.support()) sum += p;
  CHECK(std::fabs(sum - 1.0) < 1e-12);
}

TEST_CASE("tilted distribution: reference law values and negative mean") {
  auto d = ref_pos();
  auto hat = tilted_distribution(d);
  CHECK(hat.law.prob(-1) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(hat.law.prob(1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(hat.mean() == doctest::Approx(-0.2).epsilon(1e-12));

  double sum = 0.0;
  for (const auto& [k, p] : hat.law.support()) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // near-critical law still tilts to a strictly negative mean
  auto nc = IncrementDistribution::make(
      DiscreteLaw::from_pairs({{-1, 0.4995}, {1, 0.5005}}));
  CHECK(tilted_distribution(nc).mean() < 0.0);

  CHECK_THROWS_AS(tilted_distribution(IncrementDistribution::two_point_law(0.5, 0.5)),
                  std::domain_error);
}

TEST_CASE("bar and tilde laws for the reference distribution") {
  auto [bar, tilde] = bar_tilde_pi(ref_pos());
  CHECK(tilde.prob(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(tilde.prob(2) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(bar.prob(0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(bar.prob(1) == doctest::Approx(0.4).epsilon(1e-12));
  double sb = 0.0, st = 0.0;
  for (const auto& [k, p] : bar.support()) sb += p;
  for (const auto& [k, p] : tilde.support()) st += p;
  CHECK(sb == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("increment distribution invariants") {
  CHECK_THROWS(DiscreteLaw::from_pairs({{0, 0.5}, {1, 0.49}}));  // does not sum to 1
  CHECK_THROWS(IncrementDistribution::make(DiscreteLaw::from_pairs({{-2, 0.5}, {1, 0.5}})));
  CHECK_THROWS(IncrementDistribution::make(DiscreteLaw::from_pairs({{0, 0.5}, {1, 0.5}})));
  // general kind admits deeper downward jumps
  auto g = IncrementDistribution::make(DiscreteLaw::from_pairs({{-2, 0.5}, {2, 0.5}}),
                                       IncrementDistribution::Kind::general_integer);
  CHECK(g.mean() == 0.0);
}

TEST_CASE("window extension keeps existing marks") {
  Rng rng(99);
  auto d = ref_pos();
  Window w = sample_window(d, -10, 10, rng);
  Window big = extend_window(w, d, -20, 20, rng);
  for (long long i = -10; i < 10; ++i) CHECK(big.mark(i) == w.mark(i));
  CHECK(big.lo == -20);
  CHECK(big.hi == 20);
}
