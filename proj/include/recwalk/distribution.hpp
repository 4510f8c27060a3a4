#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "recwalk/rng.hpp"

namespace recwalk {

struct Rational {
  long long num = 0;
  long long den = 1;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Finite-support integer law. Probabilities are doubles throughout; sampling
// is inverse-CDF over the sorted support, so runs are reproducible.
class DiscreteLaw {
 public:
  DiscreteLaw() = default;

  // Pairs (k, p) with p > 0; validates sum within 1e-12 of 1.
  static DiscreteLaw from_pairs(std::vector<std::pair<long long, double>> support);

  double prob(long long k) const;
  double mean() const;
  long long min_support() const;
  long long max_support() const;
  const std::vector<std::pair<long long, double>>& support() const { return support_; }
  bool empty() const { return support_.empty(); }

  long long sample(Rng& rng) const;

 private:
  std::vector<std::pair<long long, double>> support_;  // sorted by k
  std::vector<double> cdf_;
};

// Increments of a walk on the marked line. skip_free_left requires all mass
// on k >= -1 with 0 < P[-1] < 1; general_integer is only used by the SR and
// climbing-point experiments. Finite support is enforced: laws with unbounded
// support must be truncated explicitly by the caller before construction.
struct IncrementDistribution {
  enum class Kind { skip_free_left, general_integer };

  DiscreteLaw law;
  Kind kind = Kind::skip_free_left;
  // Exact odds for the two-point laws used by the acceptance tests, so that
  // closed forms like c = q/p are not routed through the fixed-point solver.
  std::optional<std::pair<Rational, Rational>> two_point;  // (P[-1], P[+1])

  static IncrementDistribution make(DiscreteLaw law, Kind kind = Kind::skip_free_left);
  static IncrementDistribution two_point_law(double p_minus1, double p_plus1);
  static IncrementDistribution two_point_exact(Rational p_minus1, Rational p_plus1);

  double mean() const { return law.mean(); }
  long long sample(Rng& rng) const { return law.sample(rng); }
};

// c = P[eta_{-1} < infinity], the smallest root of sum_k p_k c^{k+1} = c in
// (0,1]. Returns exactly 1.0 when the mean is <= 0. Solved by monotone
// fixed-point iteration from c0 = 0; throws on non-convergence.
double hitting_prob_c(const IncrementDistribution& d, double tol = 1e-12);

// pi_hat(k) = k pi(k) / m(pi); requires 0 < m(pi) < infinity.
DiscreteLaw size_biased(const DiscreteLaw& pi);

// Law of X+1 for a skip-free law (the offspring law of the record graph).
DiscreteLaw offspring_law(const IncrementDistribution& d);

// P[Xhat = k] = P[X = k] c^k; requires mean(d) > 0. The result has mean < 0.
IncrementDistribution tilted_distribution(const IncrementDistribution& d, double tol = 1e-12);

// (pi_bar, pi_tilde): pi_bar(k) = P[X >= k] c^k, pi_tilde(k) = c^{k-1} P[X = k-1].
// Requires mean(d) > 0; both results are normalized within 1e-12.
std::pair<DiscreteLaw, DiscreteLaw> bar_tilde_pi(const IncrementDistribution& d,
                                                 double tol = 1e-12);

}  // namespace recwalk
