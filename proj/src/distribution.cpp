#include "recwalk/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recwalk {

DiscreteLaw DiscreteLaw::from_pairs(std::vector<std::pair<long long, double>> support) {
  std::sort(support.begin(), support.end());
  DiscreteLaw law;
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    auto [k, p] = support[i];
    if (p <= 0.0 || !std::isfinite(p))
      throw std::invalid_argument("DiscreteLaw: probabilities must be positive and finite");
    if (i > 0 && support[i - 1].first == k)
      throw std::invalid_argument("DiscreteLaw: duplicate support point");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteLaw: probabilities must sum to 1 within 1e-12");
  law.support_ = std::move(support);
  law.cdf_.reserve(law.support_.size());
  double acc = 0.0;
  for (const auto& [k, p] : law.support_) {
    acc += p;
    law.cdf_.push_back(acc);
  }
  law.cdf_.back() = 1.0;
  return law;
}

double DiscreteLaw::prob(long long k) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), k,
                             [](const auto& kv, long long key) { return kv.first < key; });
  if (it == support_.end() || it->first != k) return 0.0;
  return it->second;
}

double DiscreteLaw::mean() const {
  double m = 0.0;
  for (const auto& [k, p] : support_) m += static_cast<double>(k) * p;
  return m;
}

long long DiscreteLaw::min_support() const {
  if (support_.empty()) throw std::logic_error("DiscreteLaw: empty law");
  return support_.front().first;
}

long long DiscreteLaw::max_support() const {
  if (support_.empty()) throw std::logic_error("DiscreteLaw: empty law");
  return support_.back().first;
}

long long DiscreteLaw::sample(Rng& rng) const {
  if (support_.empty()) throw std::logic_error("DiscreteLaw: empty law");
  double u = rng.next_unit();
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return support_[static_cast<std::size_t>(it - cdf_.begin())].first;
}

IncrementDistribution IncrementDistribution::make(DiscreteLaw law, Kind kind) {
  if (law.empty()) throw std::invalid_argument("IncrementDistribution: empty law");
  if (kind == Kind::skip_free_left) {
    if (law.min_support() < -1)
      throw std::invalid_argument("IncrementDistribution: skip-free law needs support >= -1");
    double pm1 = law.prob(-1);
    if (pm1 <= 0.0 || pm1 >= 1.0)
      throw std::invalid_argument("IncrementDistribution: skip-free law needs 0 < P[-1] < 1");
  }
  IncrementDistribution d;
  d.law = std::move(law);
  d.kind = kind;
  return d;
}

IncrementDistribution IncrementDistribution::two_point_law(double p_minus1, double p_plus1) {
  return make(DiscreteLaw::from_pairs({{-1, p_minus1}, {1, p_plus1}}));
}

IncrementDistribution IncrementDistribution::two_point_exact(Rational q, Rational p) {
  auto d = two_point_law(q.to_double(), p.to_double());
  d.two_point = std::make_pair(q, p);
  return d;
}

double hitting_prob_c(const IncrementDistribution& d, double tol) {
  if (d.kind != IncrementDistribution::Kind::skip_free_left)
    throw std::invalid_argument("hitting_prob_c: requires a skip-free-to-the-left law");
  if (d.mean() <= 0.0) return 1.0;
  if (d.two_point) {
    const auto& [q, p] = *d.two_point;
    // smallest root of p c^2 - c + q = 0 is q/p when p > q
    return (static_cast<double>(q.num) * p.den) / (static_cast<double>(q.den) * p.num);
  }
  const auto& sup = d.law.support();
  // monotone iteration c <- sum_k p_k c^{k+1}, increasing from 0 to the
  // smallest fixed point
  double c = 0.0;
  for (long long iter = 0; iter < 100000000LL; ++iter) {
    double next = 0.0;
    for (const auto& [k, p] : sup) next += p * std::pow(c, static_cast<double>(k + 1));
    if (std::fabs(next - c) <= tol) return next;
    c = next;
  }
  double residual = 0.0;
  for (const auto& [k, p] : sup) residual += p * std::pow(c, static_cast<double>(k + 1));
  residual -= c;
  throw std::runtime_error("hitting_prob_c: fixed-point iteration did not converge, residual " +
                           std::to_string(residual));
}

DiscreteLaw size_biased(const DiscreteLaw& pi) {
  if (pi.min_support() < 0)
    throw std::invalid_argument("size_biased: offspring law needs support >= 0");
  double m = pi.mean();
  if (m <= 0.0) throw std::invalid_argument("size_biased: law has mean 0");
  std::vector<std::pair<long long, double>> out;
  for (const auto& [k, p] : pi.support())
    if (k > 0) out.emplace_back(k, static_cast<double>(k) * p / m);
  // renormalize away the accumulated rounding so from_pairs accepts it
  double total = 0.0;
  for (auto& [k, p] : out) total += p;
  for (auto& [k, p] : out) p /= total;
  return DiscreteLaw::from_pairs(std::move(out));
}

DiscreteLaw offspring_law(const IncrementDistribution& d) {
  if (d.kind != IncrementDistribution::Kind::skip_free_left)
    throw std::invalid_argument("offspring_law: requires a skip-free law");
  std::vector<std::pair<long long, double>> out;
  for (const auto& [k, p] : d.law.support()) out.emplace_back(k + 1, p);
  return DiscreteLaw::from_pairs(std::move(out));
}

IncrementDistribution tilted_distribution(const IncrementDistribution& d, double tol) {
  if (d.mean() <= 0.0)
    throw std::domain_error("tilted_distribution: requires mean(d) > 0");
  double c = hitting_prob_c(d, tol);
  std::vector<std::pair<long long, double>> out;
  double total = 0.0;
  for (const auto& [k, p] : d.law.support()) {
    double mass = p * std::pow(c, static_cast<double>(k));
    out.emplace_back(k, mass);
    total += mass;
  }
  for (auto& [k, p] : out) p /= total;
  return IncrementDistribution::make(DiscreteLaw::from_pairs(std::move(out)));
}

std::pair<DiscreteLaw, DiscreteLaw> bar_tilde_pi(const IncrementDistribution& d, double tol) {
  if (d.mean() <= 0.0) throw std::domain_error("bar_tilde_pi: requires mean(d) > 0");
  double c = hitting_prob_c(d, tol);
  long long kmax = d.law.max_support();

  std::vector<std::pair<long long, double>> bar;
  for (long long k = 0; k <= kmax; ++k) {
    double tail = 0.0;
    for (const auto& [j, p] : d.law.support())
      if (j >= k) tail += p;
    double mass = tail * std::pow(c, static_cast<double>(k));
    if (mass > 0.0) bar.emplace_back(k, mass);
  }
  std::vector<std::pair<long long, double>> tilde;
  for (const auto& [k, p] : d.law.support())
    tilde.emplace_back(k + 1, std::pow(c, static_cast<double>(k)) * p);

  auto renorm = [](std::vector<std::pair<long long, double>>& v) {
    double total = 0.0;
    for (auto& [k, p] : v) total += p;
    if (std::fabs(total - 1.0) > 1e-12)
      throw std::runtime_error("bar_tilde_pi: law failed to normalize within 1e-12");
    for (auto& [k, p] : v) p /= total;
  };
  renorm(bar);
  renorm(tilde);
  return {DiscreteLaw::from_pairs(std::move(bar)), DiscreteLaw::from_pairs(std::move(tilde))};
}

}  // namespace recwalk
