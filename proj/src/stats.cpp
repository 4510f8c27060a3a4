#include "recwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

namespace recwalk {

double tv_distance(const EmpiricalDistribution& p, const EmpiricalDistribution& q) {
  if (p.schema != q.schema)
    throw std::invalid_argument("tv_distance: key schema mismatch (" + p.schema + " vs " +
                                q.schema + ")");
  if (p.total == 0 || q.total == 0) throw std::invalid_argument("tv_distance: empty distribution");
  std::set<std::string> keys;
  for (const auto& [k, c] : p.counts) keys.insert(k);
  for (const auto& [k, c] : q.counts) keys.insert(k);
  double tv = 0.0;
  for (const auto& k : keys) {
    auto ip = p.counts.find(k);
    auto iq = q.counts.find(k);
    double fp = ip == p.counts.end() ? 0.0 : static_cast<double>(ip->second) / p.total;
    double fq = iq == q.counts.end() ? 0.0 : static_cast<double>(iq->second) / q.total;
    tv += std::fabs(fp - fq);
  }
  return tv / 2.0;
}

double tv_distance(const EmpiricalDistribution& p, const std::map<std::string, double>& ref) {
  if (p.total == 0) throw std::invalid_argument("tv_distance: empty distribution");
  std::set<std::string> keys;
  for (const auto& [k, c] : p.counts) keys.insert(k);
  for (const auto& [k, c] : ref) keys.insert(k);
  double tv = 0.0;
  for (const auto& k : keys) {
    auto ip = p.counts.find(k);
    auto ir = ref.find(k);
    double fp = ip == p.counts.end() ? 0.0 : static_cast<double>(ip->second) / p.total;
    double fr = ir == ref.end() ? 0.0 : ir->second;
    tv += std::fabs(fp - fr);
  }
  return tv / 2.0;
}

namespace {

// series expansion of P(a,x), valid for x < a+1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_p_series: no convergence");
}

// modified Lentz continued fraction for Q(a,x), valid for x >= a+1
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("gamma_q_cf: no convergence");
}

}  // namespace

double regularized_gamma_lower(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_lower: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_upper(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_upper: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_tail(double stat, int dof) {
  if (dof <= 0) throw std::invalid_argument("chi_square_tail: dof must be positive");
  if (stat <= 0.0) return 1.0;
  return regularized_gamma_upper(dof / 2.0, stat / 2.0);
}

double normal_two_sided_tail(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

TestReport chi_square_gof(const EmpiricalDistribution& emp,
                          const std::map<std::string, double>& ref, double min_expected) {
  if (emp.total == 0) throw std::invalid_argument("chi_square_gof: empty distribution");
  const double n = static_cast<double>(emp.total);

  // observed/expected per reference key, plus a catch-all for keys the
  // reference does not carry
  std::vector<std::pair<double, double>> cells;  // (expected, observed)
  double ref_mass = 0.0;
  for (const auto& [k, p] : ref) {
    auto it = emp.counts.find(k);
    double obs = it == emp.counts.end() ? 0.0 : static_cast<double>(it->second);
    cells.emplace_back(p * n, obs);
    ref_mass += p;
  }
  double extra_obs = 0.0;
  for (const auto& [k, c] : emp.counts)
    if (!ref.count(k)) extra_obs += static_cast<double>(c);
  double extra_exp = std::max(0.0, 1.0 - ref_mass) * n;
  if (extra_obs > 0.0 || extra_exp > 0.0) cells.emplace_back(extra_exp, extra_obs);

  // pool small expected cells, smallest first
  std::sort(cells.begin(), cells.end());
  while (cells.size() > 1 && cells.front().first < min_expected) {
    cells[1].first += cells[0].first;
    cells[1].second += cells[0].second;
    cells.erase(cells.begin());
    std::sort(cells.begin(), cells.end());
  }

  TestReport rep;
  rep.name = "chi_square_gof";
  rep.samples = emp.total;
  int dof = static_cast<int>(cells.size()) - 1;
  if (dof <= 0) throw std::invalid_argument("chi_square_gof: degenerate degrees of freedom");
  double stat = 0.0;
  for (const auto& [e, o] : cells) {
    if (e <= 0.0) {
      stat = std::numeric_limits<double>::infinity();
      break;
    }
    stat += (o - e) * (o - e) / e;
  }
  rep.statistic = std::isinf(stat) ? 0.0 : chi_square_tail(stat, dof);  // p-value
  rep.threshold = 0.01;
  rep.comparison = "p>0.01";
  rep.pass = rep.statistic > rep.threshold;
  rep.details = "chi2=" + std::to_string(stat) + " dof=" + std::to_string(dof);
  return rep;
}

bool within_binomial_sigma(double phat, double p, std::uint64_t n, double z) {
  double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(n));
  return std::fabs(phat - p) <= z * sigma;
}

}  // namespace recwalk
