#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace recwalk {

// Canonical-key counts (tree keys at some radius, or integer tuples).
struct EmpiricalDistribution {
  std::string schema;  // key schema id; distances require matching schemas
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(const std::string& key, std::uint64_t n = 1) {
    counts[key] += n;
    total += n;
  }
};

double tv_distance(const EmpiricalDistribution& p, const EmpiricalDistribution& q);
// Reference given as a full probability table (mass off the table counts as 0).
double tv_distance(const EmpiricalDistribution& p, const std::map<std::string, double>& ref);

// Regularized incomplete gamma functions (series / continued fraction).
double regularized_gamma_lower(double a, double x);
double regularized_gamma_upper(double a, double x);

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_tail(double stat, int dof);

// Two-sided standard normal tail P[|Z| >= z].
double normal_two_sided_tail(double z);

struct TestReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison;  // e.g. "p>0.01", "tv<0.02"
  std::uint64_t samples = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  double runtime_ms = 0.0;
  double censor_fraction = 0.0;
  std::string details;
};

// Pearson goodness of fit against a reference table; bins with expected count
// below min_expected are pooled smallest-first, observed keys missing from
// the reference pool into a catch-all cell. Throws on degenerate dof.
TestReport chi_square_gof(const EmpiricalDistribution& emp,
                          const std::map<std::string, double>& ref, double min_expected = 5.0);

// |phat - p| <= z * sqrt(p(1-p)/n)
bool within_binomial_sigma(double phat, double p, std::uint64_t n, double z);

}  // namespace recwalk
