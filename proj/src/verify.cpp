#include "recwalk/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <thread>

namespace recwalk {

unsigned default_threads() {
  if (const char* env = std::getenv("RECWALK_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : std::min(hc, 16u);
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// Fan samples out over threads; per-sample Rng streams make the result
// independent of the thread count. Merge order is fixed (shard index).
template <class State, class Body>
std::vector<State> run_sharded(std::uint64_t n, std::uint64_t seed, Body body) {
  unsigned nt = default_threads();
  std::vector<State> states(nt);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned th = 0; th < nt; ++th)
    pool.emplace_back([&, th] {
      for (std::uint64_t i = th; i < n; i += nt) {
        Rng rng(seed, i);
        body(i, rng, states[th]);
      }
    });
  for (auto& t : pool) t.join();
  return states;
}

std::string int_key(std::initializer_list<long long> xs) {
  std::string s;
  for (long long x : xs) {
    if (!s.empty()) s += ',';
    s += std::to_string(x);
  }
  return s;
}

std::string tuple_key(const std::vector<long long>& xs) {
  std::string s;
  for (long long x : xs) {
    if (!s.empty()) s += ',';
    s += std::to_string(x);
  }
  return s;
}

struct EmpPair {
  EmpiricalDistribution a, b;
  std::uint64_t dropped = 0;
  std::uint64_t extra = 0;
};

void merge_counts(EmpiricalDistribution& into, const EmpiricalDistribution& from) {
  for (const auto& [k, c] : from.counts) into.add(k, c);
}

TestReport tv_report(const std::string& name, std::vector<EmpPair>& shards, double threshold,
                     std::uint64_t n, std::uint64_t seed, const Timer& timer) {
  EmpiricalDistribution A, B;
  std::uint64_t dropped = 0;
  for (auto& s : shards) {
    merge_counts(A, s.a);
    merge_counts(B, s.b);
    dropped += s.dropped;
  }
  TestReport rep;
  rep.name = name;
  rep.samples = n;
  rep.seed = seed;
  rep.statistic = tv_distance(A, B);
  rep.threshold = threshold;
  rep.comparison = "tv<" + std::to_string(threshold);
  rep.censor_fraction = static_cast<double>(dropped) / static_cast<double>(std::max<std::uint64_t>(n, 1));
  rep.pass = rep.statistic < rep.threshold && rep.censor_fraction < 0.01;
  rep.runtime_ms = timer.ms();
  rep.details = "keys_a=" + std::to_string(A.counts.size()) +
                " keys_b=" + std::to_string(B.counts.size()) +
                " dropped=" + std::to_string(dropped);
  return rep;
}

// tau = inf{t > 0 : S_t >= 0}; returns (S_tau, X_{tau-1}) or nullopt past cap.
std::optional<std::pair<long long, long long>> simulate_tau(const IncrementDistribution& d,
                                                            long long cap, Rng& rng) {
  long long s = 0;
  for (long long t = 1; t <= cap; ++t) {
    long long x = d.sample(rng);
    s += x;
    if (s >= 0) return std::make_pair(s, x);
  }
  return std::nullopt;
}

std::map<std::string, double> tau_reference(const IncrementDistribution& d) {
  double c = hitting_prob_c(d);
  std::map<std::string, double> ref;
  for (const auto& [k, p] : d.law.support()) {
    if (k < 0) continue;
    for (long long j = 0; j <= k; ++j)
      ref[int_key({j, k})] += p * std::pow(c, static_cast<double>(k - j));
  }
  if (d.mean() < 0.0) ref["inf"] = -d.mean();
  return ref;
}

}  // namespace

TestReport check_tau_joint_law(const IncrementDistribution& d, std::uint64_t n, long long cap,
                               std::uint64_t seed) {
  Timer timer;
  struct State {
    EmpiricalDistribution emp;
    std::uint64_t censored = 0;
  };
  const bool count_inf = d.mean() < 0.0;
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    auto r = simulate_tau(d, cap, rng);
    if (r)
      st.emp.add(int_key({r->first, r->second}));
    else if (count_inf)
      st.emp.add("inf");
    else
      ++st.censored;
  });
  EmpiricalDistribution emp;
  std::uint64_t censored = 0;
  for (auto& s : shards) {
    merge_counts(emp, s.emp);
    censored += s.censored;
  }
  TestReport rep = chi_square_gof(emp, tau_reference(d));
  rep.name = "tau_joint_law";
  rep.seed = seed;
  rep.censor_fraction = static_cast<double>(censored) / static_cast<double>(n);
  rep.pass = rep.pass && rep.censor_fraction < 0.01;
  rep.runtime_ms = timer.ms();
  rep.details += " cap=" + std::to_string(cap) + " censored=" + std::to_string(censored);
  return rep;
}

TestReport check_tau_negative_marginal(const IncrementDistribution& d, std::uint64_t n,
                                       long long cap, std::uint64_t seed) {
  if (d.mean() >= 0.0)
    throw std::invalid_argument("check_tau_negative_marginal: requires mean(d) < 0");
  Timer timer;
  struct State {
    std::map<long long, std::uint64_t> hits;
    std::uint64_t inf = 0;
  };
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    auto r = simulate_tau(d, cap, rng);
    if (r)
      ++st.hits[r->second];
    else
      ++st.inf;
  });
  std::map<long long, std::uint64_t> hits;
  std::uint64_t inf = 0;
  for (auto& s : shards) {
    for (const auto& [k, c] : s.hits) hits[k] += c;
    inf += s.inf;
  }
  double worst = 0.0;
  bool pass = true;
  std::ostringstream details;
  for (const auto& [k, p] : d.law.support()) {
    if (k < 0) continue;
    double expect = static_cast<double>(k + 1) * p;
    double phat = static_cast<double>(hits[k]) / static_cast<double>(n);
    double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(n));
    double z = (phat - expect) / sigma;
    worst = std::max(worst, std::fabs(z));
    if (std::fabs(z) > 3.0) pass = false;
    details << "k=" << k << " z=" << z << "; ";
  }
  double p_inf = static_cast<double>(inf) / static_cast<double>(n);
  if (!within_binomial_sigma(p_inf, -d.mean(), n, 3.0)) pass = false;
  TestReport rep;
  rep.name = "tau_negative_marginal";
  rep.statistic = worst;
  rep.threshold = 3.0;
  rep.comparison = "max|z|<=3";
  rep.samples = n;
  rep.pass = pass;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = details.str() + "p_inf=" + std::to_string(p_inf);
  return rep;
}

TestReport check_hitting_powers(const IncrementDistribution& d, int k_max, std::uint64_t n_per_k,
                                std::uint64_t seed) {
  if (d.mean() <= 0.0) throw std::invalid_argument("check_hitting_powers: requires mean(d) > 0");
  Timer timer;
  double c = hitting_prob_c(d);
  const long long barrier = 400;
  bool pass = true;
  double worst = 0.0;
  std::ostringstream details;
  for (int k = 1; k <= k_max; ++k) {
    struct State {
      std::uint64_t hits = 0;
    };
    auto shards =
        run_sharded<State>(n_per_k, seed + static_cast<std::uint64_t>(k) * 0x10001,
                           [&](std::uint64_t, Rng& rng, State& st) {
                             long long s = 0;
                             while (true) {
                               s += d.sample(rng);
                               if (s <= -k) {
                                 ++st.hits;
                                 return;
                               }
                               if (s >= barrier) return;  // miss, error prob <= c^{k+barrier}
                             }
                           });
    std::uint64_t hits = 0;
    for (auto& s : shards) hits += s.hits;
    double expect = std::pow(c, k);
    double phat = static_cast<double>(hits) / static_cast<double>(n_per_k);
    double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(n_per_k));
    double z = (phat - expect) / sigma;
    worst = std::max(worst, std::fabs(z));
    if (std::fabs(z) > 3.0) pass = false;
    details << "k=" << k << " z=" << z << "; ";
  }
  TestReport rep;
  rep.name = "hitting_powers";
  rep.statistic = worst;
  rep.threshold = 3.0;
  rep.comparison = "max|z|<=3";
  rep.samples = n_per_k * static_cast<std::uint64_t>(k_max);
  rep.pass = pass;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = details.str();
  return rep;
}

TestReport check_parent_probability(const IncrementDistribution& d, std::uint64_t n,
                                    long long cap, std::uint64_t seed) {
  if (d.mean() >= 0.0)
    throw std::invalid_argument("check_parent_probability: requires mean(d) < 0");
  Timer timer;
  struct State {
    std::uint64_t parent = 0, both = 0;
  };
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    auto r1 = simulate_tau(d, cap, rng);
    if (!r1) return;
    ++st.parent;
    auto r2 = simulate_tau(d, cap, rng);  // strong Markov restart at the record
    if (r2) ++st.both;
  });
  std::uint64_t parent = 0, both = 0;
  for (auto& s : shards) {
    parent += s.parent;
    both += s.both;
  }
  double m = d.mean() + 1.0;
  double p1 = static_cast<double>(parent) / static_cast<double>(n);
  double p2 = static_cast<double>(both) / static_cast<double>(std::max<std::uint64_t>(parent, 1));
  bool pass = within_binomial_sigma(p1, m, n, 3.0) && within_binomial_sigma(p2, m, parent, 3.0);
  TestReport rep;
  rep.name = "parent_probability";
  rep.statistic = p1;
  rep.threshold = m;
  rep.comparison = "|p-m|<=3sigma";
  rep.samples = n;
  rep.pass = pass;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "p_parent=" + std::to_string(p1) + " p_grandparent_cond=" + std::to_string(p2) +
                " m=" + std::to_string(m);
  return rep;
}

TestReport check_phase(const IncrementDistribution& d, long long window, std::uint64_t n,
                       std::uint64_t seed) {
  Timer timer;
  double mean = d.mean();
  struct State {
    std::uint64_t ok = 0;
  };
  std::vector<State> shards;
  std::string what;
  double threshold;
  if (mean < 0.0) {
    what = "finite_component_fraction";
    threshold = 0.99;
    shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
      Window w = sample_window(d, -window, window, rng);
      RecordGraph g = RecordGraph::build(w);
      long long a = g.apex(0);
      if (!g.successor(a) && L_of(w, a).resolved()) ++st.ok;
    });
  } else if (mean == 0.0) {
    what = "connectivity_fraction";
    threshold = 0.95;
    shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
      Window w = sample_window(d, -window, window, rng);
      RecordGraph g = RecordGraph::build(w);
      if (g.apex(-window) == g.apex(0)) ++st.ok;  // same in-window component
    });
  } else {
    what = "two_end_evidence_fraction";
    threshold = 0.99;
    const long long margin = 30;
    shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
      Window w = sample_window(d, -window, window, rng);
      RecordGraph g = RecordGraph::build(w);
      if (g.depth(0) < 10) return;  // unbounded ancestor chain evidence
      // margin-certified path vertex at or below 0
      auto P = prefix_sums(w);
      long long run_max = LLONG_MIN;
      bool found = false;
      for (long long i = w.lo; i <= 0; ++i) {
        long long p = P[static_cast<std::size_t>(i - w.lo)];
        if (i > w.lo && run_max <= p && p >= margin) {
          found = true;
          break;
        }
        run_max = std::max(run_max, p);
      }
      if (found) ++st.ok;
    });
  }
  std::uint64_t ok = 0;
  for (auto& s : shards) ok += s.ok;
  TestReport rep;
  rep.name = "phase_" + what;
  rep.statistic = static_cast<double>(ok) / static_cast<double>(n);
  rep.threshold = threshold;
  rep.comparison = "frac>" + std::to_string(threshold);
  rep.samples = n;
  rep.pass = rep.statistic > threshold;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "window=" + std::to_string(window);
  return rep;
}

namespace {

// Ball key of the component of 0, escalating the window by doubling until the
// ball is certain. nullopt when max_escalations is exhausted.
std::optional<std::string> escalating_ball_key(const IncrementDistribution& d, int radius,
                                               long long span0, int max_escalations, Rng& rng) {
  Window w = sample_window(d, -span0, span0, rng);
  for (int e = 0;; ++e) {
    RecordGraph g = RecordGraph::build(w);
    MarkedComponent comp = forward_psi(g, radius + 1);
    Ball b = ball_around(comp.tree, comp.root, radius);
    if (b.certain) return canonical_encode(b.tree, b.root, EncodeMode::ordered);
    if (e >= max_escalations) return std::nullopt;
    w = extend_window(w, d, 2 * w.lo, 2 * w.hi, rng);
  }
}

std::string sampled_ball_key(const OrderedTree& t, int around, int radius, EncodeMode mode) {
  Ball b = ball_around(t, around, radius);
  if (!b.certain) throw std::logic_error("sampled tree ball unexpectedly censored");
  return canonical_encode(b.tree, b.root, mode);
}

}  // namespace

TestReport check_component_law(const IncrementDistribution& d, int radius, std::uint64_t n,
                               std::uint64_t seed) {
  Timer timer;
  double mean = d.mean();
  std::vector<EmpPair> shards;
  std::string name;
  if (mean == 0.0) {
    name = "component_law_zero_vs_egwt";
    DiscreteLaw pi = offspring_law(d);
    SamplerBudget budget;
    budget.height_cap = radius + 2;
    budget.depth_cap = radius + 1;
    shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
      st.a.schema = st.b.schema = "ball_ordered_r" + std::to_string(radius);
      auto key = escalating_ball_key(d, radius, 128, 6, rng);
      if (!key) {
        ++st.dropped;
        return;
      }
      st.a.add(*key);
      OrderedTree t = sample_egwt(pi, budget, rng);
      st.b.add(sampled_ball_key(t, t.root, radius, EncodeMode::ordered));
    });
  } else if (mean < 0.0) {
    name = "component_law_negative_vs_tgwt";
    DiscreteLaw pi = offspring_law(d);
    SamplerBudget budget;
    shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
      st.a.schema = st.b.schema = "ball_ordered_r" + std::to_string(radius);
      auto key = escalating_ball_key(d, radius, 128, 6, rng);
      if (!key) {
        ++st.dropped;
        return;
      }
      st.a.add(*key);
      OrderedTree t = sample_tgwt(pi, budget, rng);
      st.b.add(sampled_ball_key(t, t.root, radius, EncodeMode::ordered));
    });
  } else {
    name = "component_law_positive_vs_mekt";
    SamplerBudget budget;
    const long long span = 512;
    shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
      st.a.schema = st.b.schema = "ball_ordered_marked_r" + std::to_string(radius);
      ConstructedWindow cw = construction_positive_mean(d, span, rng);
      MarkedComponent comp = forward_psi_hat(cw, radius + 1);
      Ball ball = ball_around(comp.tree, comp.root, radius);
      if (!ball.certain) {
        ++st.dropped;
        return;
      }
      st.a.add(canonical_encode(ball.tree, ball.root, EncodeMode::ordered));
      OrderedTree t = sample_mekt(d, budget, radius + 2, radius + 2, rng);
      st.b.add(sampled_ball_key(t, t.root, radius, EncodeMode::ordered));
    });
  }
  TestReport rep = tv_report(name, shards, 0.02, n, seed, timer);
  return rep;
}

TestReport check_joint_mark_law(const IncrementDistribution& d, std::uint64_t n,
                                std::uint64_t seed) {
  if (d.mean() <= 0.0) throw std::invalid_argument("check_joint_mark_law: requires mean > 0");
  Timer timer;
  double c = hitting_prob_c(d);
  // reference P[m, k] = P[X0 = m+k] c^k
  std::map<std::string, double> ref;
  for (const auto& [s, p] : d.law.support()) {
    if (s < 0) continue;
    for (long long k = 0; k <= s; ++k)
      ref[int_key({s - k, k})] += p * std::pow(c, static_cast<double>(k));
  }

  struct State {
    EmpiricalDistribution bush, walk;
    std::uint64_t rejected = 0;
  };
  SamplerBudget budget;
  const long long margin = 40;
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    // arm 1: the MEKT bush sampler
    OrderedTree bush = sample_mekt_bush(d, budget, rng);
    long long m = *bush.node(bush.root).mark;
    long long k = static_cast<long long>(bush.node(bush.root).children.size());
    st.bush.add(int_key({m, k}));
    // arm 2: conditioned left walk, S_m <= 0 for all m < 0, rejection +
    // margin certification of the running maximum
    for (;;) {
      long long v = 0;        // S_m
      long long best = LLONG_MIN;  // max_{m<0} S_m
      long long x_first = 0;
      bool rejected = false;
      for (long long step = 1;; ++step) {
        long long x = d.sample(rng);
        if (step == 1) x_first = x;
        v -= x;
        if (v > 0) {
          rejected = true;
          ++st.rejected;
          break;
        }
        best = std::max(best, v);
        if (best - v >= margin) break;  // undercut prob <= c^margin
      }
      if (rejected) continue;
      long long type = -best;              // t(0) = -max S_m >= 0
      long long kk = x_first - type;       // bush offspring = X_{-1} - t(0)
      st.walk.add(int_key({type, kk}));
      break;
    }
  });
  EmpiricalDistribution bush, walk;
  for (auto& s : shards) {
    merge_counts(bush, s.bush);
    merge_counts(walk, s.walk);
  }
  TestReport r1 = chi_square_gof(bush, ref);
  TestReport r2 = chi_square_gof(walk, ref);
  TestReport rep;
  rep.name = "joint_mark_law";
  rep.statistic = std::min(r1.statistic, r2.statistic);
  rep.threshold = 0.01;
  rep.comparison = "min p>0.01";
  rep.samples = n;
  rep.pass = r1.pass && r2.pass;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "p_bush=" + std::to_string(r1.statistic) +
                " p_walk=" + std::to_string(r2.statistic);
  return rep;
}

TestReport check_dn_radon_nikodym(const IncrementDistribution& d, int max_n, std::uint64_t n,
                                  std::uint64_t seed) {
  if (d.mean() != 0.0) throw std::invalid_argument("check_dn_radon_nikodym: requires mean 0");
  Timer timer;
  // patterns: (x_{v-1}, x_v) over the increment support
  std::vector<std::pair<long long, long long>> patterns;
  for (const auto& [a, pa] : d.law.support())
    for (const auto& [b, pb] : d.law.support()) patterns.emplace_back(a, b);

  struct State {
    // per (iter, pattern): sum and sum of squares of the paired difference
    std::vector<double> sum, sum2;
    std::vector<double> dn_sum;
    std::uint64_t used = 0, dropped = 0;
  };
  const std::size_t np = patterns.size();
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    if (st.sum.empty()) {
      st.sum.assign(static_cast<std::size_t>(max_n) * np, 0.0);
      st.sum2.assign(static_cast<std::size_t>(max_n) * np, 0.0);
      st.dn_sum.assign(static_cast<std::size_t>(max_n), 0.0);
    }
    Window w = sample_window(d, -256, 256, rng);
    for (int e = 0;; ++e) {
      bool ok = true;
      // need R^max_n(0) and its following mark, and L(0)
      auto rn = record_iterate(w, 0, max_n);
      if (!rn || rn.value() + 1 > w.hi) ok = false;
      if (ok && !L_of(w, 0).resolved()) ok = false;
      if (ok) break;
      if (e >= 6) {
        ++st.dropped;
        return;
      }
      w = extend_window(w, d, 2 * w.lo, 2 * w.hi, rng);
    }
    ++st.used;
    long long L = L_of(w, 0).value();
    for (int it = 1; it <= max_n; ++it) {
      long long shifted = record_iterate(w, 0, it).value();
      // d_it(0): descendants of 0 whose it-th iterate is 0
      long long dn = 0;
      for (long long j = L; j < 0; ++j) {
        auto rj = record_iterate(w, j, it);
        if (rj && rj.value() == 0) ++dn;
      }
      st.dn_sum[static_cast<std::size_t>(it - 1)] += static_cast<double>(dn);
      for (std::size_t pi = 0; pi < np; ++pi) {
        auto [a, b] = patterns[pi];
        double lhs =
            (w.mark(shifted - 1) == a && w.mark(shifted) == b) ? 1.0 : 0.0;
        double rhs =
            (w.mark(-1) == a && w.mark(0) == b) ? static_cast<double>(dn) : 0.0;
        double diff = lhs - rhs;
        std::size_t ix = static_cast<std::size_t>(it - 1) * np + pi;
        st.sum[ix] += diff;
        st.sum2[ix] += diff * diff;
      }
    }
  });
  std::vector<double> sum(static_cast<std::size_t>(max_n) * np, 0.0);
  std::vector<double> sum2(static_cast<std::size_t>(max_n) * np, 0.0);
  std::vector<double> dn_sum(static_cast<std::size_t>(max_n), 0.0);
  std::uint64_t used = 0, dropped = 0;
  for (auto& s : shards) {
    if (s.sum.empty()) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += s.sum[i];
      sum2[i] += s.sum2[i];
    }
    for (std::size_t i = 0; i < dn_sum.size(); ++i) dn_sum[i] += s.dn_sum[i];
    used += s.used;
    dropped += s.dropped;
  }
  bool pass = used > 0;
  double worst = 0.0;
  std::ostringstream details;
  for (int it = 1; it <= max_n; ++it) {
    for (std::size_t pi = 0; pi < np; ++pi) {
      std::size_t ix = static_cast<std::size_t>(it - 1) * np + pi;
      double mean = sum[ix] / static_cast<double>(used);
      double var = sum2[ix] / static_cast<double>(used) - mean * mean;
      double se = std::sqrt(std::max(var, 1e-12) / static_cast<double>(used));
      double z = mean / se;
      worst = std::max(worst, std::fabs(z));
      if (std::fabs(z) > 3.0) pass = false;
    }
    details << "E[d_" << it << "]=" << dn_sum[static_cast<std::size_t>(it - 1)] / static_cast<double>(used)
            << "; ";
  }
  TestReport rep;
  rep.name = "dn_radon_nikodym";
  rep.statistic = worst;
  rep.threshold = 3.0;
  rep.comparison = "max|z|<=3";
  rep.samples = used;
  rep.pass = pass;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.censor_fraction = static_cast<double>(dropped) / static_cast<double>(n);
  rep.details = details.str();
  return rep;
}

TestReport check_fprob_limit(FprobPair pair, const IncrementDistribution& d, int radius,
                             int depth, std::uint64_t n, std::uint64_t seed) {
  Timer timer;
  std::string name;
  std::vector<EmpPair> shards;
  auto reroot = [](const OrderedTree& t, int node, int steps) {
    for (int i = 0; i < steps; ++i) node = parent_shift(t, node);
    return node;
  };
  switch (pair) {
    case FprobPair::egwt_to_ekt: {
      name = "fprob_egwt_to_ekt";
      DiscreteLaw pi = offspring_law(d);
      SamplerBudget src_budget;
      src_budget.height_cap = depth + radius + 2;
      src_budget.depth_cap = depth + radius + 1;
      SamplerBudget tgt_budget;
      tgt_budget.height_cap = radius + 2;
      tgt_budget.depth_cap = radius + 1;
      shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
        st.a.schema = st.b.schema = "ball_ordered_r" + std::to_string(radius);
        OrderedTree s = sample_egwt(pi, src_budget, rng);
        st.a.add(sampled_ball_key(s, reroot(s, s.root, depth), radius, EncodeMode::ordered));
        OrderedTree t = sample_ekt(pi, tgt_budget, rng);
        st.b.add(sampled_ball_key(t, t.root, radius, EncodeMode::ordered));
      });
      break;
    }
    case FprobPair::tgwt_to_sbgw: {
      name = "fprob_tgwt_to_sbgw";
      DiscreteLaw pi = offspring_law(d);
      SamplerBudget budget;
      shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
        st.a.schema = st.b.schema = "ball_ordered_r" + std::to_string(radius);
        OrderedTree s = sample_tgwt(pi, budget, rng);
        st.a.add(sampled_ball_key(s, reroot(s, s.root, depth), radius, EncodeMode::ordered));
        OrderedTree t = sample_sbgw(pi, budget, rng);
        st.b.add(sampled_ball_key(t, t.root, radius, EncodeMode::ordered));
      });
      break;
    }
    case FprobPair::umekt_to_mekt: {
      name = "fprob_umekt_to_mekt";
      SamplerBudget join_budget;
      join_budget.node_cap = 512;  // size-bias rejection bound
      SamplerBudget bush_budget;
      SamplerBudget tgt_budget;
      BushSampler bush = [d, bush_budget](Rng& r) {
        return sample_mekt_bush(d, bush_budget, r);
      };
      shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
        st.a.schema = st.b.schema = "ball_ordered_marked_r" + std::to_string(radius);
        OrderedTree s =
            unimodularise_joining(bush, join_budget, depth + radius + 2, radius + 2, rng);
        st.a.add(sampled_ball_key(s, reroot(s, s.root, depth), radius, EncodeMode::ordered));
        OrderedTree t = sample_mekt(d, tgt_budget, radius + 2, radius + 2, rng);
        st.b.add(sampled_ball_key(t, t.root, radius, EncodeMode::ordered));
      });
      break;
    }
    case FprobPair::canopy_to_regular: {
      name = "fprob_canopy_to_regular";
      const int deg = 2;
      // geometric level law, truncated
      std::vector<std::pair<long long, double>> lv;
      double acc = 0.0;
      for (long long i = 0; i < 30; ++i) {
        double p = std::pow(0.5, static_cast<double>(i + 1));
        lv.emplace_back(i, p);
        acc += p;
      }
      lv.back().second += 1.0 - acc;
      DiscreteLaw levels = DiscreteLaw::from_pairs(std::move(lv));
      OrderedTree target = t_regular_ball(deg, radius);
      std::string target_key =
          canonical_encode(ball_around(target, target.root, radius).tree,
                           ball_around(target, target.root, radius).root, EncodeMode::unordered);
      shards = run_sharded<EmpPair>(n, seed, [&](std::uint64_t, Rng& rng, EmpPair& st) {
        st.a.schema = st.b.schema = "ball_unordered_r" + std::to_string(radius);
        OrderedTree s = sample_canopy(levels, deg, depth + radius, rng);
        std::string k = sampled_ball_key(s, reroot(s, s.root, depth), radius, EncodeMode::unordered);
        st.a.add(k);
        st.b.add(target_key);
        if (k != target_key) ++st.extra;  // exact structural equality expected
      });
      break;
    }
  }
  TestReport rep = tv_report(name, shards, 0.02, n, seed, timer);
  if (pair == FprobPair::canopy_to_regular) {
    std::uint64_t mismatches = 0;
    for (auto& s : shards) mismatches += s.extra;
    rep.pass = rep.pass && mismatches == 0;
    rep.details += " exact_mismatches=" + std::to_string(mismatches);
  }
  rep.details += " depth=" + std::to_string(depth);
  return rep;
}

TestReport check_rperp_preservation(const IncrementDistribution& d, int radius, std::uint64_t n,
                                    std::uint64_t seed) {
  if (d.mean() != 0.0)
    throw std::invalid_argument("check_rperp_preservation: requires mean(d) = 0");
  Timer timer;
  // reference: i.i.d. product law over the 2r+1 marks
  std::map<std::string, double> ref;
  {
    std::vector<std::vector<long long>> tuples{{}};
    for (int i = 0; i < 2 * radius + 1; ++i) {
      std::vector<std::vector<long long>> next;
      for (const auto& t : tuples)
        for (const auto& [k, p] : d.law.support()) {
          auto u = t;
          u.push_back(k);
          next.push_back(std::move(u));
        }
      tuples = std::move(next);
    }
    for (const auto& t : tuples) {
      double p = 1.0;
      for (long long k : t) p *= d.law.prob(k);
      ref[tuple_key(t)] = p;
    }
  }
  struct State {
    EmpiricalDistribution emp;
    std::uint64_t dropped = 0;
  };
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    st.emp.schema = "marks_r" + std::to_string(radius);
    Window w = sample_window(d, -512, 512, rng);
    for (int e = 0;; ++e) {
      RecordGraph g = RecordGraph::build(w);
      auto k = r_perp(g, 0);
      if (k && k.value() + radius < w.hi && k.value() - radius >= w.lo) {
        std::vector<long long> t;
        for (long long m = -radius; m <= radius; ++m) t.push_back(w.mark(k.value() + m));
        st.emp.add(tuple_key(t));
        return;
      }
      if (e >= 3) {
        ++st.dropped;
        return;
      }
      w = extend_window(w, d, 2 * w.lo, 2 * w.hi, rng);
    }
  });
  EmpiricalDistribution emp;
  std::uint64_t dropped = 0;
  for (auto& s : shards) {
    merge_counts(emp, s.emp);
    dropped += s.dropped;
  }
  TestReport rep;
  rep.name = "rperp_preservation";
  rep.samples = n;
  rep.seed = seed;
  rep.statistic = tv_distance(emp, ref);
  rep.threshold = 0.02;
  rep.comparison = "tv<0.02";
  rep.censor_fraction = static_cast<double>(dropped) / static_cast<double>(n);
  rep.pass = rep.statistic < rep.threshold && rep.censor_fraction < 0.01;
  rep.runtime_ms = timer.ms();
  rep.details = "dropped=" + std::to_string(dropped);
  return rep;
}

TestReport check_constructions_agree(const IncrementDistribution& d, int radius, std::uint64_t n,
                                     std::uint64_t seed) {
  if (d.mean() != 0.0)
    throw std::invalid_argument("check_constructions_agree: requires mean(d) = 0");
  Timer timer;
  struct State {
    EmpiricalDistribution c1, c2, ekt;
    std::uint64_t dropped = 0;
  };
  DiscreteLaw pi = offspring_law(d);
  SamplerBudget ekt_budget;
  ekt_budget.height_cap = radius + 6;
  ekt_budget.depth_cap = radius + 8;
  const long long span = radius + 8;
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    std::string schema = "neg_marks_r" + std::to_string(radius);
    st.c1.schema = st.c2.schema = st.ekt.schema = schema;
    auto neg_key = [&](const Window& w) {
      std::vector<long long> t;
      for (long long m = -1; m >= -radius; --m) t.push_back(w.mark(m));
      return tuple_key(t);
    };
    ConstructedWindow a = construction1_zero_mean(d, span, rng);
    st.c1.add(neg_key(a.window));
    ConstructedWindow b = construction2_zero_mean(d, span, rng);
    st.c2.add(neg_key(b.window));
    OrderedTree t = sample_ekt(pi, ekt_budget, rng);
    BackwardInfo info;
    Window y = backward_phi(t, t.root, radius + 1, &info);
    if (y.lo > -radius) {
      ++st.dropped;
      return;
    }
    st.ekt.add(neg_key(y));
  });
  EmpiricalDistribution c1, c2, ekt;
  std::uint64_t dropped = 0;
  for (auto& s : shards) {
    merge_counts(c1, s.c1);
    merge_counts(c2, s.c2);
    merge_counts(ekt, s.ekt);
    dropped += s.dropped;
  }
  double tv12 = tv_distance(c1, c2);
  double tv1e = tv_distance(c1, ekt);
  double tv2e = tv_distance(c2, ekt);
  TestReport rep;
  rep.name = "constructions_agree";
  rep.statistic = std::max({tv12, tv1e, tv2e});
  rep.threshold = 0.02;
  rep.comparison = "max pairwise tv<0.02";
  rep.samples = n;
  rep.seed = seed;
  rep.censor_fraction = static_cast<double>(dropped) / static_cast<double>(n);
  rep.pass = rep.statistic < rep.threshold && rep.censor_fraction < 0.01;
  rep.runtime_ms = timer.ms();
  rep.details = "tv_c1_c2=" + std::to_string(tv12) + " tv_c1_ekt=" + std::to_string(tv1e) +
                " tv_c2_ekt=" + std::to_string(tv2e) + " dropped=" + std::to_string(dropped);
  return rep;
}

TestReport check_foil_minimality(const IncrementDistribution& d, std::uint64_t windows,
                                 long long span, std::uint64_t seed) {
  if (d.mean() != 0.0)
    throw std::invalid_argument("check_foil_minimality: requires mean(d) = 0");
  Timer timer;
  struct State {
    std::uint64_t checked = 0, violations = 0, skipped = 0;
  };
  auto shards = run_sharded<State>(windows, seed, [&](std::uint64_t, Rng& rng, State& st) {
    ConstructedWindow cw = construction1_zero_mean(d, span, rng);
    RecordGraph g = RecordGraph::build(cw.window);
    FoilPartition part = foils(g);
    for (long long p : cw.path_positions) {
      if (!cw.window.has_vertex(p)) {
        ++st.skipped;
        continue;
      }
      long long f = part.foil_of[static_cast<std::size_t>(p - cw.window.lo)];
      const auto& members = part.members[static_cast<std::size_t>(f)];
      ++st.checked;
      // the certified path vertex must be the minimal element of its foil
      if (members.front() < p) ++st.violations;
    }
  });
  std::uint64_t checked = 0, violations = 0, skipped = 0;
  for (auto& s : shards) {
    checked += s.checked;
    violations += s.violations;
    skipped += s.skipped;
  }
  TestReport rep;
  rep.name = "foil_minimality";
  rep.statistic = static_cast<double>(violations);
  rep.threshold = 0.0;
  rep.comparison = "violations==0";
  rep.samples = checked;
  rep.pass = violations == 0 && checked > 0;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "checked_foils=" + std::to_string(checked) +
                " skipped=" + std::to_string(skipped) + " windows=" + std::to_string(windows);
  return rep;
}

TestReport check_record_representation(ShiftKind shift, const IncrementDistribution& d,
                                       int radius, std::uint64_t n, long long margin,
                                       std::uint64_t seed) {
  Timer timer;
  struct State {
    EmpiricalDistribution src, rebuilt;
    std::uint64_t dropped = 0;
    std::uint64_t unequal = 0;
  };
  const long long span0 = shift == ShiftKind::climbing ? 2048 : 512;
  auto shards = run_sharded<State>(n, seed, [&](std::uint64_t, Rng& rng, State& st) {
    st.src.schema = st.rebuilt.schema = "ball_ordered_r" + std::to_string(radius);
    Window w = sample_window(d, -span0, span0, rng);
    for (int e = 0;; ++e) {
      RecordGraph g = RecordGraph::build(w, shift, margin);
      MarkedComponent comp = forward_psi(g);
      Ball src = ball_around(comp.tree, comp.root, radius);
      if (src.certain) {
        long long span_y = 128 << e;
        Window y = backward_phi(comp.tree, comp.root, span_y);
        if (y.hi > 0 && y.lo < 0) {
          RecordGraph rg = RecordGraph::build(y);
          MarkedComponent rcomp = forward_psi(rg);
          Ball reb = ball_around(rcomp.tree, rcomp.root, radius);
          if (reb.certain) {
            std::string ka = canonical_encode(src.tree, src.root, EncodeMode::ordered);
            std::string kb = canonical_encode(reb.tree, reb.root, EncodeMode::ordered);
            st.src.add(ka);
            st.rebuilt.add(kb);
            if (ka != kb) ++st.unequal;
            return;
          }
        }
      }
      if (e >= 3) {
        ++st.dropped;
        return;
      }
      w = extend_window(w, d, 2 * w.lo, 2 * w.hi, rng);
    }
  });
  EmpiricalDistribution src, rebuilt;
  std::uint64_t dropped = 0, unequal = 0;
  for (auto& s : shards) {
    merge_counts(src, s.src);
    merge_counts(rebuilt, s.rebuilt);
    dropped += s.dropped;
    unequal += s.unequal;
  }
  TestReport rep;
  rep.name = shift == ShiftKind::climbing ? "record_representation_climbing"
                                          : "record_representation_strict";
  rep.samples = n;
  rep.seed = seed;
  rep.statistic = tv_distance(src, rebuilt);
  rep.threshold = 0.03;
  rep.comparison = "tv<0.03";
  rep.censor_fraction = static_cast<double>(dropped) / static_cast<double>(n);
  rep.pass = rep.statistic < rep.threshold && rep.censor_fraction < 0.02;
  rep.runtime_ms = timer.ms();
  rep.details = "per_sample_unequal=" + std::to_string(unequal) +
                " dropped=" + std::to_string(dropped);
  return rep;
}

TestReport check_roundtrip_zero_mean(const IncrementDistribution& d, std::uint64_t windows,
                                     long long span, std::uint64_t seed) {
  Timer timer;
  struct State {
    std::uint64_t mismatches = 0;
    long long core_total = 0;
  };
  auto shards = run_sharded<State>(windows, seed, [&](std::uint64_t, Rng& rng, State& st) {
    Window w = sample_window(d, -span / 2, span / 2, rng);
    RoundtripReport rep = roundtrip_psi_phi(w);
    st.mismatches += rep.mismatches.size();
    st.core_total += rep.core_hi - rep.core_lo;
  });
  std::uint64_t mismatches = 0;
  long long core = 0;
  for (auto& s : shards) {
    mismatches += s.mismatches;
    core += s.core_total;
  }
  TestReport rep;
  rep.name = "roundtrip_zero_mean";
  rep.statistic = static_cast<double>(mismatches);
  rep.threshold = 0.0;
  rep.comparison = "mismatches==0";
  rep.samples = windows;
  rep.pass = mismatches == 0 && core > 0;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "avg_core=" +
                std::to_string(static_cast<double>(core) / static_cast<double>(windows)) +
                " of span " + std::to_string(span);
  return rep;
}

TestReport check_roundtrip_positive_mean(const IncrementDistribution& d, std::uint64_t windows,
                                         long long span, std::uint64_t seed) {
  Timer timer;
  struct State {
    std::uint64_t mismatches = 0;
    long long core_total = 0;
  };
  auto shards = run_sharded<State>(windows, seed, [&](std::uint64_t, Rng& rng, State& st) {
    ConstructedWindow cw = construction_positive_mean(d, span / 2, rng);
    RoundtripReport rep = roundtrip_psi_phi_hat(cw);
    st.mismatches += rep.mismatches.size();
    st.core_total += rep.core_hi - rep.core_lo;
  });
  std::uint64_t mismatches = 0;
  long long core = 0;
  for (auto& s : shards) {
    mismatches += s.mismatches;
    core += s.core_total;
  }
  TestReport rep;
  rep.name = "roundtrip_positive_mean";
  rep.statistic = static_cast<double>(mismatches);
  rep.threshold = 0.0;
  rep.comparison = "mismatches==0";
  rep.samples = windows;
  rep.pass = mismatches == 0 && core > 0;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "avg_core=" +
                std::to_string(static_cast<double>(core) / static_cast<double>(windows));
  return rep;
}

TestReport check_offspring_identity(const IncrementDistribution& d_zero,
                                    const IncrementDistribution& d_pos,
                                    std::uint64_t target_vertices, std::uint64_t seed) {
  Timer timer;
  std::uint64_t checked = 0, violations = 0;
  Rng rng(seed, 0);
  const long long span = 512;
  // type -1 route on zero-mean windows
  std::uint64_t zero_target = target_vertices * 9 / 10;
  while (checked < zero_target) {
    Window w = sample_window(d_zero, -span, span, rng);
    RecordGraph g = RecordGraph::build(w);
    for (long long i = w.lo + 1; i <= w.hi; ++i) {
      auto t = type_of(w, i);
      if (!t) continue;  // type resolves to -1 or not at all on bare windows
      long long formula = static_cast<long long>(w.mark(i - 1)) + 1;
      long long bucket = static_cast<long long>(g.children(i).size());
      ++checked;
      if (formula != bucket || !g.children_complete(i)) ++violations;
      if ((i & 15) == 0) {
        // third route: the explicit child-position scan
        auto kids = children_positions(w, i);
        if (!kids || kids.value() != g.children(i)) ++violations;
      }
    }
  }
  // resolved type >= 0 route on construction-positive windows
  while (checked < target_vertices) {
    ConstructedWindow cw = construction_positive_mean(d_pos, span, rng);
    const Window& w = cw.window;
    RecordGraph g = RecordGraph::build(w);
    for (std::size_t ix = 0; ix < cw.path_positions.size(); ++ix) {
      long long p = cw.path_positions[ix];
      if (p <= w.lo) continue;
      // children of a path vertex live above the previous path vertex; the
      // bucket is complete when that vertex is in-window
      long long prev = ix == 0 ? w.lo - 1 : cw.path_positions[ix - 1];
      if (prev < w.lo) continue;
      long long t = cw.path_types[ix];
      long long formula = offspring_count_given_type(w, p, t);
      long long bucket = static_cast<long long>(g.children(p).size());
      ++checked;
      if (formula != bucket) ++violations;
    }
  }
  TestReport rep;
  rep.name = "offspring_identity";
  rep.statistic = static_cast<double>(violations);
  rep.threshold = 0.0;
  rep.comparison = "violations==0";
  rep.samples = checked;
  rep.pass = violations == 0;
  rep.seed = seed;
  rep.runtime_ms = timer.ms();
  rep.details = "vertices=" + std::to_string(checked);
  return rep;
}

}  // namespace recwalk
