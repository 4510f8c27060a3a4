#include "recwalk/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace recwalk {

namespace {

struct Overflow {};

void bump_resample(const SamplerBudget& b, SampleStats* stats) {
  if (b.policy == OverflowPolicy::error)
    throw std::runtime_error("sampler: node_cap overflow");
  if (stats) ++stats->resamples;
}

// Expands GW(pi) descendants below `node`, whose distance from the tree root
// is `dist`. Throws Overflow past node_cap.
void grow_gw(OrderedTree& t, int node, int dist, const DiscreteLaw& pi, const SamplerBudget& b,
             Rng& rng, SampleStats* stats) {
  std::vector<std::pair<int, int>> stack{{node, dist}};
  while (!stack.empty()) {
    auto [u, d] = stack.back();
    stack.pop_back();
    if (b.depth_cap > 0 && d >= b.depth_cap) {
      t.node(u).children_complete = false;
      if (stats) ++stats->truncated_nodes;
      continue;
    }
    long long k = pi.sample(rng);
    if (t.nodes.size() + static_cast<std::size_t>(k) > b.node_cap) throw Overflow{};
    for (long long j = 0; j < k; ++j) stack.push_back({t.add_child(u), d + 1});
  }
}

void check_offspring_law(const DiscreteLaw& pi) {
  if (pi.min_support() < 0)
    throw std::invalid_argument("sampler: offspring law needs support >= 0");
}

void check_critical(const DiscreteLaw& pi) {
  check_offspring_law(pi);
  if (std::fabs(pi.mean() - 1.0) > 1e-9)
    throw std::invalid_argument("sampler: offspring law must have mean 1");
}

}  // namespace

OrderedTree sample_gw(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                      SampleStats* stats) {
  check_offspring_law(pi);
  if (pi.mean() > 1.0 + 1e-9 && b.policy != OverflowPolicy::error)
    throw std::invalid_argument("sample_gw: supercritical law allowed only with the error policy");
  for (;;) {
    OrderedTree t;
    t.add_root();
    try {
      grow_gw(t, t.root, 0, pi, b, rng, stats);
      return t;
    } catch (Overflow&) {
      bump_resample(b, stats);
    }
  }
}

OrderedTree sample_tgwt(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                        SampleStats* stats) {
  check_offspring_law(pi);
  double m = pi.mean();
  if (m <= 0.0 || m >= 1.0)
    throw std::invalid_argument("sample_tgwt: requires 0 < m(pi) < 1");
  if (b.depth_cap > 0)
    throw std::invalid_argument("sample_tgwt: depth_cap unsupported, subcritical trees are sampled in full");
  DiscreteLaw hat = size_biased(pi);
  for (;;) {
    try {
      long long n_anc = 0;
      while (rng.bernoulli(m)) ++n_anc;  // Geometric(1-m) ancestors
      OrderedTree t;
      // build the ancestor chain from the progenitor down; the root o is the
      // chain's last vertex
      int cur = t.add_root();  // progenitor = F^{n_anc}(o)
      for (long long k = n_anc; k >= 1; --k) {
        long long z = hat.sample(rng);  // z >= 1 children, one on the line
        std::uint64_t line_rank = rng.next_below(static_cast<std::uint64_t>(z));
        int line_child = -1;
        for (long long j = 0; j < z; ++j) {
          int c = t.add_child(cur);
          if (j == static_cast<long long>(line_rank))
            line_child = c;
          else
            grow_gw(t, c, 0, pi, b, rng, stats);  // distances unbounded here
        }
        cur = line_child;
      }
      grow_gw(t, cur, 0, pi, b, rng, stats);
      t.root = cur;
      return t;
    } catch (Overflow&) {
      bump_resample(b, stats);
    }
  }
}

OrderedTree sample_sbgw(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                        SampleStats* stats) {
  OrderedTree t = sample_tgwt(pi, b, rng, stats);
  int trap = t.root;
  while (t.node(trap).parent != -1) trap = t.node(trap).parent;
  t.root = trap;
  return t;
}

OrderedTree sample_egwt(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                        SampleStats* stats) {
  check_critical(pi);
  DiscreteLaw hat = size_biased(pi);
  for (;;) {
    try {
      OrderedTree t;
      int spine = t.add_root();  // F^{height_cap}(o); its own parent is cut off
      t.node(spine).parent_known = false;
      if (stats) ++stats->truncated_nodes;
      for (int k = b.height_cap; k >= 1; --k) {
        // spine vertex at distance k from the root o
        long long z = hat.sample(rng);
        std::uint64_t line_rank = rng.next_below(static_cast<std::uint64_t>(z));
        int next = -1;
        for (long long j = 0; j < z; ++j) {
          int c = t.add_child(spine);
          if (j == static_cast<long long>(line_rank))
            next = c;
          else
            grow_gw(t, c, k + 1, pi, b, rng, stats);
        }
        spine = next;
      }
      grow_gw(t, spine, 0, pi, b, rng, stats);
      t.root = spine;
      return t;
    } catch (Overflow&) {
      bump_resample(b, stats);
    }
  }
}

OrderedTree sample_ekt(const DiscreteLaw& pi, const SamplerBudget& b, Rng& rng,
                       SampleStats* stats) {
  check_critical(pi);
  if (b.height_cap < 1) throw std::invalid_argument("sample_ekt: height_cap >= 1");
  DiscreteLaw hat = size_biased(pi);
  for (;;) {
    try {
      OrderedTree t;
      int spine = t.add_root();
      t.node(spine).parent_known = false;
      if (stats) ++stats->truncated_nodes;
      int root = -1;
      // special vertices o_{height_cap} .. o_{-height_cap+1} each reproduce
      // with the size-biased law and pass the line to one uniform child
      for (int k = b.height_cap; k >= -b.height_cap + 1; --k) {
        long long z = hat.sample(rng);
        std::uint64_t line_rank = rng.next_below(static_cast<std::uint64_t>(z));
        int next = -1;
        for (long long j = 0; j < z; ++j) {
          int c = t.add_child(spine);
          if (j == static_cast<long long>(line_rank))
            next = c;
          else
            grow_gw(t, c, std::abs(k) + 1, pi, b, rng, stats);
        }
        if (k == 1) root = next;
        spine = next;
      }
      // lowest spine vertex left unexpanded
      t.node(spine).children_complete = false;
      if (stats) ++stats->truncated_nodes;
      if (root == -1) root = spine;
      t.root = root;
      return t;
    } catch (Overflow&) {
      bump_resample(b, stats);
    }
  }
}

namespace {

// Joint (mark, bush offspring) law P[m, k] = P[X0 = m+k] c^k, encoded as
// m * (kmax+1) + k.
DiscreteLaw mekt_joint_law(const IncrementDistribution& d) {
  double c = hitting_prob_c(d);
  long long xmax = d.law.max_support();
  std::vector<std::pair<long long, double>> pairs;
  double total = 0.0;
  for (long long m = 0; m <= xmax; ++m)
    for (long long k = 0; m + k <= xmax; ++k) {
      double p = d.law.prob(m + k) * std::pow(c, static_cast<double>(k));
      if (p > 0.0) {
        pairs.emplace_back(m * (xmax + 1) + k, p);
        total += p;
      }
    }
  for (auto& [key, p] : pairs) p /= total;
  return DiscreteLaw::from_pairs(std::move(pairs));
}

int grow_mekt_bush(OrderedTree& t, const DiscreteLaw& joint, long long kmax,
                   const DiscreteLaw& tilde_off, const SamplerBudget& b, Rng& rng,
                   SampleStats* stats, int attach_to, int dist) {
  int root = attach_to == -1 ? t.add_root() : t.add_child(attach_to);
  long long code = joint.sample(rng);
  long long m = code / (kmax + 1), k = code % (kmax + 1);
  t.node(root).mark = m;
  for (long long j = 0; j < k; ++j) {
    int c = t.add_child(root);
    t.node(c).mark = -1;
    grow_gw(t, c, dist + 1, tilde_off, b, rng, stats);
  }
  // grow_gw leaves fresh marks unset; bush convention is -1 everywhere off
  // the path
  for (int u = 0; u < t.size(); ++u)
    if (!t.node(u).mark) t.node(u).mark = -1;
  return root;
}

}  // namespace

OrderedTree sample_mekt_bush(const IncrementDistribution& d, const SamplerBudget& b, Rng& rng,
                             SampleStats* stats) {
  if (d.mean() <= 0.0) throw std::domain_error("sample_mekt_bush: requires mean(d) > 0");
  auto [bar, tilde] = bar_tilde_pi(d);
  (void)bar;
  DiscreteLaw joint = mekt_joint_law(d);
  long long kmax = d.law.max_support();
  for (;;) {
    try {
      OrderedTree t;
      grow_mekt_bush(t, joint, kmax, tilde, b, rng, stats, -1, 0);
      return t;
    } catch (Overflow&) {
      bump_resample(b, stats);
    }
  }
}

OrderedTree sample_mekt(const IncrementDistribution& d, const SamplerBudget& b, int up_bushes,
                        int down_bushes, Rng& rng, SampleStats* stats) {
  if (d.mean() <= 0.0) throw std::domain_error("sample_mekt: requires mean(d) > 0");
  auto [bar, tilde] = bar_tilde_pi(d);
  (void)bar;
  DiscreteLaw joint = mekt_joint_law(d);
  long long kmax = d.law.max_support();
  for (;;) {
    try {
      OrderedTree t;
      int path = -1;
      int root = -1;
      for (int j = up_bushes; j >= -down_bushes; --j) {
        int dist = std::abs(j);  // path distance from the central bush root
        int bush_root;
        if (path == -1) {
          bush_root = grow_mekt_bush(t, joint, kmax, tilde, b, rng, stats, -1, dist);
          t.node(bush_root).parent_known = false;
          if (stats) ++stats->truncated_nodes;
        } else {
          // ECS order: the path child is the smallest sibling
          bush_root = grow_mekt_bush(t, joint, kmax, tilde, b, rng, stats, path, dist);
          auto& kids = t.node(path).children;
          kids.erase(std::find(kids.begin(), kids.end(), bush_root));
          kids.insert(kids.begin(), bush_root);
        }
        if (j == 0) root = bush_root;
        path = bush_root;
      }
      // the lowest path vertex is missing its own path child
      t.node(path).children_complete = false;
      if (stats) ++stats->truncated_nodes;
      t.root = root;
      return t;
    } catch (Overflow&) {
      bump_resample(b, stats);
    }
  }
}

OrderedTree unimodularise_joining(const BushSampler& bush, const SamplerBudget& b, int up_bushes,
                                  int down_bushes, Rng& rng, SampleStats* stats) {
  // size-biased central bush by rejection: accept with #V / node_cap
  OrderedTree central;
  int pick = -1;
  std::uint64_t attempts = 0;
  for (;;) {
    if (++attempts > 50 * b.node_cap)
      throw std::runtime_error(
          "unimodularise_joining: degenerate acceptance probability (node_cap too large?)");
    OrderedTree cand = bush(rng);
    std::size_t sz = cand.nodes.size();
    if (sz > b.node_cap) {
      if (stats) ++stats->oversize_rejections;
      continue;
    }
    if (!rng.bernoulli(static_cast<double>(sz) / static_cast<double>(b.node_cap))) continue;
    pick = static_cast<int>(rng.next_below(sz));
    central = std::move(cand);
    break;
  }

  // assemble the joining: copy bushes into one arena, path children smallest
  OrderedTree t;
  auto copy_bush = [&t](const OrderedTree& src, int attach_to) {
    int base = t.size();
    for (const auto& n : src.nodes) {
      t.nodes.push_back(n);
      auto& m = t.nodes.back();
      if (m.parent != -1) m.parent = m.parent + base;
      for (auto& c : m.children) c += base;
    }
    int bush_root = src.root + base;
    if (attach_to != -1) {
      t.node(bush_root).parent = attach_to;
      auto& kids = t.node(attach_to).children;
      kids.insert(kids.begin(), bush_root);
    }
    return bush_root;
  };

  int path = -1;
  int central_root = -1, central_base = -1;
  for (int j = up_bushes; j >= -down_bushes; --j) {
    int bush_root;
    if (j == 0) {
      central_base = t.size();
      bush_root = copy_bush(central, path);
      central_root = bush_root;
    } else {
      OrderedTree fresh = bush(rng);
      bush_root = copy_bush(fresh, path);
    }
    if (path == -1) {
      t.node(bush_root).parent_known = false;
      if (stats) ++stats->truncated_nodes;
    }
    path = bush_root;
  }
  t.node(path).children_complete = false;
  if (stats) ++stats->truncated_nodes;
  (void)central_root;
  t.root = central_base + pick;
  return t;
}

namespace {

void grow_canopy(OrderedTree& t, int node, long long level, int remaining, int d) {
  if (level == 0) return;  // level-0 vertices are leaves by definition
  if (remaining == 0) {
    t.node(node).children_complete = false;
    return;
  }
  for (int j = 0; j < d; ++j) grow_canopy(t, t.add_child(node), level - 1, remaining - 1, d);
}

}  // namespace

OrderedTree sample_canopy(const DiscreteLaw& levels, int d, int radius, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_canopy: d >= 1");
  if (levels.min_support() < 0)
    throw std::invalid_argument("sample_canopy: level law needs support >= 0");
  long long level = levels.sample(rng);
  OrderedTree t;
  // build the ancestor path top-down, then hang subtrees within the radius
  int top = t.add_root();
  t.node(top).parent_known = false;
  int cur = top;
  for (int s = radius; s >= 1; --s) {
    // cur is the ancestor at distance s from the root, level `level + s`
    int path_child = t.add_child(cur);
    if (radius - s - 1 >= 0) {
      for (int j = 1; j < d; ++j) {
        int c = t.add_child(cur);
        grow_canopy(t, c, level + s - 1, radius - s - 1, d);
      }
    } else if (d > 1) {
      t.node(cur).children_complete = false;  // off-path children out of range
    }
    cur = path_child;
  }
  t.root = cur;
  grow_canopy(t, cur, level, radius, d);
  return t;
}

OrderedTree t_regular_ball(int d, int radius) {
  if (d < 1) throw std::invalid_argument("t_regular_ball: d >= 1");
  OrderedTree t;
  int top = t.add_root();
  t.node(top).parent_known = false;
  // regular tree = canopy structure with no leaf level
  std::function<void(int, int)> grow = [&](int node, int remaining) {
    if (remaining == 0) {
      t.node(node).children_complete = false;
      return;
    }
    for (int j = 0; j < d; ++j) grow(t.add_child(node), remaining - 1);
  };
  int cur = top;
  for (int s = radius; s >= 1; --s) {
    int path_child = t.add_child(cur);
    if (radius - s - 1 >= 0) {
      for (int j = 1; j < d; ++j) grow(t.add_child(cur), radius - s - 1);
    } else if (d > 1) {
      t.node(cur).children_complete = false;
    }
    cur = path_child;
  }
  t.root = cur;
  grow(cur, radius);
  return t;
}

}  // namespace recwalk
