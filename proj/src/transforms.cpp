#include "recwalk/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace recwalk {

int MarkedComponent::node_at(long long pos) const {
  auto it = std::lower_bound(position_index.begin(), position_index.end(),
                             std::make_pair(pos, -1));
  if (it == position_index.end() || it->first != pos) return -1;
  return it->second;
}

MarkedComponent forward_psi(const Window& w) { return forward_psi(build_record_graph(w)); }

MarkedComponent forward_psi(const RecordGraph& g, int max_dist) {
  MarkedComponent comp;
  std::map<long long, int> id_of;
  std::vector<long long> order;
  std::vector<int> dist;
  // BFS over resolved edges from position 0
  order.push_back(0);
  dist.push_back(0);
  id_of[0] = 0;
  for (std::size_t q = 0; q < order.size(); ++q) {
    long long v = order[q];
    if (max_dist >= 0 && dist[q] >= max_dist) continue;
    std::vector<long long> nbrs;
    auto s = g.successor(v);
    if (s) nbrs.push_back(s.value());
    for (long long c : g.children(v)) nbrs.push_back(c);
    for (long long u : nbrs)
      if (!id_of.count(u)) {
        id_of[u] = static_cast<int>(order.size());
        order.push_back(u);
        dist.push_back(dist[q] + 1);
      }
  }
  comp.tree.nodes.resize(order.size());
  comp.position = order;
  for (std::size_t i = 0; i < order.size(); ++i) {
    long long v = order[i];
    auto& n = comp.tree.nodes[i];
    bool frontier = max_dist >= 0 && dist[i] >= max_dist;
    auto s = g.successor(v);
    if (s && id_of.count(s.value())) {
      n.parent = id_of[s.value()];
    } else {
      n.parent = -1;
      n.parent_known = false;  // censored, or cut by max_dist
      ++comp.censored_parents;
    }
    if (frontier) {
      // unexpanded: no children listed, like a truncated sampler node
      n.children_complete = false;
      ++comp.censored_children;
      continue;
    }
    for (long long c : g.children(v)) n.children.push_back(id_of[c]);  // ascending by position
    n.children_complete = g.children_complete(v);
    if (!n.children_complete) ++comp.censored_children;
  }
  comp.root = 0;  // position 0 was enqueued first
  comp.tree.root = comp.root;
  comp.position_index.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    comp.position_index.emplace_back(order[i], static_cast<int>(i));
  std::sort(comp.position_index.begin(), comp.position_index.end());
  return comp;
}

MarkedComponent forward_psi_hat(const Window& w) {
  MarkedComponent comp = forward_psi(w);
  comp.has_types = true;
  for (int u = 0; u < comp.tree.size(); ++u) {
    auto t = type_of(w, comp.position[static_cast<std::size_t>(u)]);
    if (t) comp.tree.node(u).mark = t.value();
    // censored types stay unset; past_running_min gives the in-window
    // attachment when callers want to report it
  }
  return comp;
}

MarkedComponent forward_psi_hat(const ConstructedWindow& cw, int max_dist) {
  MarkedComponent comp = forward_psi(build_record_graph(cw.window), max_dist);
  comp.has_types = true;
  std::map<long long, long long> type_at;
  for (std::size_t i = 0; i < cw.path_positions.size(); ++i)
    type_at[cw.path_positions[i]] = cw.path_types.empty() ? 0 : cw.path_types[i];
  for (int u = 0; u < comp.tree.size(); ++u) {
    long long pos = comp.position[static_cast<std::size_t>(u)];
    auto it = type_at.find(pos);
    // every vertex off the certified path has type -1 by construction
    comp.tree.node(u).mark = (it == type_at.end()) ? -1 : it->second;
  }
  // A path vertex has no in-window negative witness, so the graph flags its
  // bucket incomplete; the bookkeeping certifies completeness whenever the
  // previous path vertex (its smallest child) is inside the window.
  for (std::size_t i = 1; i < cw.path_positions.size(); ++i) {
    long long p = cw.path_positions[i];
    if (cw.path_positions[i - 1] < cw.window.lo) continue;
    int u = comp.node_at(p);
    if (u != -1 && !comp.tree.node(u).children_complete) {
      comp.tree.node(u).children_complete = true;
      --comp.censored_children;
    }
  }
  return comp;
}

namespace {

Window backward_walk(const OrderedTree& t, int o, long long span, BackwardInfo* info,
                     bool use_marks) {
  if (!t.valid_node(o)) throw std::out_of_range("backward map: bad root");
  if (span <= 0) throw std::invalid_argument("backward map: span > 0");
  auto emit = [&](int u) -> std::pair<long long, bool> {
    const auto& n = t.node(u);
    long long d1 = static_cast<long long>(n.children.size());
    bool certain = n.children_complete;
    if (!use_marks) return {d1 - 1, certain};
    if (!n.mark) throw std::invalid_argument("backward_phi_hat: missing mark on a line vertex");
    long long m = *n.mark;
    return {m >= 0 ? d1 + m - 1 : d1 - 1, certain};
  };

  // x_n = emit(u_{n+1}); walk forward to u_span and backward to u_{-span+1},
  // stopping at the first censored step or censored offspring count
  std::vector<long long> fwd_marks;  // x_0, x_1, ...
  bool fwd_uncertain = false;
  int cur = o;
  for (long long n = 1; n <= span; ++n) {
    LineStep s = step_a(t, cur);
    if (!s.certain) {
      fwd_uncertain = true;
      break;
    }
    if (!s.exists) break;  // line provably ends
    cur = s.node;
    auto [x, ok] = emit(cur);
    if (!ok) {
      fwd_uncertain = true;
      break;
    }
    fwd_marks.push_back(x);
  }

  std::vector<long long> bwd_marks;  // x_{-1}, x_{-2}, ...
  bool bwd_uncertain = false;
  cur = o;
  auto [x0, ok0] = emit(o);  // x_{-1} uses u_0 = o itself
  if (!ok0) {
    bwd_uncertain = true;
  } else {
    bwd_marks.push_back(x0);
    for (long long n = 2; n <= span; ++n) {
      LineStep s = step_b(t, cur);
      if (!s.certain) {
        bwd_uncertain = true;
        break;
      }
      if (!s.exists) break;
      cur = s.node;
      auto [x, ok] = emit(cur);
      if (!ok) {
        bwd_uncertain = true;
        break;
      }
      bwd_marks.push_back(x);
    }
  }

  long long lo = -static_cast<long long>(bwd_marks.size());
  std::vector<int> marks;
  marks.reserve(bwd_marks.size() + fwd_marks.size());
  for (auto it = bwd_marks.rbegin(); it != bwd_marks.rend(); ++it)
    marks.push_back(static_cast<int>(*it));
  for (long long x : fwd_marks) marks.push_back(static_cast<int>(x));
  if (info) {
    info->backward_uncertain = bwd_uncertain;
    info->forward_uncertain = fwd_uncertain;
    info->emitted_lo = lo;
    info->emitted_hi = lo + static_cast<long long>(marks.size());
  }
  return Window(lo, std::move(marks));
}

}  // namespace

Window backward_phi(const OrderedTree& t, int o, long long span, BackwardInfo* info) {
  return backward_walk(t, o, span, info, false);
}

Window backward_phi_hat(const OrderedTree& t, int o, long long span, BackwardInfo* info) {
  return backward_walk(t, o, span, info, true);
}

namespace {

void init_nonnegative_side(ConstructedWindow& out, const IncrementDistribution& d,
                           long long span, Rng& rng) {
  out.window = Window(-span, std::vector<int>(static_cast<std::size_t>(2 * span), 0));
  out.provenance.assign(static_cast<std::size_t>(2 * span), 0);
  for (long long n = 0; n < span; ++n)
    out.window.marks[static_cast<std::size_t>(n + span)] = static_cast<int>(d.sample(rng));
}

// Nonnegative-side path vertices: the record epochs of 0, certified because
// the construction keeps every past sum <= 0. Their types are the record
// increments S_{R^k} - S_{R^{k-1}}.
void append_positive_path(ConstructedWindow& out, bool with_types) {
  const Window& w = out.window;
  long long s = 0, height = 0;
  for (long long j = 1; j <= w.hi; ++j) {
    s += w.mark(j - 1);
    if (s >= height) {
      out.path_positions.push_back(j);
      if (with_types) out.path_types.push_back(s - height);
      height = s;
    }
  }
}

void finalize_paths(ConstructedWindow& out, bool with_types) {
  if (with_types && out.path_positions.size() > out.path_types.size())
    out.path_positions.resize(out.path_types.size());  // drop an untyped boundary tail
  append_positive_path(out, with_types);
  if (!with_types) {
    std::sort(out.path_positions.begin(), out.path_positions.end());
    return;
  }
  std::vector<std::pair<long long, long long>> z;
  z.reserve(out.path_positions.size());
  for (std::size_t i = 0; i < out.path_positions.size(); ++i)
    z.emplace_back(out.path_positions[i], out.path_types[i]);
  std::sort(z.begin(), z.end());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.path_positions[i] = z[i].first;
    out.path_types[i] = z[i].second;
  }
}

}  // namespace

ConstructedWindow construction1_zero_mean(const IncrementDistribution& d, long long span,
                                          Rng& rng) {
  if (std::fabs(d.mean()) > 1e-12)
    throw std::domain_error("construction1_zero_mean: requires mean(d) = 0");
  ConstructedWindow out;
  init_nonnegative_side(out, d, span, rng);
  DiscreteLaw hat = size_biased(offspring_law(d));

  auto set_mark = [&](long long pos, long long x, signed char prov) {
    out.window.marks[static_cast<std::size_t>(pos + span)] = static_cast<int>(x);
    out.provenance[static_cast<std::size_t>(pos + span)] = prov;
  };

  long long l = -1;
  out.path_positions.push_back(0);
  while (l >= -span) {
    long long z = hat.sample(rng);
    long long y_l = z - 1;  // >= 0 since pi_hat charges only k >= 1
    set_mark(l, y_l, 1);
    long long K = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(y_l + 1)));
    // in-fill down from l-1 until -Y_l - sum = -K; the empty stretch (K = Y_l)
    // ends the block immediately
    long long v = -y_l;
    long long tau = 0;
    while (v != -K) {
      ++tau;
      if (l - tau < -span) {
        out.left_truncated_block = true;
        finalize_paths(out, false);
        return out;
      }
      long long x = d.sample(rng);
      set_mark(l - tau, x, 2);
      v -= x;
    }
    out.blocks.emplace_back(K, tau);
    l = l - tau - 1;
    if (l + 1 >= -span) out.path_positions.push_back(l + 1);  // block tail is a path vertex
  }
  finalize_paths(out, false);
  return out;
}

ConstructedWindow construction2_zero_mean(const IncrementDistribution& d, long long span,
                                          Rng& rng) {
  if (std::fabs(d.mean()) > 1e-12)
    throw std::domain_error("construction2_zero_mean: requires mean(d) = 0");
  ConstructedWindow out;
  init_nonnegative_side(out, d, span, rng);
  DiscreteLaw hat = size_biased(offspring_law(d));

  auto set_mark = [&](long long pos, long long x, signed char prov) {
    out.window.marks[static_cast<std::size_t>(pos + span)] = static_cast<int>(x);
    out.provenance[static_cast<std::size_t>(pos + span)] = prov;
  };

  long long head = -1;
  out.path_positions.push_back(0);
  while (head >= -span) {
    long long z = hat.sample(rng) - 1;  // P[Z = b] = pi_hat(b+1), b >= 0
    long long K = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(z + 1)));
    set_mark(head, z, 1);
    long long acc = -z;  // -Z minus the in-fill sum so far
    long long tau = 0;
    while (acc != -K) {
      ++tau;
      if (head - tau < -span) {
        out.left_truncated_block = true;
        finalize_paths(out, false);
        return out;
      }
      long long x = d.sample(rng);
      set_mark(head - tau, x, 2);
      acc -= x;
    }
    out.blocks.emplace_back(K, tau);
    head = head - tau - 1;
    if (head + 1 >= -span) out.path_positions.push_back(head + 1);
  }
  finalize_paths(out, false);
  return out;
}

ConstructedWindow construction_positive_mean(const IncrementDistribution& d, long long span,
                                             Rng& rng) {
  if (d.mean() <= 0.0)
    throw std::domain_error("construction_positive_mean: requires mean(d) > 0");
  ConstructedWindow out;
  init_nonnegative_side(out, d, span, rng);

  double c = hitting_prob_c(d);
  IncrementDistribution infill = tilted_distribution(d);  // X+1 ~ pi_tilde
  long long xmax = d.law.max_support();
  // joint (K, Z): P[K = m, Z = l] = P[X0 = m+l] c^l, encoded m*(xmax+1)+l
  std::vector<std::pair<long long, double>> pairs;
  double total = 0.0;
  for (long long m = 0; m <= xmax; ++m)
    for (long long l = 0; m + l <= xmax; ++l) {
      double p = d.law.prob(m + l) * std::pow(c, static_cast<double>(l));
      if (p > 0.0) {
        pairs.emplace_back(m * (xmax + 1) + l, p);
        total += p;
      }
    }
  for (auto& [key, p] : pairs) p /= total;
  DiscreteLaw joint = DiscreteLaw::from_pairs(std::move(pairs));

  auto set_mark = [&](long long pos, long long x, signed char prov) {
    out.window.marks[static_cast<std::size_t>(pos + span)] = static_cast<int>(x);
    out.provenance[static_cast<std::size_t>(pos + span)] = prov;
  };

  long long head = -1;
  out.path_positions.push_back(0);
  while (head >= -span) {
    long long code = joint.sample(rng);
    long long K = code / (xmax + 1), Z = code % (xmax + 1);
    // K types the path vertex just above this block (head + 1), which is the
    // last recorded path position
    out.path_types.push_back(K);
    set_mark(head, Z + K, 1);
    // in-fill until -Z - sum = 0; empty when Z = 0
    long long acc = -Z;
    long long tau = 0;
    while (acc != 0) {
      ++tau;
      if (head - tau < -span) {
        out.left_truncated_block = true;
        finalize_paths(out, true);
        return out;
      }
      long long x = infill.sample(rng);
      set_mark(head - tau, x, 2);
      acc -= x;
    }
    out.blocks.emplace_back(K, tau);
    head = head - tau - 1;
    if (head + 1 >= -span) out.path_positions.push_back(head + 1);
  }
  finalize_paths(out, true);
  return out;
}

RoundtripReport roundtrip_psi_phi(const Window& w) {
  MarkedComponent comp = forward_psi(w);
  long long span = std::max(-w.lo, w.hi);
  Window back = backward_phi(comp.tree, comp.root, span);
  RoundtripReport rep;
  rep.core_lo = std::max(w.lo, back.lo);
  rep.core_hi = std::min(w.hi, back.hi);
  for (long long n = rep.core_lo; n < rep.core_hi; ++n)
    if (w.mark(n) != back.mark(n)) rep.mismatches.push_back(n);
  return rep;
}

RoundtripReport roundtrip_psi_phi_hat(const ConstructedWindow& cw) {
  MarkedComponent comp = forward_psi_hat(cw);
  const Window& w = cw.window;
  long long span = std::max(-w.lo, w.hi);
  Window back = backward_phi_hat(comp.tree, comp.root, span);
  RoundtripReport rep;
  rep.core_lo = std::max(w.lo, back.lo);
  rep.core_hi = std::min(w.hi, back.hi);
  for (long long n = rep.core_lo; n < rep.core_hi; ++n)
    if (w.mark(n) != back.mark(n)) rep.mismatches.push_back(n);
  return rep;
}

}  // namespace recwalk
