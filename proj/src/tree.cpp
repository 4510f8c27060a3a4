#include "recwalk/tree.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace recwalk {

int OrderedTree::add_root() {
  if (root != -1) throw std::logic_error("OrderedTree: root already set");
  nodes.push_back({});
  root = size() - 1;
  return root;
}

int OrderedTree::add_child(int parent, int rank) {
  if (!valid_node(parent)) throw std::out_of_range("OrderedTree: bad parent id");
  nodes.push_back({});
  int id = size() - 1;
  nodes[static_cast<std::size_t>(id)].parent = parent;
  auto& kids = nodes[static_cast<std::size_t>(parent)].children;
  if (rank < 0 || rank >= static_cast<int>(kids.size()))
    kids.push_back(id);
  else
    kids.insert(kids.begin() + rank, id);
  return id;
}

void OrderedTree::validate() const {
  if (root == -1 && !nodes.empty()) throw std::logic_error("OrderedTree: no root");
  std::vector<int> seen(nodes.size(), 0);
  for (int u = 0; u < size(); ++u) {
    const Node& n = node(u);
    for (int c : n.children) {
      if (!valid_node(c) || node(c).parent != u)
        throw std::logic_error("OrderedTree: child list inconsistent with parent link");
      if (seen[static_cast<std::size_t>(c)]++)
        throw std::logic_error("OrderedTree: node in two child lists");
    }
    if (n.mark && *n.mark < -1) throw std::logic_error("OrderedTree: mark below -1");
  }
  // acyclicity + single component: every node reaches the unique top
  int top = -1;
  for (int u = 0; u < size(); ++u) {
    int cur = u;
    int steps = 0;
    while (node(cur).parent != -1) {
      cur = node(cur).parent;
      if (++steps > size()) throw std::logic_error("OrderedTree: parent cycle");
    }
    if (top == -1) top = cur;
    if (cur != top) throw std::logic_error("OrderedTree: more than one component");
  }
}

int parent_shift(const OrderedTree& t, int u) {
  if (!t.valid_node(u)) throw std::out_of_range("parent_shift: bad node");
  int p = t.node(u).parent;
  return p == -1 ? u : p;
}

namespace {

// (depths below the meet); also yields the branch children at the meet.
struct MeetInfo {
  int meet;
  int depth_u, depth_v;     // steps from u (resp. v) up to the meet
  int branch_u, branch_v;   // children of the meet on each side, -1 if at meet
};

MeetInfo find_meet(const OrderedTree& t, int u, int v) {
  std::map<int, int> du;  // ancestor -> depth from u
  int cur = u, d = 0;
  while (true) {
    du[cur] = d;
    int p = t.node(cur).parent;
    if (p == -1) break;
    cur = p;
    ++d;
  }
  cur = v;
  d = 0;
  while (true) {
    auto it = du.find(cur);
    if (it != du.end()) {
      MeetInfo m;
      m.meet = cur;
      m.depth_u = it->second;
      m.depth_v = d;
      auto up_from = [&](int start, int steps) {
        int x = start;
        for (int i = 0; i + 1 < steps; ++i) x = t.node(x).parent;
        return steps == 0 ? -1 : x;
      };
      m.branch_u = up_from(u, m.depth_u);
      m.branch_v = up_from(v, m.depth_v);
      return m;
    }
    int p = t.node(cur).parent;
    if (p == -1) throw std::invalid_argument("rls_compare: disconnected pair");
    cur = p;
    ++d;
  }
}

int sibling_rank(const OrderedTree& t, int u) {
  int p = t.node(u).parent;
  const auto& kids = t.node(p).children;
  auto it = std::find(kids.begin(), kids.end(), u);
  return static_cast<int>(it - kids.begin());
}

}  // namespace

RlsOrder rls_compare(const OrderedTree& t, int u, int v) {
  if (u == v) return RlsOrder::equal;
  MeetInfo m = find_meet(t, u, v);
  if (m.meet == v) return RlsOrder::precedes;  // v is an ancestor: u < v
  if (m.meet == u) return RlsOrder::succeeds;
  int ru = sibling_rank(t, m.branch_u);
  int rv = sibling_rank(t, m.branch_v);
  return ru < rv ? RlsOrder::precedes : RlsOrder::succeeds;
}

std::optional<int> succ_b(const OrderedTree& t, int u) {
  LineStep s = step_b(t, u);
  if (!s.certain) throw std::logic_error("succ_b: censored step on a flagged tree");
  if (!s.exists) return std::nullopt;
  return s.node;
}

std::optional<int> pred_a(const OrderedTree& t, int u) {
  LineStep s = step_a(t, u);
  if (!s.certain) throw std::logic_error("pred_a: censored step on a flagged tree");
  if (!s.exists) return std::nullopt;
  return s.node;
}

LineStep step_b(const OrderedTree& t, int u) {
  const auto& n = t.node(u);
  if (!n.children.empty()) return {n.children.back(), true, true};  // eldest child
  if (!n.children_complete) return {-1, false, false};  // unseen (smaller) children possible
  // walk up to the first ancestor level with a previous sibling
  int cur = u;
  while (true) {
    const auto& cn = t.node(cur);
    if (cn.parent == -1) {
      if (!cn.parent_known) return {-1, false, false};
      return {-1, false, true};  // u is the minimal vertex
    }
    int r = sibling_rank(t, cur);
    if (r > 0) return {t.node(cn.parent).children[static_cast<std::size_t>(r - 1)], true, true};
    // cur is the smallest listed child; a missing child would precede it
    if (!t.node(cn.parent).children_complete) return {-1, false, false};
    cur = cn.parent;
  }
}

LineStep step_a(const OrderedTree& t, int u) {
  const auto& n = t.node(u);
  if (n.parent == -1) {
    if (!n.parent_known) return {-1, false, false};
    return {-1, false, true};  // maximal vertex
  }
  const auto& kids = t.node(n.parent).children;
  int r = sibling_rank(t, u);
  if (r + 1 == static_cast<int>(kids.size())) return {n.parent, true, true};
  // minimal descendant of the next sibling: descend smallest children
  int cur = kids[static_cast<std::size_t>(r + 1)];
  while (true) {
    const auto& cn = t.node(cur);
    if (!cn.children_complete) return {-1, false, false};  // unseen smaller child possible
    if (cn.children.empty()) return {cur, true, true};
    cur = cn.children.front();
  }
}

SuccessionLine succession_line(const OrderedTree& t, int o, std::size_t max_steps) {
  SuccessionLine line;
  line.center = o;
  int cur = o;
  for (std::size_t k = 0; k < max_steps; ++k) {
    LineStep s = step_b(t, cur);
    if (!s.certain) {
      line.backward_uncertain = true;
      break;
    }
    if (!s.exists) {
      line.backward_ended = true;
      break;
    }
    line.backward.push_back(s.node);
    cur = s.node;
  }
  if (!line.backward_ended && !line.backward_uncertain && line.backward.size() == max_steps)
    line.steps_exhausted = true;
  cur = o;
  for (std::size_t k = 0; k < max_steps; ++k) {
    LineStep s = step_a(t, cur);
    if (!s.certain) {
      line.forward_uncertain = true;
      break;
    }
    if (!s.exists) {
      line.forward_ended = true;
      break;
    }
    line.forward.push_back(s.node);
    cur = s.node;
  }
  if (!line.forward_ended && !line.forward_uncertain && line.forward.size() == max_steps)
    line.steps_exhausted = true;
  return line;
}

Ball ball_around(const OrderedTree& t, int center, int radius) {
  if (!t.valid_node(center)) throw std::out_of_range("ball_around: bad node");
  if (radius < 0) throw std::invalid_argument("ball_around: radius >= 0");
  std::map<int, int> dist;  // old id -> distance
  std::vector<int> order;   // BFS order
  dist[center] = 0;
  order.push_back(center);
  for (std::size_t q = 0; q < order.size(); ++q) {
    int u = order[q];
    int d = dist[u];
    if (d == radius) continue;
    const auto& n = t.node(u);
    std::vector<int> nbrs;
    if (n.parent != -1) nbrs.push_back(n.parent);
    for (int c : n.children) nbrs.push_back(c);
    for (int v : nbrs)
      if (!dist.count(v)) {
        dist[v] = d + 1;
        order.push_back(v);
      }
  }
  Ball ball;
  std::map<int, int> remap;
  for (int u : order) {
    ball.tree.nodes.push_back({});
    remap[u] = static_cast<int>(ball.tree.nodes.size()) - 1;
  }
  for (int u : order) {
    const auto& n = t.node(u);
    auto& m = ball.tree.node(remap[u]);
    m.mark = n.mark;
    if (n.parent != -1 && remap.count(n.parent)) m.parent = remap[n.parent];
    for (int c : n.children)
      if (remap.count(c)) m.children.push_back(remap[c]);
    if (dist[u] < radius && (!n.children_complete || !n.parent_known)) ball.certain = false;
  }
  // the ball of a tree is a tree; its top is the unique node without an
  // in-ball parent
  ball.root = remap[center];
  int top = -1;
  for (int u = 0; u < ball.tree.size(); ++u)
    if (ball.tree.node(u).parent == -1) top = u;
  ball.tree.root = top;
  return ball;
}

namespace {

std::string encode_node(const OrderedTree& t, int u, int starred, EncodeMode mode) {
  std::string s = "(";
  const auto& n = t.node(u);
  if (n.mark) s += "m" + std::to_string(*n.mark);
  if (u == starred) s += "*";
  std::vector<std::string> kids;
  kids.reserve(n.children.size());
  for (int c : n.children) kids.push_back(encode_node(t, c, starred, mode));
  if (mode == EncodeMode::unordered) std::sort(kids.begin(), kids.end());
  for (const auto& k : kids) s += k;
  s += ")";
  return s;
}

}  // namespace

std::string canonical_encode(const OrderedTree& t, int root, EncodeMode mode,
                             std::optional<int> radius) {
  if (!t.valid_node(root)) throw std::out_of_range("canonical_encode: bad root");
  if (radius) {
    Ball b = ball_around(t, root, *radius);
    return encode_node(b.tree, b.tree.root, b.root, mode);
  }
  // whole-arena encode: walk to the top so the key covers the full tree
  int top = root;
  while (t.node(top).parent != -1) top = t.node(top).parent;
  return encode_node(t, top, root, mode);
}

std::vector<int> rls_ascending(const OrderedTree& t) {
  // post-order with children in ascending sibling order
  std::vector<int> out;
  out.reserve(t.nodes.size());
  if (t.root == -1) return out;
  std::vector<std::pair<int, std::size_t>> stack{{t.root, 0}};
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& kids = t.node(u).children;
    if (next < kids.size()) {
      int c = kids[next++];
      stack.push_back({c, 0});
    } else {
      out.push_back(u);
      stack.pop_back();
    }
  }
  return out;
}

bool lukasiewicz_sum_check(const OrderedTree& t) {
  auto order = rls_ascending(t);
  long long sum = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    sum += static_cast<long long>(t.node(order[k]).children.size()) - 1;
    if (k + 1 < order.size() && sum >= 0) return false;
  }
  return sum == -1;
}

long long level_offset(const OrderedTree& t, int v, int w) {
  MeetInfo m = find_meet(t, v, w);
  // l(v,w) = depth(w) - depth(v), depths measured below the common ancestor
  return static_cast<long long>(m.depth_v) - static_cast<long long>(m.depth_u);
}

}  // namespace recwalk
