#include "recwalk/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace recwalk {

using nlohmann::json;

json to_json(const IncrementDistribution& d) {
  json support = json::array();
  for (const auto& [k, p] : d.law.support()) support.push_back({{"k", k}, {"p", p}});
  return {{"support", support},
          {"kind", d.kind == IncrementDistribution::Kind::skip_free_left ? "skip_free_left"
                                                                         : "general_integer"}};
}

IncrementDistribution increment_distribution_from_json(const json& j) {
  std::vector<std::pair<long long, double>> pairs;
  for (const auto& e : j.at("support"))
    pairs.emplace_back(e.at("k").get<long long>(), e.at("p").get<double>());
  auto kind = IncrementDistribution::Kind::skip_free_left;
  if (j.contains("kind") && j["kind"] == "general_integer")
    kind = IncrementDistribution::Kind::general_integer;
  return IncrementDistribution::make(DiscreteLaw::from_pairs(std::move(pairs)), kind);
}

json to_json(const Window& w) { return {{"lo", w.lo}, {"marks", w.marks}}; }

Window window_from_json(const json& j) {
  return Window(j.at("lo").get<long long>(), j.at("marks").get<std::vector<int>>());
}

json to_json(const OrderedTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    json e = {{"parent", n.parent}, {"children", n.children}};
    if (n.mark) e["mark"] = *n.mark;
    if (!n.children_complete) e["children_complete"] = false;
    if (!n.parent_known) e["parent_known"] = false;
    nodes.push_back(e);
  }
  return {{"nodes", nodes}, {"root", t.root}};
}

OrderedTree tree_from_json(const json& j) {
  OrderedTree t;
  for (const auto& e : j.at("nodes")) {
    OrderedTree::Node n;
    n.parent = e.at("parent").get<int>();
    n.children = e.at("children").get<std::vector<int>>();
    if (e.contains("mark")) n.mark = e["mark"].get<long long>();
    if (e.contains("children_complete")) n.children_complete = e["children_complete"].get<bool>();
    if (e.contains("parent_known")) n.parent_known = e["parent_known"].get<bool>();
    t.nodes.push_back(std::move(n));
  }
  t.root = j.at("root").get<int>();
  t.validate();
  return t;
}

json to_json(const TestReport& r) {
  return {{"name", r.name},
          {"statistic", r.statistic},
          {"threshold", r.threshold},
          {"comparison", r.comparison},
          {"samples", r.samples},
          {"pass", r.pass},
          {"seed", r.seed},
          {"runtime_ms", r.runtime_ms},
          {"censor_fraction", r.censor_fraction},
          {"details", r.details}};
}

json to_json(const RoundtripReport& r) {
  return {{"core_lo", r.core_lo}, {"core_hi", r.core_hi}, {"mismatches", r.mismatches}};
}

std::string dot_of_record_graph(const RecordGraph& g) {
  const Window& w = g.window();
  std::ostringstream os;
  os << "digraph record {\n  rankdir=LR;\n";
  for (long long v = w.lo; v <= w.hi; ++v) {
    os << "  v" << (v - w.lo) << " [label=\"" << v << "\"";
    if (!g.successor(v)) os << ", style=dashed";
    os << "];\n";
  }
  for (long long v = w.lo; v <= w.hi; ++v) {
    auto s = g.successor(v);
    if (s) os << "  v" << (v - w.lo) << " -> v" << (s.value() - w.lo) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string dot_of_tree(const OrderedTree& t) {
  auto order = rls_ascending(t);
  std::vector<int> rank(t.nodes.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  std::ostringstream os;
  os << "digraph tree {\n";
  for (int u = 0; u < t.size(); ++u) {
    os << "  n" << u << " [label=\"rls " << rank[static_cast<std::size_t>(u)];
    if (t.node(u).mark) os << " / m " << *t.node(u).mark;
    os << "\"";
    if (u == t.root) os << ", shape=doublecircle";
    if (!t.node(u).children_complete || !t.node(u).parent_known) os << ", style=dashed";
    os << "];\n";
  }
  for (int u = 0; u < t.size(); ++u)
    if (t.node(u).parent != -1) os << "  n" << u << " -> n" << t.node(u).parent << ";\n";
  os << "}\n";
  return os.str();
}

IncrementDistribution parse_distribution(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("distribution spec: expected '<kind>:<params>'");
  std::string head = spec.substr(0, colon);
  std::string body = spec.substr(colon + 1);
  if (head == "two_point") {
    auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("two_point spec: expected 'q,p'");
    double q = std::stod(body.substr(0, comma));
    double p = std::stod(body.substr(comma + 1));
    return IncrementDistribution::two_point_law(q, p);
  }
  if (head == "table") {
    std::vector<std::pair<long long, double>> pairs;
    auto kind = IncrementDistribution::Kind::skip_free_left;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item == "general") {
        kind = IncrementDistribution::Kind::general_integer;
        continue;
      }
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("table spec: expected 'k=p' entries");
      pairs.emplace_back(std::stoll(item.substr(0, eq)), std::stod(item.substr(eq + 1)));
    }
    return IncrementDistribution::make(DiscreteLaw::from_pairs(std::move(pairs)), kind);
  }
  throw std::invalid_argument("distribution spec: unknown kind '" + head + "'");
}

}  // namespace recwalk
