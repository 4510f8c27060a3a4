#pragma once

#include <string>

#include "json.hpp"
#include "recwalk/record.hpp"
#include "recwalk/stats.hpp"
#include "recwalk/transforms.hpp"
#include "recwalk/tree.hpp"

namespace recwalk {

// {"support":[{"k":-1,"p":0.4},...],"kind":"skip_free_left"}
nlohmann::json to_json(const IncrementDistribution& d);
IncrementDistribution increment_distribution_from_json(const nlohmann::json& j);

// {"lo":...,"marks":[...]}
nlohmann::json to_json(const Window& w);
Window window_from_json(const nlohmann::json& j);

// {"nodes":[{"parent":...,"children":[...],"mark":...}],"root":...}
nlohmann::json to_json(const OrderedTree& t);
OrderedTree tree_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TestReport& r);

nlohmann::json to_json(const RoundtripReport& r);

// DOT export: record-graph edges i -> R(i), censored vertices dashed.
std::string dot_of_record_graph(const RecordGraph& g);

// DOT export of an ordered tree with ascending-RLS rank labels.
std::string dot_of_tree(const OrderedTree& t);

// Parse "two_point:0.4,0.6" or "table:-1=0.5,0=0.2,2=0.3[,general]".
IncrementDistribution parse_distribution(const std::string& spec);

}  // namespace recwalk
