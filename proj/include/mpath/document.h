#pragma once

#include <initializer_list>
#include <string>

#include <yaml-cpp/yaml.h>

#include "mpath/demand.h"
#include "mpath/error.h"
#include "mpath/graph.h"

namespace mpath {

struct ProblemDocument {
  NetworkGraph graph;
  DemandSet demands;
};

// YAML problem document with exactly the sections nodes, links, demands.
// Errors carry line/column (ParseError, UnknownKey, MissingSection) or come
// from graph/demand validation.
ProblemDocument parse_problem_document(const std::string& text);
std::string serialize_problem_document(const NetworkGraph& graph, const DemandSet& demands);

// Pieces shared with the run-config parser.
YAML::Node load_yaml(const std::string& text);
ProblemDocument problem_from_yaml(const YAML::Node& root);
NetworkGraph graph_from_yaml(const YAML::Node& root);
DemandSet demands_from_yaml(const YAML::Node& node);

[[noreturn]] void throw_at(const YAML::Node& node, ErrorCode code, const std::string& what);
void reject_unknown_keys(const YAML::Node& map, std::initializer_list<const char*> allowed,
                         const std::string& section);
YAML::Node require(const YAML::Node& map, const char* key, const std::string& section);
// Accepts plain numbers and inf/.inf/infinity.
double scalar_double(const YAML::Node& node);
long long scalar_int(const YAML::Node& node);
bool scalar_bool(const YAML::Node& node);
std::string scalar_string(const YAML::Node& node);

// Shortest string that parses back to the same double; "inf" for +inf.
std::string format_double(double v);

}  // namespace mpath
