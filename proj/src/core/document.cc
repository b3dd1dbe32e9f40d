#include "mpath/document.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace mpath {

void throw_at(const YAML::Node& node, ErrorCode code, const std::string& what) {
  YAML::Mark m = node.Mark();
  if (m.is_null()) throw ParseError(code, what, 0, 0);
  throw ParseError(code, what, m.line + 1, m.column + 1);
}

YAML::Node load_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(ErrorCode::kParseError, e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

void reject_unknown_keys(const YAML::Node& map, std::initializer_list<const char*> allowed,
                         const std::string& section) {
  if (!map.IsMap()) throw_at(map, ErrorCode::kParseError, fmt::format("{} must be a mapping", section));
  for (const auto& kv : map) {
    std::string key = kv.first.as<std::string>();
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* a) { return key == a; });
    if (!ok) {
      throw_at(kv.first, ErrorCode::kUnknownKey,
               fmt::format("unknown key '{}' in {}", key, section));
    }
  }
}

YAML::Node require(const YAML::Node& map, const char* key, const std::string& section) {
  YAML::Node v = map[key];
  if (!v) throw_at(map, ErrorCode::kMissingSection, fmt::format("{} is missing '{}'", section, key));
  return v;
}

std::string scalar_string(const YAML::Node& node) {
  if (!node.IsScalar()) throw_at(node, ErrorCode::kParseError, "expected a scalar");
  return node.Scalar();
}

double scalar_double(const YAML::Node& node) {
  std::string s = scalar_string(node);
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == ".inf" || lower == "+inf" || lower == "+.inf" ||
      lower == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || std::isnan(v)) {
    throw_at(node, ErrorCode::kParseError, fmt::format("'{}' is not a number", s));
  }
  return v;
}

long long scalar_int(const YAML::Node& node) {
  std::string s = scalar_string(node);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw_at(node, ErrorCode::kParseError, fmt::format("'{}' is not an integer", s));
  }
  return v;
}

bool scalar_bool(const YAML::Node& node) {
  std::string s = scalar_string(node);
  if (s == "true" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "no" || s == "off") return false;
  throw_at(node, ErrorCode::kParseError, fmt::format("'{}' is not a boolean", s));
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

NetworkGraph graph_from_yaml(const YAML::Node& root) {
  YAML::Node nodes = require(root, "nodes", "document");
  YAML::Node links = require(root, "links", "document");
  if (!nodes.IsSequence()) throw_at(nodes, ErrorCode::kParseError, "nodes must be a list");
  if (!links.IsSequence()) throw_at(links, ErrorCode::kParseError, "links must be a list");
  std::vector<NodeId> ids;
  for (const auto& n : nodes) ids.push_back(static_cast<NodeId>(scalar_int(n)));
  std::vector<Link> out;
  for (const auto& l : links) {
    reject_unknown_keys(l, {"src", "dst", "capacity_bps", "latency_s"}, "link");
    Link link;
    link.src = static_cast<NodeId>(scalar_int(require(l, "src", "link")));
    link.dst = static_cast<NodeId>(scalar_int(require(l, "dst", "link")));
    link.capacity_bps = scalar_double(require(l, "capacity_bps", "link"));
    link.latency_s = l["latency_s"] ? scalar_double(l["latency_s"]) : 0.0;
    out.push_back(link);
  }
  return build_graph(std::move(ids), std::move(out));
}

DemandSet demands_from_yaml(const YAML::Node& node) {
  if (!node.IsSequence()) throw_at(node, ErrorCode::kParseError, "demands must be a list");
  DemandSet out;
  for (const auto& d : node) {
    reject_unknown_keys(d, {"id", "src", "dst", "peak"}, "demand");
    Demand dem;
    dem.id = static_cast<int>(scalar_int(require(d, "id", "demand")));
    dem.source = static_cast<NodeId>(scalar_int(require(d, "src", "demand")));
    dem.destination = static_cast<NodeId>(scalar_int(require(d, "dst", "demand")));
    YAML::Node peak = d["peak"];
    try {
      if (!peak) {
        dem.peak = PeakSchedule::constant(kElastic);
      } else if (peak.IsScalar()) {
        dem.peak = PeakSchedule::constant(scalar_double(peak));
      } else if (peak.IsSequence()) {
        std::vector<PeakStep> steps;
        for (const auto& step : peak) {
          if (!step.IsSequence() || step.size() != 2) {
            throw_at(step, ErrorCode::kParseError, "peak steps are [t_start, peak_bps] pairs");
          }
          steps.push_back({scalar_double(step[0]), scalar_double(step[1])});
        }
        dem.peak = PeakSchedule(std::move(steps));
      } else {
        throw_at(peak, ErrorCode::kParseError, "peak must be a number or a list of pairs");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw_at(peak, e.code(), e.what());
    }
    out.push_back(dem);
  }
  return out;
}

ProblemDocument problem_from_yaml(const YAML::Node& root) {
  ProblemDocument doc;
  doc.graph = graph_from_yaml(root);
  doc.demands = demands_from_yaml(require(root, "demands", "document"));
  validate_demands(doc.graph, doc.demands);
  return doc;
}

ProblemDocument parse_problem_document(const std::string& text) {
  YAML::Node root = load_yaml(text);
  if (!root.IsMap()) throw ParseError(ErrorCode::kParseError, "document must be a mapping", 1, 1);
  reject_unknown_keys(root, {"nodes", "links", "demands"}, "document");
  return problem_from_yaml(root);
}

std::string serialize_problem_document(const NetworkGraph& graph, const DemandSet& demands) {
  std::string out = "nodes: [";
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    out += fmt::format("{}{}", i ? ", " : "", graph.nodes()[i]);
  }
  out += "]\nlinks:\n";
  for (const Link& l : graph.links()) {
    out += fmt::format("  - {{src: {}, dst: {}, capacity_bps: {}, latency_s: {}}}\n", l.src, l.dst,
                       format_double(l.capacity_bps), format_double(l.latency_s));
  }
  out += demands.empty() ? "demands: []\n" : "demands:\n";
  for (const Demand& d : demands) {
    out += fmt::format("  - {{id: {}, src: {}, dst: {}, peak: [", d.id, d.source, d.destination);
    const auto& steps = d.peak.steps();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      out += fmt::format("{}[{}, {}]", i ? ", " : "", format_double(steps[i].t_start_s),
                         format_double(steps[i].peak_bps));
    }
    out += "]}\n";
  }
  return out;
}

}  // namespace mpath
