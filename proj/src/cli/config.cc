#include <cmath>

#include <fmt/format.h>

#include "mpath/cli.h"

namespace mpath {
namespace {

// Capacity of every non-scaled link in the triangle/square presets.
constexpr double kToyCapacityBps = 10e6;

[[noreturn]] void invalid(const YAML::Node& node, const std::string& what) {
  throw_at(node, ErrorCode::kInvalidConfig, what);
}

double positive(const YAML::Node& node) {
  double v = scalar_double(node);
  if (!(v > 0) || !std::isfinite(v)) invalid(node, "expected a positive number");
  return v;
}

int count(const YAML::Node& node, int lo) {
  long long v = scalar_int(node);
  if (v < lo || v > 1000000) invalid(node, fmt::format("expected an integer >= {}", lo));
  return static_cast<int>(v);
}

std::uint64_t seed_value(const YAML::Node& node) {
  long long v = scalar_int(node);
  if (v < 0) invalid(node, "seed must be >= 0");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> number_list(const YAML::Node& node) {
  if (!node.IsSequence()) throw_at(node, ErrorCode::kParseError, "expected a list");
  std::vector<double> out;
  for (const auto& v : node) out.push_back(scalar_double(v));
  return out;
}

void apply_override(YAML::Node& root, const std::string& item) {
  std::size_t eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("override '{}' is not key=value", item));
  }
  std::string path = item.substr(0, eq);
  std::string text = item.substr(eq + 1);
  std::vector<std::string> keys;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = path.find('.', start);
    keys.push_back(path.substr(start, dot - start));
    if (keys.back().empty()) {
      throw Error(ErrorCode::kInvalidConfig, fmt::format("bad override key '{}'", path));
    }
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  YAML::Node value;
  try {
    value = YAML::Load(text);
  } catch (const YAML::Exception&) {
    value = YAML::Node(text);
  }
  // yaml-cpp nodes are handles, so descending by reassignment is not an
  // option; rebuild the chain bottom-up instead.
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node next = chain.back()[keys[i]];
    if (!next || !next.IsMap()) next = YAML::Node(YAML::NodeType::Map);
    chain.push_back(next);
  }
  chain.back()[keys.back()] = value;
  for (std::size_t i = chain.size() - 1; i > 0; --i) chain[i - 1][keys[i - 1]] = chain[i];
}

void read_paths(const YAML::Node& n, PathOptions& p) {
  reject_unknown_keys(n, {"max_paths", "max_hops"}, "paths");
  if (n["max_paths"]) p.max_paths = count(n["max_paths"], 1);
  if (n["max_hops"]) p.max_hops = count(n["max_hops"], 0);
}

void read_joint(const YAML::Node& n, JointOptions& j) {
  reject_unknown_keys(n, {"alpha", "weights", "utility_unit_bps", "mode"}, "joint");
  if (n["alpha"]) {
    j.utility.alpha = scalar_double(n["alpha"]);
    if (!(j.utility.alpha >= 0) || !std::isfinite(j.utility.alpha)) {
      invalid(n["alpha"], "alpha must be >= 0");
    }
  }
  if (n["weights"]) {
    j.utility.weights = number_list(n["weights"]);
    for (double w : j.utility.weights) {
      if (!(w > 0)) invalid(n["weights"], "weights must be positive");
    }
  }
  if (n["utility_unit_bps"]) j.utility_unit_bps = positive(n["utility_unit_bps"]);
  if (n["mode"]) {
    std::string m = scalar_string(n["mode"]);
    if (m == "coordinated") {
      j.uncoordinated = false;
    } else if (m == "uncoordinated") {
      j.coordinated = false;
    } else if (m != "both") {
      invalid(n["mode"], "mode must be coordinated, uncoordinated or both");
    }
  }
}

void read_sweep(const YAML::Node& n, SweepSettings& s) {
  reject_unknown_keys(n, {"topology", "base_capacity_bps", "utility_unit_bps", "alpha", "ratios"},
                      "sweep");
  if (n["topology"]) {
    s.topology = scalar_string(n["topology"]);
    if (s.topology != "triangle" && s.topology != "square") {
      throw_at(n["topology"], ErrorCode::kUnknownTopology, "sweep topology must be triangle or square");
    }
  }
  if (n["base_capacity_bps"]) s.base_capacity_bps = positive(n["base_capacity_bps"]);
  if (n["utility_unit_bps"]) s.utility_unit_bps = positive(n["utility_unit_bps"]);
  if (n["alpha"]) s.alpha = positive(n["alpha"]);
  if (n["ratios"]) {
    s.ratios = number_list(n["ratios"]);
    for (double r : s.ratios) {
      if (!(r >= 1 && r <= 15)) invalid(n["ratios"], "ratios must lie in [1, 15]");
    }
  }
}

void read_sim(const YAML::Node& n, SimConfig& c) {
  reject_unknown_keys(n, {"delta_plus_bps", "delta_minus", "horizon_s", "sample_s",
                          "architecture", "controller", "decrement", "feedback_delay", "seed",
                          "trump_w", "trump_beta", "trump_gamma", "trump_tau_s"},
                      "sim");
  if (n["delta_plus_bps"]) c.delta_plus_bps = positive(n["delta_plus_bps"]);
  if (n["delta_minus"]) {
    c.delta_minus = scalar_double(n["delta_minus"]);
    if (!(c.delta_minus > 0 && c.delta_minus < 1)) invalid(n["delta_minus"], "delta_minus must be in (0, 1)");
  }
  if (n["horizon_s"]) c.horizon_s = positive(n["horizon_s"]);
  if (n["sample_s"]) c.sample_s = positive(n["sample_s"]);
  if (n["architecture"]) {
    std::string a = scalar_string(n["architecture"]);
    if (a == "FD") c.architecture = Architecture::kFD;
    else if (a == "QD") c.architecture = Architecture::kQD;
    else if (a == "FA") c.architecture = Architecture::kFA;
    else invalid(n["architecture"], "architecture must be FD, QD or FA");
  }
  c.controller = c.architecture == Architecture::kQD ? ControllerKind::kTrump : ControllerKind::kMirto;
  if (n["controller"]) {
    std::string k = scalar_string(n["controller"]);
    if (k == "mirto") c.controller = ControllerKind::kMirto;
    else if (k == "trump") c.controller = ControllerKind::kTrump;
    else invalid(n["controller"], "controller must be mirto or trump");
  }
  if (n["decrement"]) {
    std::string d = scalar_string(n["decrement"]);
    if (d == "balanced") c.decrement = DecrementRule::kBalanced;
    else if (d == "literal") c.decrement = DecrementRule::kLiteral;
    else invalid(n["decrement"], "decrement must be balanced or literal");
  }
  if (n["feedback_delay"]) c.feedback_delay = scalar_bool(n["feedback_delay"]);
  if (n["seed"]) c.seed = seed_value(n["seed"]);
  if (n["trump_w"]) c.trump.w = positive(n["trump_w"]);
  if (n["trump_beta"]) c.trump.beta = positive(n["trump_beta"]);
  if (n["trump_gamma"]) c.trump.gamma = positive(n["trump_gamma"]);
  if (n["trump_tau_s"]) c.trump.tau_s = positive(n["trump_tau_s"]);
  try {
    validate_sim_config(c);
  } catch (const Error& e) {
    invalid(n, e.what());
  }
}

void read_scenario(const YAML::Node& n, ScenarioSpec& s) {
  reject_unknown_keys(n, {"topology", "mean_capacity_bps", "capacity_noise", "pattern", "sources",
                          "flows_per_source", "sink", "seed", "runs"},
                      "scenario");
  if (n["topology"]) s.topology = scalar_string(n["topology"]);
  if (n["mean_capacity_bps"]) s.mean_capacity_bps = positive(n["mean_capacity_bps"]);
  if (n["capacity_noise"]) s.capacity_noise = scalar_bool(n["capacity_noise"]);
  if (n["pattern"]) {
    std::string p = scalar_string(n["pattern"]);
    if (p == "hotspot") s.pattern = TrafficPattern::kHotspot;
    else if (p == "uniform") s.pattern = TrafficPattern::kUniform;
    else invalid(n["pattern"], "pattern must be hotspot or uniform");
  }
  if (n["sources"]) s.sources = count(n["sources"], 1);
  if (n["flows_per_source"]) s.flows_per_source = count(n["flows_per_source"], 1);
  if (n["sink"]) s.sink = static_cast<NodeId>(scalar_int(n["sink"]));
  if (n["seed"]) s.seed = seed_value(n["seed"]);
  if (n["runs"]) s.runs = count(n["runs"], 1);
}

ProblemDocument preset_problem(const YAML::Node& node) {
  std::string name = scalar_string(node);
  if (name == "triangle" || name == "square") {
    return {make_toy_topology(name, kToyCapacityBps, 1.0), toy_demands()};
  }
  if (name == "case_study") return {make_topology("case_study", 1.0, 0), case_study_demands()};
  throw_at(node, ErrorCode::kUnknownTopology,
           fmt::format("unknown preset '{}' (triangle, square, case_study)", name));
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "solve-maxmin") return Command::kSolveMaxmin;
  if (name == "solve-joint") return Command::kSolveJoint;
  if (name == "simulate") return Command::kSimulate;
  if (name == "benchmark") return Command::kBenchmark;
  if (name == "sweep") return Command::kSweep;
  throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown command '{}'", name));
}

const char* command_name(Command c) {
  switch (c) {
    case Command::kSolveMaxmin: return "solve-maxmin";
    case Command::kSolveJoint: return "solve-joint";
    case Command::kSimulate: return "simulate";
    case Command::kBenchmark: return "benchmark";
    case Command::kSweep: return "sweep";
  }
  return "?";
}

RunConfig parse_config(const std::string& text, Command command,
                       const std::vector<std::string>& overrides,
                       std::optional<std::uint64_t> seed) {
  YAML::Node root = load_yaml(text);
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ParseError(ErrorCode::kParseError, "config must be a mapping", 1, 1);
  for (const std::string& o : overrides) apply_override(root, o);
  reject_unknown_keys(root,
                      {"preset", "nodes", "links", "demands", "seed", "paths", "maxmin", "joint",
                       "sweep", "sim", "scenario"},
                      "config");

  RunConfig cfg;
  cfg.command = command;
  cfg.overrides = overrides;
  for (int i = 1; i <= 15; ++i) cfg.sweep.ratios.push_back(i);

  if (root["preset"]) {
    if (root["nodes"] || root["links"] || root["demands"]) {
      invalid(root["preset"], "preset and nodes/links/demands are exclusive");
    }
    cfg.problem = preset_problem(root["preset"]);
  } else if (root["nodes"] || root["links"] || root["demands"]) {
    cfg.problem = problem_from_yaml(root);
  }
  if (root["seed"]) {
    cfg.seed = seed_value(root["seed"]);
    cfg.sim.seed = cfg.seed;
    cfg.scenario.seed = cfg.seed;
  }
  if (root["paths"]) read_paths(root["paths"], cfg.paths);
  if (root["maxmin"]) {
    YAML::Node m = root["maxmin"];
    reject_unknown_keys(m, {"at_time_s"}, "maxmin");
    if (m["at_time_s"]) {
      cfg.maxmin_at_time_s = scalar_double(m["at_time_s"]);
      if (!(cfg.maxmin_at_time_s >= 0) || !std::isfinite(cfg.maxmin_at_time_s)) {
        invalid(m["at_time_s"], "at_time_s must be >= 0");
      }
    }
  }
  if (root["joint"]) read_joint(root["joint"], cfg.joint);
  if (root["sweep"]) read_sweep(root["sweep"], cfg.sweep);
  if (root["sim"]) read_sim(root["sim"], cfg.sim);
  if (root["scenario"]) read_scenario(root["scenario"], cfg.scenario);

  if (seed) {
    cfg.seed = *seed;
    cfg.sim.seed = *seed;
    cfg.scenario.seed = *seed;
  } else if (command == Command::kSimulate) {
    cfg.seed = cfg.sim.seed;
  } else if (command == Command::kBenchmark) {
    cfg.seed = cfg.scenario.seed;
  }

  bool needs_problem = command == Command::kSolveMaxmin || command == Command::kSolveJoint ||
                       command == Command::kSimulate;
  if (needs_problem && !cfg.problem) {
    throw ParseError(ErrorCode::kMissingSection,
                     fmt::format("{} needs a preset or nodes/links/demands", command_name(command)),
                     1, 1);
  }
  return cfg;
}

}  // namespace mpath
