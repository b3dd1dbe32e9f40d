#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpath/document.h"
#include "mpath/error.h"
#include "mpath/fluid.h"
#include "mpath/joint.h"
#include "mpath/scenarios.h"

namespace mpath {

enum class Command { kSolveMaxmin, kSolveJoint, kSimulate, kBenchmark, kSweep };

Command parse_command(const std::string& name);  // throws InvalidConfig
const char* command_name(Command c);

inline constexpr std::uint64_t kDefaultSeed = 1;

struct PathOptions {
  int max_paths = 4;
  int max_hops = 0;  // 0: |N| - 1
};

struct JointOptions {
  UtilitySpec utility;
  double utility_unit_bps = 1e6;
  bool coordinated = true;
  bool uncoordinated = true;
};

struct RunConfig {
  Command command = Command::kSolveMaxmin;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> overrides;

  // Resolved sections.
  std::optional<ProblemDocument> problem;
  PathOptions paths;
  double maxmin_at_time_s = 0;
  JointOptions joint;
  SweepSettings sweep;
  SimConfig sim;
  ScenarioSpec scenario;
};

// Document keys (all optional unless the command needs them):
//   preset: triangle | square | case_study   (or nodes/links/demands)
//   seed, paths{max_paths,max_hops}, maxmin{at_time_s},
//   joint{alpha,weights,utility_unit_bps,mode}, sweep{...}, sim{...},
//   scenario{...}
// `overrides` are "section.key=value" and are applied before resolving.
// An explicit `seed` wins over every seed in the document.
RunConfig parse_config(const std::string& text, Command command,
                       const std::vector<std::string>& overrides = {},
                       std::optional<std::uint64_t> seed = std::nullopt);

// 0 ok, 1 other, 2 config, 3 io, 4 invalid model, 5 solver.
int exit_code_for(ErrorCode code);
const char* exit_code_help();

struct Artifact {
  std::string name;
  std::string content;
};

// Runs the command and returns every file it would write (manifest last).
std::vector<Artifact> run_command(const RunConfig& config, const std::string& config_text);

// Reads the config, runs, writes artifacts. On failure only manifest.json
// (with the error) is written. Returns the exit code; diagnostics go to
// stderr.
int execute(Command command, const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed);

}  // namespace mpath
