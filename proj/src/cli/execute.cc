#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "mpath/cli.h"
#include "mpath/csv.h"
#include "mpath/maxmin.h"

#ifndef MPATH_VERSION
#define MPATH_VERSION "dev"
#endif

namespace mpath {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) { return format_double(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error(ErrorCode::kIo, "sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string inputs_hash(const std::string& config_text, const std::vector<std::string>& overrides) {
  std::string blob = config_text;
  for (const std::string& o : overrides) blob += "\n--set " + o;
  return sha256_hex(blob);
}

std::vector<PathSet> path_sets(const ProblemDocument& p, const PathOptions& o) {
  std::vector<PathSet> out;
  for (const Demand& d : p.demands) {
    out.push_back(enumerate_paths(p.graph, d, o.max_paths, o.max_hops));
  }
  return out;
}

std::string id_list(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? " " : "") + std::to_string(ids[i]);
  return out;
}

CsvTable table(const std::string& file) {
  CsvTable t;
  t.header = csv_schema(file).columns;
  return t;
}

void solve_maxmin(const RunConfig& cfg, std::vector<Artifact>& out) {
  const ProblemDocument& p = *cfg.problem;
  DemandSet demands = demands_at(p.demands, cfg.maxmin_at_time_s);
  MaxMinResult r = maxmin_multipath_allocate(p.graph, demands);
  CsvTable alloc = table("allocation.csv");
  for (std::size_t i = 0; i < r.allocation.num_demands(); ++i) {
    for (LinkIndex l = 0; l < p.graph.num_links(); ++l) {
      double x = r.allocation.rates[i][l];
      if (!(x > 0)) continue;
      const Link& link = p.graph.link(l);
      alloc.add({num(r.allocation.demand_ids[i]), num(link.src), num(link.dst), num(x)});
    }
  }
  std::vector<double> totals = r.totals();
  std::vector<double> sat = satisfaction_profile(p.graph, demands, totals);
  CsvTable s = table("satisfaction.csv");
  for (std::size_t i = 0; i < demands.size(); ++i) {
    s.add({num(demands[i].id), num(demands[i].peak_at(0)), num(totals[i]), num(sat[i])});
  }
  CsvTable trace = table("trace.csv");
  for (std::size_t i = 0; i < r.trace.iterations.size(); ++i) {
    const MaxMinIteration& it = r.trace.iterations[i];
    trace.add({num(i + 1), num(it.z_bps), id_list(it.frozen_ids)});
  }
  out.push_back({"allocation.csv", alloc.str()});
  out.push_back({"satisfaction.csv", s.str()});
  out.push_back({"trace.csv", trace.str()});
}

void solve_joint_cmd(const RunConfig& cfg, std::vector<Artifact>& out) {
  JointProblem problem;
  problem.graph = cfg.problem->graph;
  problem.demands = cfg.problem->demands;
  problem.paths = path_sets(*cfg.problem, cfg.paths);
  problem.utility = cfg.joint.utility;
  problem.utility_unit_bps = cfg.joint.utility_unit_bps;
  CsvTable rates = table("joint.csv");
  CsvTable summary = table("joint_summary.csv");
  auto emit = [&](const char* mode, const JointSolution& s) {
    for (const PathRates& pr : s.allocation) {
      for (std::size_t k = 0; k < pr.rates.size(); ++k) {
        rates.add({mode, num(pr.demand_id), num(k), num(pr.paths[k].hops()), num(pr.rates[k])});
      }
    }
    summary.add({mode, num(s.objective), num(s.gcr), num(s.iterations), s.converged ? "1" : "0",
                 num(s.kkt_residual)});
    if (!s.converged) {
      std::cerr << fmt::format("mpath: warning: {} solve stopped before convergence\n", mode);
    }
  };
  if (cfg.joint.coordinated) {
    problem.mode = Coordination::kCoordinated;
    emit("CM", solve_coordinated(problem));
  }
  if (cfg.joint.uncoordinated) {
    problem.mode = Coordination::kUncoordinated;
    emit("UM", solve_uncoordinated(problem));
  }
  out.push_back({"joint.csv", rates.str()});
  out.push_back({"joint_summary.csv", summary.str()});
}

void sweep_cmd(const RunConfig& cfg, std::vector<Artifact>& out) {
  CsvTable t = table("sweep.csv");
  for (const SweepPoint& pt : sweep_capacity_ratio(cfg.sweep)) {
    for (const auto& [mode, sol] : {std::pair<const char*, const JointSolution*>{"CM", &pt.coordinated},
                                    {"UM", &pt.uncoordinated}}) {
      for (const PathRates& pr : sol->allocation) {
        for (std::size_t k = 0; k < pr.rates.size(); ++k) {
          t.add({num(pt.ratio), num(pr.demand_id), num(k), num(pr.rates[k]), mode, num(sol->gcr)});
        }
      }
    }
  }
  out.push_back({"sweep.csv", t.str()});
}

void simulate_cmd(const RunConfig& cfg, std::vector<Artifact>& out) {
  const ProblemDocument& p = *cfg.problem;
  std::vector<PathSet> paths = path_sets(p, cfg.paths);
  SimulationResult r = run_fluid_simulation(p.graph, p.demands, paths, cfg.sim);
  CsvTable ts = table("timeseries.csv");
  for (std::size_t s = 0; s < r.series.times.size(); ++s) {
    for (std::size_t i = 0; i < r.series.paths.size(); ++i) {
      const SeriesPath& sp = r.series.paths[i];
      ts.add({num(r.series.times[s]), num(sp.demand_id), num(sp.path_index),
              num(r.series.rates[s][i])});
    }
  }
  CsvTable val = table("validation.csv");
  for (const PathValidation& v : r.validation.paths) {
    val.add({num(v.demand_id), num(v.path_index), num(v.kappa), num(v.q), num(v.r), num(v.s)});
  }
  CsvTable opt = table("optimum.csv");
  for (const EpochOptimum& e : epoch_optima(p.graph, p.demands, paths, cfg.sim.horizon_s)) {
    for (const PathRates& pr : e.allocation) {
      for (std::size_t k = 0; k < pr.rates.size(); ++k) {
        opt.add({num(e.t_start_s), num(e.t_end_s), num(pr.demand_id), num(k), num(pr.rates[k])});
      }
    }
  }
  out.push_back({"timeseries.csv", ts.str()});
  out.push_back({"validation.csv", val.str()});
  out.push_back({"optimum.csv", opt.str()});
}

void benchmark_cmd(const RunConfig& cfg, std::vector<Artifact>& out) {
  ExperimentReport rep = run_benchmark_suite(cfg.scenario);
  CsvTable report = table("report.csv");
  for (const RunRecord& run : rep.runs) {
    for (const auto& [scheme, rate, sat] :
         {std::tuple<const char*, const std::vector<double>*, const std::vector<double>*>{
              "multipath", &run.multipath_rate, &run.multipath_satisfaction},
          {"mincost", &run.mincost_rate, &run.mincost_satisfaction}}) {
      for (std::size_t i = 0; i < run.demands.size(); ++i) {
        report.add({num(run.run_id), scheme, num(run.demands[i].id),
                    num(run.demands[i].peak_at(0)), num((*rate)[i]), num((*sat)[i])});
      }
    }
  }
  CsvTable summary = table("summary.csv");
  summary.add({"multipath", num(rep.multipath_mean_carried), num(rep.mean_gain),
               num(rep.multipath_satisfaction_variance)});
  summary.add({"mincost", num(rep.mincost_mean_carried), num(0.0),
               num(rep.mincost_satisfaction_variance)});
  CsvTable dec = table("deciles.csv");
  for (const DecileStats& d : rep.deciles) {
    dec.add({num(d.decile), "multipath", num(d.multipath_mean), num(d.multipath_variance)});
    dec.add({num(d.decile), "mincost", num(d.mincost_mean), num(d.mincost_variance)});
  }
  out.push_back({"report.csv", report.str()});
  out.push_back({"summary.csv", summary.str()});
  out.push_back({"deciles.csv", dec.str()});
}

json manifest_base(Command command, std::uint64_t seed, const std::string& hash) {
  json m;
  m["command"] = command_name(command);
  m["seed"] = seed;
  m["inputs_sha256"] = hash;
  m["version"] = MPATH_VERSION;
  m["libraries"] = {{"fmt", FMT_VERSION}, {"nlohmann_json",
                    fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}};
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, fmt::format("error reading '{}'", path));
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kUnknownKey:
    case ErrorCode::kMissingSection:
    case ErrorCode::kInvalidConfig:
      return 2;
    case ErrorCode::kIo:
      return 3;
    case ErrorCode::kDisconnectedGraph:
    case ErrorCode::kDuplicateLink:
    case ErrorCode::kNonPositiveCapacity:
    case ErrorCode::kInvalidGraph:
    case ErrorCode::kInvalidDemand:
    case ErrorCode::kNoPathExists:
    case ErrorCode::kUnknownTopology:
    case ErrorCode::kInvalidSink:
      return 4;
    case ErrorCode::kSaturatedLink:
    case ErrorCode::kNegativeResidual:
    case ErrorCode::kInfeasible:
    case ErrorCode::kUnbounded:
    case ErrorCode::kNumericalFailure:
    case ErrorCode::kNonPositiveRate:
    case ErrorCode::kNotConverged:
    case ErrorCode::kWindowTooShort:
      return 5;
  }
  return 1;
}

const char* exit_code_help() {
  return "Exit codes:\n"
         "  0  success\n"
         "  1  unexpected failure\n"
         "  2  bad config or usage (parse error, unknown key, missing section, invalid value)\n"
         "  3  I/O error\n"
         "  4  invalid model (graph, demands, paths, topology, sink)\n"
         "  5  solver or simulation failure\n";
}

std::vector<Artifact> run_command(const RunConfig& cfg, const std::string& config_text) {
  std::vector<Artifact> out;
  switch (cfg.command) {
    case Command::kSolveMaxmin: solve_maxmin(cfg, out); break;
    case Command::kSolveJoint: solve_joint_cmd(cfg, out); break;
    case Command::kSimulate: simulate_cmd(cfg, out); break;
    case Command::kBenchmark: benchmark_cmd(cfg, out); break;
    case Command::kSweep: sweep_cmd(cfg, out); break;
  }
  json m = manifest_base(cfg.command, cfg.seed, inputs_hash(config_text, cfg.overrides));
  m["status"] = "ok";
  json files = json::array();
  for (const Artifact& a : out) files.push_back(a.name);
  m["outputs"] = files;
  out.push_back({"manifest.json", m.dump(2) + "\n"});
  return out;
}

int execute(Command command, const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed) {
  fs::path dir(out_dir);
  std::string text;
  std::vector<fs::path> written;
  try {
    text = read_file(config_path);
    RunConfig cfg = parse_config(text, command, overrides, seed);
    cfg.config_path = config_path;
    cfg.out_dir = out_dir;
    std::vector<Artifact> files = run_command(cfg, text);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIo, fmt::format("cannot create '{}': {}", out_dir, ec.message()));
    for (const Artifact& a : files) {
      write_file(dir / a.name, a.content);
      written.push_back(dir / a.name);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << fmt::format("mpath: error: {}: {}\n", error_code_name(e.code()), e.what());
    std::error_code ec;
    for (const fs::path& p : written) fs::remove(p, ec);
    json m = manifest_base(command, seed.value_or(kDefaultSeed), sha256_hex(text));
    m["status"] = "error";
    m["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      m["error"]["line"] = pe->line();
      m["error"]["column"] = pe->column();
    }
    m["outputs"] = json::array();
    fs::create_directories(dir, ec);
    if (!ec) {
      std::ofstream(dir / "manifest.json", std::ios::binary | std::ios::trunc) << m.dump(2) << "\n";
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << fmt::format("mpath: error: {}\n", e.what());
    return 1;
  }
}

}  // namespace mpath
