#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpath/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"Multipath bandwidth allocation: max-min LP, utility/cost optimum, MIRTO fluid "
               "simulation and Abilene benchmarks."};
  app.set_version_flag("--version", std::string(MPATH_VERSION));
  app.footer(mpath::exit_code_help());
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
  } opt;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"solve-maxmin", "iterative max-min multipath LP on a problem document"},
      {"solve-joint", "coordinated / uncoordinated utility-cost optimum"},
      {"simulate", "fluid simulation of MIRTO (FD, FA) or TRUMP (QD)"},
      {"benchmark", "multipath vs min-cost single path over seeded runs"},
      {"sweep", "toy capacity-ratio sweep (triangle or square)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "YAML config / problem document")->required();
    sub->add_option("--out", opt.out, "output directory")->required();
    sub->add_option("--seed", opt.seed, "seed (default 1, or the document's)");
    sub->add_option("--set", opt.overrides, "override, section.key=value (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors share the bad-config code
  }
  const std::string name = app.get_subcommands().front()->get_name();
  return mpath::execute(mpath::parse_command(name), opt.config, opt.out, opt.overrides, opt.seed);
}
