// ideaminer <subcommand> --config <file> [--out <dir>] [--seed <int>]
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ideaminer/config.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string seed;
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "key = value configuration file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", flags.out, "output directory (overrides the config)");
  sub->add_option("--seed", flags.seed, "random seed (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ideaminer;
  CLI::App app{"Idea mining over timestamped scholarly records: dynamic topics, term trends and idea signals."};
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print every config key with its default and exit");
  app.footer("Environment: IDEAMINER_<KEY> overrides a config key (upper case, '.' as '_').\n"
             "Exit codes: 0 success, 1 error, 2 quality-gate no-go (see phase_log.json).");

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"ingest", "Phases 1-2: read CSV exports, deduplicate, bin by year"},
      {"preprocess", "Phase 3: tokenize, bigrams, dictionary, bag of words"},
      {"select-k", "Phase 4: compare numbers of topics by coherence"},
      {"fit", "Phase 4: fit the dynamic topic model"},
      {"trends", "Phase 5: term trajectories, trends, forecasts, correlations"},
      {"report", "Phase 6: render the report bundle"},
      {"run", "every phase in order"},
  };
  for (const auto& [name, help] : subcommands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (print_config) {
    std::cout << config::default_config_text();
    return pipeline::kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return pipeline::kExitFatal;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    config::Overrides overrides;
    if (!flags.out.empty()) overrides["out"] = flags.out;
    if (!flags.seed.empty()) overrides["seed"] = flags.seed;
    auto cfg = config::load_config(flags.config, config::process_environment(), overrides);
    pipeline::Pipeline p(std::move(cfg), [](const std::string& m) { std::cerr << m << "\n"; });
    const int code = p.execute(subcommand);
    if (code == pipeline::kExitNoGo) {
      std::cerr << "ideaminer: quality gate no-go recorded in " << (p.out_dir() / pipeline::kPhaseLogFile).string()
                << "\n";
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "ideaminer: error: " << e.what() << "\n";
    return pipeline::kExitFatal;
  }
}
