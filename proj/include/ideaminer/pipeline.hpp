#pragma once

#include <filesystem>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>

#include "ideaminer/config.hpp"
#include "ideaminer/phase_log.hpp"

namespace ideaminer::pipeline {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitNoGo = 2;

// Artifact names inside the output directory.
inline constexpr std::string_view kPhaseLogFile = "phase_log.json";
inline constexpr std::string_view kReportDir = "report";

using Logger = std::function<void(const std::string&)>;

// Runs the phase subcommands against config.out. Every subcommand checks its
// upstream artifacts, writes its own artifacts atomically and replaces its
// phase-log entries (and those of later subcommands). Returns kExitOk, or
// kExitNoGo when a quality gate recorded a no-go; other failures throw.
class Pipeline {
 public:
  explicit Pipeline(config::PipelineConfig config, Logger logger = {});

  int ingest() { return execute("ingest"); }
  int preprocess() { return execute("preprocess"); }
  int select_k() { return execute("select-k"); }
  int fit() { return execute("fit"); }
  int trends() { return execute("trends"); }
  int report() { return execute("report"); }
  // The six subcommands in order, halting at the first no-go.
  int run() { return execute("run"); }

  // Dispatches by subcommand name, "run" included.
  int execute(std::string_view subcommand);

  const config::PipelineConfig& config() const { return config_; }
  std::filesystem::path out_dir() const { return config_.out; }
  std::filesystem::path report_dir() const { return config_.out / kReportDir; }

 private:
  int dispatch(std::string_view subcommand);
  int do_ingest();
  int do_preprocess();
  int do_select_k();
  int do_fit();
  int do_trends();
  int do_report();
  report::PhaseLog load_log() const;
  void save_log(const report::PhaseLog& log) const;
  void require(const report::PhaseLog& log, std::string_view self, std::string_view upstream,
               std::string_view artifact) const;
  std::string timestamp() const;
  std::string digest(std::initializer_list<std::string_view> artifacts) const;
  std::string read_artifact(std::string_view name) const;
  void write_artifact(std::string_view name, std::string_view content) const;
  void note(const std::string& message) const;

  config::PipelineConfig config_;
  Logger logger_;
};

}  // namespace ideaminer::pipeline
