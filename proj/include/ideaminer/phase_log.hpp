#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ideaminer::report {

// The six idea-mining phases, numbered 1..6, with their CRISP-DM origins.
struct PhaseInfo {
  int number;
  std::string_view name;
  std::string_view crisp_dm_name;
};

inline constexpr std::array<PhaseInfo, 6> kPhases{{
    {1, "Technology Need Assessment", "Business Understanding"},
    {2, "Data Collection and Understanding", "Data Understanding"},
    {3, "Data Preparation", "Data Preparation"},
    {4, "Modeling for Idea Extraction", "Modeling"},
    {5, "Evaluation and Idea Extraction", "Evaluation"},
    {6, "Reporting Innovative Ideas", "Deployment"},
}};

std::string_view phase_name(int phase);
// Phase number for a name; throws for unknown names.
int phase_number(std::string_view name);

// Back-transitions allowed out of a phase (the loops of the process model:
// data inadequacy returns to need assessment, poor models return to data
// preparation, failed evaluation returns to need assessment or preparation).
std::vector<int> allowed_back_transitions(int phase);

// Subcommand order; entries are truncated from a subcommand onwards when it
// is re-run so the log always follows phase order.
inline constexpr std::array<std::string_view, 6> kSubcommands{"ingest", "preprocess", "select-k",
                                                              "fit",    "trends",     "report"};
int subcommand_ordinal(std::string_view subcommand);
int subcommand_phase(std::string_view subcommand);

struct PhaseEntry {
  int phase = 1;
  std::string subcommand;
  std::string timestamp;
  std::string inputs_digest;
  std::vector<std::string> decisions;
  bool go = true;
  std::optional<int> back_transition;  // target phase number
};

class PhaseLog {
 public:
  const std::vector<PhaseEntry>& entries() const { return entries_; }

  // Validates phase order and back-transition consistency. A no-go entry
  // must name a back-transition target.
  void append(PhaseEntry entry);

  // Drops entries written by `subcommand` and every later subcommand.
  void truncate_from(std::string_view subcommand);

  // Latest entry written by a subcommand, if any.
  const PhaseEntry* last_of(std::string_view subcommand) const;

  std::string to_json() const;
  static PhaseLog from_json(std::string_view text);

 private:
  std::vector<PhaseEntry> entries_;
};

}  // namespace ideaminer::report
