#include "ideaminer/phase_log.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "ideaminer/error.hpp"

namespace ideaminer::report {

std::string_view phase_name(int phase) {
  if (phase < 1 || phase > 6) throw Error("phase number out of range: " + std::to_string(phase));
  return kPhases[static_cast<size_t>(phase - 1)].name;
}

int phase_number(std::string_view name) {
  for (const auto& p : kPhases) {
    if (p.name == name) return p.number;
  }
  throw Error("unknown phase name '" + std::string(name) + "'");
}

std::vector<int> allowed_back_transitions(int phase) {
  switch (phase) {
    case 2: return {1};
    case 3: return {1, 2};
    case 4: return {3};
    case 5: return {1, 3};
    default: return {};
  }
}

int subcommand_ordinal(std::string_view subcommand) {
  for (size_t i = 0; i < kSubcommands.size(); ++i) {
    if (kSubcommands[i] == subcommand) return static_cast<int>(i);
  }
  throw Error("unknown subcommand '" + std::string(subcommand) + "'");
}

int subcommand_phase(std::string_view subcommand) {
  static constexpr int kPhaseOf[] = {2, 3, 4, 4, 5, 6};
  return kPhaseOf[subcommand_ordinal(subcommand)];
}

void PhaseLog::append(PhaseEntry entry) {
  phase_name(entry.phase);
  if (!entries_.empty() && entry.phase < entries_.back().phase) {
    throw Error("phase log out of order: phase " + std::to_string(entry.phase) + " after phase " +
                std::to_string(entries_.back().phase));
  }
  if (!entry.go && !entry.back_transition) {
    throw Error("a no-go phase entry must name a back-transition target");
  }
  if (entry.back_transition) {
    const auto allowed = allowed_back_transitions(entry.phase);
    if (std::find(allowed.begin(), allowed.end(), *entry.back_transition) == allowed.end()) {
      throw Error("phase " + std::to_string(entry.phase) + " cannot transition back to phase " +
                  std::to_string(*entry.back_transition));
    }
  }
  entries_.push_back(std::move(entry));
}

void PhaseLog::truncate_from(std::string_view subcommand) {
  const int ordinal = subcommand_ordinal(subcommand);
  std::erase_if(entries_, [&](const PhaseEntry& e) { return subcommand_ordinal(e.subcommand) >= ordinal; });
}

const PhaseEntry* PhaseLog::last_of(std::string_view subcommand) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->subcommand == subcommand) return &*it;
  }
  return nullptr;
}

std::string PhaseLog::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "ideaminer.phase_log";
  j["version"] = 1;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json je;
    je["phase"] = e.phase;
    je["name"] = phase_name(e.phase);
    je["subcommand"] = e.subcommand;
    je["timestamp"] = e.timestamp;
    je["inputs_digest"] = e.inputs_digest;
    je["decisions"] = e.decisions;
    je["go"] = e.go;
    if (e.back_transition) {
      je["back_transition"] = phase_name(*e.back_transition);
    } else {
      je["back_transition"] = nullptr;
    }
    arr.push_back(std::move(je));
  }
  j["entries"] = std::move(arr);
  return j.dump(2) + "\n";
}

PhaseLog PhaseLog::from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ideaminer.phase_log") throw Error("not an ideaminer phase log");
  PhaseLog log;
  for (const auto& je : j.at("entries")) {
    PhaseEntry e;
    e.phase = je.at("phase").get<int>();
    e.subcommand = je.at("subcommand").get<std::string>();
    e.timestamp = je.at("timestamp").get<std::string>();
    e.inputs_digest = je.at("inputs_digest").get<std::string>();
    e.decisions = je.at("decisions").get<std::vector<std::string>>();
    e.go = je.at("go").get<bool>();
    if (!je.at("back_transition").is_null()) {
      e.back_transition = phase_number(je.at("back_transition").get<std::string>());
    }
    log.append(std::move(e));
  }
  return log;
}

}  // namespace ideaminer::report
