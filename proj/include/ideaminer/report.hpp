#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ideaminer/coherence.hpp"
#include "ideaminer/corpus.hpp"
#include "ideaminer/dtm.hpp"
#include "ideaminer/phase_log.hpp"
#include "ideaminer/preprocess.hpp"
#include "ideaminer/trends.hpp"

namespace ideaminer::report {

enum class LabelSource { kUser, kDefault };

struct TopicLabel {
  int topic = 0;
  std::string label;
  LabelSource source = LabelSource::kDefault;
};

// "index<TAB>label" per line; '#' comments and blank lines ignored.
std::map<int, std::string> parse_labels_file(std::string_view text);
// "acronym<TAB>expansion" per line.
std::map<std::string, std::string> parse_acronyms_file(std::string_view text);

// User labels override defaults; the default is the top 3 terms of the
// final slice joined by "/". Acronyms are expanded word by word in every
// label. Throws when a user label names a topic index >= K.
std::vector<TopicLabel> label_topics(const dtm::DtmModel& model, const std::map<int, std::string>& user_labels = {},
                                     const std::map<std::string, std::string>& acronyms = {});

// Template for analyst editing, "index<TAB>label".
std::string labels_template(const std::vector<TopicLabel>& labels);

inline constexpr std::array<std::string_view, 8> kChecklistKeys{
    "novelty", "necessity", "usability", "usefulness", "technical", "market", "financial", "social"};

struct TrendEvidence {
  std::string term;
  trends::Trend classification = trends::Trend::kFlat;
  double slope = 0.0;
  double p_value = 1.0;
};

struct CorrelationEvidence {
  double r = 0.0;
  double p_value = 1.0;
  size_t n = 0;
};

struct IdeaCandidate {
  int topic = 0;
  std::vector<std::string> terms;  // one or two
  std::vector<TrendEvidence> trend_evidence;
  std::optional<CorrelationEvidence> correlation;
  std::string prompt;
  std::map<std::string, std::string> checklist;  // every key "unscored"
};

struct IdeaOptions {
  double min_r = 0.7;
  double alpha_level = 0.05;
};

// One candidate per significantly increasing term, and one per term pair
// with |r| >= min_r, p < alpha_level and at least one increasing member.
std::vector<IdeaCandidate> generate_idea_candidates(const std::vector<trends::TermTrend>& trend_results,
                                                    const std::vector<trends::CorrelationResult>& correlations,
                                                    const std::vector<TopicLabel>& labels,
                                                    const IdeaOptions& options = {});

struct IngestSummary {
  corpus::ParseReport parse;
  corpus::DedupReport dedup;
  int first_year = 0;
  int last_year = 0;
  size_t records = 0;
  size_t dropped_out_of_range = 0;
  std::vector<size_t> slice_sizes;
  std::vector<std::string> warnings;
};

struct PreprocessSummary {
  std::string mode;
  size_t vocab_size = 0;
  size_t documents = 0;
  size_t dropped_documents = 0;
  uint64_t tokens = 0;
  size_t bigrams_accepted = 0;
  size_t min_doc_count = 0;
  double max_doc_fraction = 0.0;
  std::vector<preprocess::FrequencyRow> frequency;
};

struct TrendsSummary {
  std::vector<trends::TermTrend> trends;
  std::vector<trends::CorrelationResult> correlations;
  std::vector<std::string> notes;
  std::string gate_regression;
  std::string gate_arima;
};

struct ReportInputs {
  std::string goals;
  std::string success_criteria;
  std::optional<IngestSummary> ingest;
  std::optional<PreprocessSummary> preprocess;
  std::optional<coherence::Selection> selection;
  std::optional<dtm::DtmModel> model;
  std::optional<TrendsSummary> trends;
  std::vector<TopicLabel> labels;  // computed from the model when empty
  IdeaOptions ideas;
  size_t topic_table_terms = 5;
};

// File name (relative to the bundle root) -> content.
using Bundle = std::map<std::string, std::string>;

// Renders report.md, report.json, phase_log.json, labels.txt and csv/*.
// Identical inputs give byte-identical output. Throws naming the phase to
// rerun when an artifact is missing.
Bundle render_report(const ReportInputs& inputs, const PhaseLog& log);

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir);

}  // namespace ideaminer::report
