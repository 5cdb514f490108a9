#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ideaminer/corpus.hpp"

namespace ideaminer::config {

inline constexpr std::string_view kEnvPrefix = "IDEAMINER_";

struct PipelineConfig {
  // Phase 1 free text.
  std::string goals;
  std::string success_criteria;

  // Phase 2.
  std::vector<std::filesystem::path> inputs;
  corpus::FieldMap field_map;
  std::optional<int> from_year;  // defaults to the corpus minimum
  std::optional<int> to_year;    // defaults to the corpus maximum

  // Phase 3.
  std::string mode = "stem";
  std::filesystem::path stopwords_file;
  std::filesystem::path lemma_file;
  size_t min_doc_count = 100;
  double max_doc_fraction = 0.95;
  size_t bigram_min_count = 5;
  double bigram_threshold = 10.0;
  size_t frequency_top_n = 100;

  // Phase 4.
  std::vector<int> k_candidates{2, 3, 4, 5, 6, 7, 8, 9, 10};
  double lda_alpha = 0.1;
  double lda_eta = 0.01;
  int lda_iterations = 1000;
  size_t coherence_top_n = 10;
  int dtm_k = 0;  // 0 uses the selected K
  double dtm_chain_variance = 0.005;
  double dtm_obs_variance = 0.5;
  double dtm_initial_variance = 10.0;
  double dtm_alpha = 0.1;
  int dtm_max_em_iters = 20;

  // Phase 5.
  size_t trend_top_n = 10;
  double min_r = 0.7;
  double alpha_level = 0.05;
  int horizon_years = 3;
  std::filesystem::path labels_file;
  std::filesystem::path acronyms_file;

  uint64_t seed = 0;
  std::filesystem::path out = "out";
  bool wall_clock = false;
};

using Environment = std::function<std::optional<std::string>(const std::string&)>;

// Reads the process environment.
Environment process_environment();

// Flat "key = value" lines; '#' starts a comment line. Relative paths are
// resolved against base_dir. Environment variables IDEAMINER_<KEY> (upper
// case, '.' replaced by '_') override file values. Unknown keys, malformed
// or out-of-range values and a missing seed are errors.
// `overrides` (same keys) apply last, after the environment.
using Overrides = std::map<std::string, std::string>;
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                            const Environment& env = {}, const Overrides& overrides = {});
PipelineConfig load_config(const std::filesystem::path& path, const Environment& env = {},
                           const Overrides& overrides = {});

// Every key with its default and a one-line description, in config syntax.
std::string default_config_text();

// Canonical "key = value" rendering used for input digests. Paths appear
// by file name only and the output directory is omitted, so the digest does
// not depend on where a run happens.
std::string canonical_text(const PipelineConfig& config);

}  // namespace ideaminer::config
