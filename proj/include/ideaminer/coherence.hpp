#pragma once

#include <string>
#include <vector>

#include "ideaminer/lda.hpp"
#include "ideaminer/preprocess.hpp"

namespace ideaminer::coherence {

struct CoherenceResult {
  std::vector<double> per_topic;
  double aggregate = 0.0;  // arithmetic mean of per_topic
  std::string measure = "umass";
  size_t top_n = 0;
};

// UMass coherence. Each inner vector holds one topic's term ids ordered by
// descending probability; the first top_n are scored as
//   sum_{i>=2} sum_{j<i} log((D(w_i, w_j) + 1) / D(w_j))
// with D counting documents of `bow` that contain the term(s).
CoherenceResult umass_coherence(const std::vector<std::vector<uint32_t>>& topic_top_terms,
                                const preprocess::BowCorpus& bow, size_t top_n = 10);

// Top term ids of every topic of a static model, ordered for scoring.
std::vector<std::vector<uint32_t>> model_top_terms(const lda::LdaModel& model, size_t top_n);

struct SelectionPoint {
  int num_topics = 0;
  double coherence = 0.0;
  double perplexity = 0.0;
};

struct Selection {
  int best_k = 0;
  std::vector<SelectionPoint> curve;  // ascending K, one row per distinct candidate
};

struct SelectOptions {
  lda::LdaOptions lda;  // num_topics is overridden per candidate
  size_t top_n = 10;
  bool parallel = true;
};

// Fits one static LDA per distinct candidate K and picks the highest UMass
// coherence; ties go to the smaller K.
Selection select_k(const preprocess::BowCorpus& bow, std::vector<int> candidates, const SelectOptions& options);

std::string curve_csv(const Selection& selection);

}  // namespace ideaminer::coherence
