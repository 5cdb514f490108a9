#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ideaminer/lda.hpp"
#include "ideaminer/preprocess.hpp"

namespace ideaminer::dtm {

struct DtmOptions {
  int num_topics = 2;
  double chain_variance = 0.005;
  // Variance of the variational pseudo-observations.
  double obs_variance = 0.5;
  // Prior variance of each topic's natural parameters at the first slice.
  double initial_variance = 10.0;
  double alpha = 0.1;
  int max_em_iters = 20;
  double em_tolerance = 1e-4;  // relative ELBO change
  uint64_t seed = 0;
  int init_lda_iterations = 300;  // pooled static fit used for initialization
  int estep_max_iters = 100;
  double estep_tolerance = 1e-5;
  int mstep_max_iters = 150;
};

struct DtmModel {
  int num_topics = 0;
  size_t num_slices = 0;
  size_t vocab_size = 0;
  // beta[(t * K + k) * V + w] = p(w | topic k, slice t).
  std::vector<double> beta;
  // Smoothed natural parameters, same layout as beta.
  std::vector<double> means;
  double chain_variance = 0.0;
  double obs_variance = 0.0;
  double initial_variance = 0.0;
  double alpha = 0.0;
  uint64_t seed = 0;
  std::vector<double> elbo_trace;
  bool converged = false;
  std::vector<int> slice_years;
  std::vector<std::string> terms;
  std::vector<std::string> warnings;

  std::span<const double> topic_at(size_t t, int k) const {
    return {beta.data() + (t * static_cast<size_t>(num_topics) + static_cast<size_t>(k)) * vocab_size, vocab_size};
  }
  double prob(size_t t, int k, size_t w) const {
    return beta[(t * static_cast<size_t>(num_topics) + static_cast<size_t>(k)) * vocab_size + w];
  }
};

// Variational EM for the dynamic topic model: per-slice document E-steps
// alternate with forward-backward smoothing of every topic-word chain.
// Stops when the relative ELBO change drops below em_tolerance or after
// max_em_iters outer iterations.
DtmModel fit_dtm(const preprocess::BowCorpus& bow, const DtmOptions& options);

struct TermTrajectory {
  int topic = 0;
  std::string term;
  std::vector<int> years;
  std::vector<double> values;
};

TermTrajectory topic_term_trajectory(const DtmModel& model, int topic, const std::string& term);
TermTrajectory topic_term_trajectory(const DtmModel& model, int topic, size_t term_index);

std::vector<lda::RankedTerm> top_terms_at_slice(const DtmModel& model, int topic, size_t slice, size_t n);

// CSV "topic,term,year,probability" for the given (topic, term index) pairs.
std::string trajectories_csv(const std::vector<TermTrajectory>& trajectories);

std::string to_json(const DtmModel& model);
DtmModel from_json(std::string_view text);

}  // namespace ideaminer::dtm
