#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ideaminer/preprocess.hpp"

namespace ideaminer::lda {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LdaOptions {
  int num_topics = 2;
  double alpha = 0.1;
  double eta = 0.01;
  int iterations = 1000;
  // Estimates average the samples after this fraction of the sweeps.
  double burn_in = 0.8;
  uint64_t seed = 0;
};

struct LdaModel {
  int num_topics = 0;
  size_t vocab_size = 0;
  RowMatrix phi;    // K x V, rows sum to 1
  RowMatrix theta;  // D x K, rows sum to 1
  double alpha = 0.0;
  double eta = 0.0;
  uint64_t seed = 0;
  int iterations = 0;
  std::vector<std::string> terms;  // optional; index -> term
  std::vector<std::string> warnings;
};

// Collapsed Gibbs sampling. Bit-identical output for equal inputs and seed.
LdaModel fit_lda(const preprocess::BowCorpus& bow, const LdaOptions& options);

// exp(-sum_d sum_w n_dw log p(w|d) / N) with p(w|d) = sum_k theta_dk phi_kw,
// evaluated in-sample on the training corpus.
double perplexity(const LdaModel& model, const preprocess::BowCorpus& bow);

using RankedTerm = std::pair<std::string, double>;

// n most probable entries of a distribution over terms; ties lexicographic.
// Uses the index as the name when `terms` is empty.
std::vector<RankedTerm> rank_terms(std::span<const double> distribution, const std::vector<std::string>& terms,
                                   size_t n);
std::vector<size_t> rank_indices(std::span<const double> distribution, const std::vector<std::string>& terms,
                                 size_t n);

std::vector<RankedTerm> top_terms(const LdaModel& model, int topic, size_t n);

std::string to_json(const LdaModel& model);
LdaModel from_json(std::string_view text);

}  // namespace ideaminer::lda
