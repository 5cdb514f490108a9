#include "ideaminer/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ideaminer/error.hpp"
#include "ideaminer/rng.hpp"

namespace ideaminer::lda {

LdaModel fit_lda(const preprocess::BowCorpus& bow, const LdaOptions& options) {
  const int K = options.num_topics;
  if (K < 2) throw Error("LDA needs at least 2 topics");
  if (options.iterations < 1) throw Error("LDA needs at least 1 iteration");
  if (bow.docs.empty() || bow.total_tokens() == 0) throw Error("cannot fit LDA on an empty corpus");
  const size_t D = bow.docs.size();
  const size_t V = bow.vocab_size;

  LdaModel model;
  model.num_topics = K;
  model.vocab_size = V;
  model.alpha = options.alpha;
  model.eta = options.eta;
  model.seed = options.seed;
  model.iterations = options.iterations;
  if (static_cast<size_t>(K) > D) {
    model.warnings.push_back("K = " + std::to_string(K) + " exceeds the number of documents (" +
                             std::to_string(D) + ")");
  }

  // Token stream: word ids and assignments, with per-document offsets.
  std::vector<uint32_t> words;
  std::vector<size_t> offsets{0};
  for (const auto& doc : bow.docs) {
    for (const auto& tc : doc) {
      if (tc.term >= V) throw Error("bag-of-words term id outside the vocabulary");
      words.insert(words.end(), tc.count, tc.term);
    }
    offsets.push_back(words.size());
  }

  Rng rng(options.seed);
  std::vector<int> z(words.size());
  std::vector<int> n_dk(D * K, 0);
  std::vector<int> n_kw(static_cast<size_t>(K) * V, 0);
  std::vector<int> n_k(K, 0);
  for (size_t d = 0; d < D; ++d) {
    for (size_t i = offsets[d]; i < offsets[d + 1]; ++i) {
      const int k = static_cast<int>(rng.index(static_cast<size_t>(K)));
      z[i] = k;
      ++n_dk[d * K + k];
      ++n_kw[static_cast<size_t>(k) * V + words[i]];
      ++n_k[k];
    }
  }

  const int burn = std::min(options.iterations - 1,
                            static_cast<int>(std::floor(options.burn_in * options.iterations)));
  const double v_eta = static_cast<double>(V) * options.eta;
  model.phi = RowMatrix::Zero(K, static_cast<Eigen::Index>(V));
  model.theta = RowMatrix::Zero(static_cast<Eigen::Index>(D), K);
  std::vector<double> weights(K);
  int samples = 0;

  for (int iter = 0; iter < options.iterations; ++iter) {
    for (size_t d = 0; d < D; ++d) {
      int* doc_topics = &n_dk[d * K];
      for (size_t i = offsets[d]; i < offsets[d + 1]; ++i) {
        const uint32_t w = words[i];
        int k = z[i];
        --doc_topics[k];
        --n_kw[static_cast<size_t>(k) * V + w];
        --n_k[k];
        for (int t = 0; t < K; ++t) {
          weights[t] = (doc_topics[t] + options.alpha) * (n_kw[static_cast<size_t>(t) * V + w] + options.eta) /
                       (n_k[t] + v_eta);
        }
        k = static_cast<int>(rng.discrete(weights));
        z[i] = k;
        ++doc_topics[k];
        ++n_kw[static_cast<size_t>(k) * V + w];
        ++n_k[k];
      }
    }
    if (iter >= burn) {
      ++samples;
      for (int k = 0; k < K; ++k) {
        const double denom = n_k[k] + v_eta;
        for (size_t w = 0; w < V; ++w) {
          model.phi(k, static_cast<Eigen::Index>(w)) += (n_kw[static_cast<size_t>(k) * V + w] + options.eta) / denom;
        }
      }
      const double k_alpha = K * options.alpha;
      for (size_t d = 0; d < D; ++d) {
        const double denom = static_cast<double>(offsets[d + 1] - offsets[d]) + k_alpha;
        for (int k = 0; k < K; ++k) {
          model.theta(static_cast<Eigen::Index>(d), k) += (n_dk[d * K + k] + options.alpha) / denom;
        }
      }
    }
  }
  model.phi /= samples;
  model.theta /= samples;
  // Renormalize away accumulated rounding.
  for (Eigen::Index k = 0; k < model.phi.rows(); ++k) model.phi.row(k) /= model.phi.row(k).sum();
  for (Eigen::Index d = 0; d < model.theta.rows(); ++d) model.theta.row(d) /= model.theta.row(d).sum();
  return model;
}

double perplexity(const LdaModel& model, const preprocess::BowCorpus& bow) {
  if (bow.docs.size() != static_cast<size_t>(model.theta.rows())) {
    throw Error("perplexity: corpus has " + std::to_string(bow.docs.size()) + " documents, model has " +
                std::to_string(model.theta.rows()));
  }
  double log_lik = 0.0;
  uint64_t n = 0;
  for (size_t d = 0; d < bow.docs.size(); ++d) {
    for (const auto& tc : bow.docs[d]) {
      if (tc.term >= model.vocab_size) throw Error("perplexity: term id outside the model vocabulary");
      double p = 0.0;
      for (int k = 0; k < model.num_topics; ++k) {
        p += model.theta(static_cast<Eigen::Index>(d), k) * model.phi(k, tc.term);
      }
      if (!(p > 0.0)) throw Error("perplexity: zero probability for a corpus token (degenerate model)");
      log_lik += tc.count * std::log(p);
      n += tc.count;
    }
  }
  if (n == 0) throw Error("perplexity of an empty corpus");
  return std::exp(-log_lik / static_cast<double>(n));
}

std::vector<size_t> rank_indices(std::span<const double> distribution, const std::vector<std::string>& terms,
                                 size_t n) {
  std::vector<size_t> idx(distribution.size());
  std::iota(idx.begin(), idx.end(), size_t{0});
  auto name_less = [&](size_t a, size_t b) { return terms.empty() ? a < b : terms[a] < terms[b]; };
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    if (distribution[a] != distribution[b]) return distribution[a] > distribution[b];
    return name_less(a, b);
  });
  if (idx.size() > n) idx.resize(n);
  return idx;
}

std::vector<RankedTerm> rank_terms(std::span<const double> distribution, const std::vector<std::string>& terms,
                                   size_t n) {
  std::vector<RankedTerm> out;
  for (size_t i : rank_indices(distribution, terms, n)) {
    out.emplace_back(terms.empty() ? std::to_string(i) : terms[i], distribution[i]);
  }
  return out;
}

std::vector<RankedTerm> top_terms(const LdaModel& model, int topic, size_t n) {
  if (topic < 0 || topic >= model.num_topics) throw Error("topic index out of range");
  const auto row = model.phi.row(topic);
  return rank_terms(std::span<const double>(row.data(), static_cast<size_t>(row.size())), model.terms, n);
}

namespace {

nlohmann::ordered_json matrix_json(const RowMatrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).data(), m.row(r).data() + m.cols()));
  }
  return rows;
}

RowMatrix matrix_from(const nlohmann::json& j, Eigen::Index cols) {
  RowMatrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto row = j.at(static_cast<size_t>(r)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error("model matrix row has wrong length");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<size_t>(c)];
  }
  return m;
}

}  // namespace

std::string to_json(const LdaModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "ideaminer.lda";
  j["version"] = 1;
  j["rng"] = Rng::kAlgorithm;
  j["K"] = model.num_topics;
  j["V"] = model.vocab_size;
  j["alpha"] = model.alpha;
  j["eta"] = model.eta;
  j["seed"] = model.seed;
  j["iterations"] = model.iterations;
  j["terms"] = model.terms;
  j["phi"] = matrix_json(model.phi);
  j["theta"] = matrix_json(model.theta);
  return j.dump() + "\n";
}

LdaModel from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ideaminer.lda" || j.value("version", 0) != 1) {
    throw Error("not an ideaminer LDA model (version 1) file");
  }
  LdaModel m;
  m.num_topics = j.at("K").get<int>();
  m.vocab_size = j.at("V").get<size_t>();
  m.alpha = j.at("alpha").get<double>();
  m.eta = j.at("eta").get<double>();
  m.seed = j.at("seed").get<uint64_t>();
  m.iterations = j.at("iterations").get<int>();
  m.terms = j.at("terms").get<std::vector<std::string>>();
  m.phi = matrix_from(j.at("phi"), static_cast<Eigen::Index>(m.vocab_size));
  m.theta = matrix_from(j.at("theta"), m.num_topics);
  if (m.phi.rows() != m.num_topics) throw Error("phi row count differs from K");
  return m;
}

}  // namespace ideaminer::lda
