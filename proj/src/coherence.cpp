#include "ideaminer/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <unordered_set>

#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"

namespace ideaminer::coherence {

CoherenceResult umass_coherence(const std::vector<std::vector<uint32_t>>& topic_top_terms,
                                const preprocess::BowCorpus& bow, size_t top_n) {
  CoherenceResult result;
  result.top_n = top_n;
  if (topic_top_terms.empty()) throw Error("coherence needs at least one topic");

  // Document sets only for the terms that are scored.
  std::unordered_set<uint32_t> wanted;
  for (const auto& topic : topic_top_terms) {
    if (std::min(topic.size(), top_n) < 2) throw Error("each topic must supply at least 2 top terms");
    for (size_t i = 0; i < std::min(topic.size(), top_n); ++i) wanted.insert(topic[i]);
  }
  std::unordered_map<uint32_t, std::vector<uint32_t>> docs_with;
  for (uint32_t d = 0; d < bow.docs.size(); ++d) {
    for (const auto& tc : bow.docs[d]) {
      if (wanted.count(tc.term)) docs_with[tc.term].push_back(d);
    }
  }
  auto doc_count = [&](uint32_t w) -> size_t {
    const auto it = docs_with.find(w);
    return it == docs_with.end() ? 0 : it->second.size();
  };
  auto co_count = [&](uint32_t a, uint32_t b) -> size_t {
    const auto ia = docs_with.find(a);
    const auto ib = docs_with.find(b);
    if (ia == docs_with.end() || ib == docs_with.end()) return 0;
    const auto& x = ia->second;
    const auto& y = ib->second;
    size_t i = 0, j = 0, n = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] < y[j]) {
        ++i;
      } else if (y[j] < x[i]) {
        ++j;
      } else {
        ++n, ++i, ++j;
      }
    }
    return n;
  };

  for (const auto& topic : topic_top_terms) {
    const size_t n = std::min(topic.size(), top_n);
    double score = 0.0;
    for (size_t i = 1; i < n; ++i) {
      for (size_t j = 0; j < i; ++j) {
        const size_t dj = doc_count(topic[j]);
        if (dj == 0) {
          throw Error("coherence: term id " + std::to_string(topic[j]) +
                      " occurs in no document (model and corpus vocabularies differ)");
        }
        score += std::log((static_cast<double>(co_count(topic[i], topic[j])) + 1.0) / static_cast<double>(dj));
      }
    }
    result.per_topic.push_back(score);
  }
  double sum = 0.0;
  for (double s : result.per_topic) sum += s;
  result.aggregate = sum / static_cast<double>(result.per_topic.size());
  return result;
}

std::vector<std::vector<uint32_t>> model_top_terms(const lda::LdaModel& model, size_t top_n) {
  std::vector<std::vector<uint32_t>> out;
  for (int k = 0; k < model.num_topics; ++k) {
    const auto row = model.phi.row(k);
    std::vector<uint32_t> ids;
    for (size_t i : lda::rank_indices(std::span<const double>(row.data(), static_cast<size_t>(row.size())),
                                      model.terms, top_n)) {
      ids.push_back(static_cast<uint32_t>(i));
    }
    out.push_back(std::move(ids));
  }
  return out;
}

Selection select_k(const preprocess::BowCorpus& bow, std::vector<int> candidates, const SelectOptions& options) {
  if (candidates.empty()) throw Error("select_k needs at least one candidate K");
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (int k : candidates) {
    if (k < 2) throw Error("candidate K = " + std::to_string(k) + " is below 2");
  }

  auto evaluate = [&](int k) {
    lda::LdaOptions opt = options.lda;
    opt.num_topics = k;
    try {
      const lda::LdaModel model = lda::fit_lda(bow, opt);
      SelectionPoint point;
      point.num_topics = k;
      point.coherence = umass_coherence(model_top_terms(model, options.top_n), bow, options.top_n).aggregate;
      point.perplexity = lda::perplexity(model, bow);
      return point;
    } catch (const Error& e) {
      throw Error("model selection failed for K = " + std::to_string(k) + ": " + e.what());
    }
  };

  Selection sel;
  if (options.parallel && std::thread::hardware_concurrency() > 1 && candidates.size() > 1) {
    std::vector<std::future<SelectionPoint>> jobs;
    for (int k : candidates) jobs.push_back(std::async(std::launch::async, evaluate, k));
    for (auto& j : jobs) sel.curve.push_back(j.get());
  } else {
    for (int k : candidates) sel.curve.push_back(evaluate(k));
  }
  // Curve is in ascending K, so strict '>' keeps the smaller K on ties.
  const SelectionPoint* best = &sel.curve.front();
  for (const auto& p : sel.curve) {
    if (p.coherence > best->coherence) best = &p;
  }
  sel.best_k = best->num_topics;
  return sel;
}

std::string curve_csv(const Selection& selection) {
  std::string out = "K,coherence,perplexity\n";
  for (const auto& p : selection.curve) {
    out += csv::format_row(
        {std::to_string(p.num_topics), io::format_number(p.coherence), io::format_number(p.perplexity)});
  }
  return out;
}

}  // namespace ideaminer::coherence
