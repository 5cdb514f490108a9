#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "ideaminer/corpus.hpp"
#include "ideaminer/stopwords.hpp"

namespace ideaminer::preprocess {

enum class RootMode { kStem, kLemma };

RootMode parse_root_mode(std::string_view name);
std::string_view to_string(RootMode mode);

// surface form -> lemma. Missing entries leave the token unchanged.
using LemmaTable = std::unordered_map<std::string, std::string>;

// TSV "surface<TAB>lemma"; '#' comments and blank lines ignored.
LemmaTable parse_lemma_table(std::string_view text);
LemmaTable load_lemma_table(const std::filesystem::path& path);

class Normalizer {
 public:
  Normalizer(StopwordSet stopwords, RootMode mode, LemmaTable lemmas = {});

  // Lowercased alphabetic runs of >= 3 code points, stopwords removed, each
  // reduced to its root form. Empty text yields no tokens.
  std::vector<std::string> tokenize(std::string_view text) const;

  // Same pipeline without the root-form step.
  std::vector<std::string> tokenize_surface(std::string_view text) const;

  std::string root(const std::string& token) const;

  RootMode mode() const { return mode_; }

 private:
  StopwordSet stopwords_;
  RootMode mode_;
  LemmaTable lemmas_;
};

// Tokenized documents in slice order with the per-slice document counts.
struct TokenCorpus {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> doc_ids;
  std::vector<size_t> slice_sizes;
  std::vector<int> slice_years;
};

TokenCorpus tokenize_corpus(const corpus::Corpus& corpus, const Normalizer& normalizer);

struct BigramOptions {
  size_t min_count = 5;
  double threshold = 10.0;
};

struct BigramStats {
  std::string first;
  std::string second;
  size_t count = 0;
  double score = 0.0;
};

// Adjacent pairs (a, b) with count(ab) >= min_count and
// (count(ab) - min_count) * N / (count(a) * count(b)) > threshold, N being the
// total token count, get "a_b" appended once per occurrence. Unigrams stay.
std::vector<std::vector<std::string>> detect_bigrams(const std::vector<std::vector<std::string>>& docs,
                                                     const BigramOptions& options = {},
                                                     std::vector<BigramStats>* accepted = nullptr);

struct Dictionary {
  std::vector<std::string> terms;  // index -> term, lexicographic
  std::unordered_map<std::string, uint32_t> term_to_id;
  std::vector<uint32_t> doc_freq;
  size_t num_docs = 0;

  size_t size() const { return terms.size(); }
  // Returns -1 for out-of-vocabulary terms.
  int64_t find(const std::string& term) const;
};

struct DictionaryOptions {
  size_t min_doc_count = 100;
  double max_doc_fraction = 0.95;
};

// Keeps terms with min_doc_count <= df <= max_doc_fraction * num_docs, both
// bounds inclusive. Throws when nothing survives.
Dictionary build_dictionary(const std::vector<std::vector<std::string>>& docs,
                            const DictionaryOptions& options = {});

struct TermCount {
  uint32_t term = 0;
  uint32_t count = 0;
  bool operator==(const TermCount&) const = default;
};

using SparseDoc = std::vector<TermCount>;

struct BowCorpus {
  std::vector<SparseDoc> docs;  // slice by slice, term ids ascending
  std::vector<size_t> slice_sizes;
  std::vector<int> slice_years;  // label of each slice
  std::vector<std::string> doc_ids;
  size_t vocab_size = 0;

  size_t num_slices() const { return slice_sizes.size(); }
  uint64_t total_tokens() const;
  // [begin, end) document range of slice t.
  std::pair<size_t, size_t> slice_range(size_t t) const;
};

struct VectorizeResult {
  BowCorpus bow;
  size_t dropped_docs = 0;
};

VectorizeResult vectorize(const TokenCorpus& tokens, const Dictionary& dictionary);

struct FrequencyRow {
  std::string term;
  uint64_t count = 0;
  uint64_t doc_freq = 0;
  bool operator==(const FrequencyRow&) const = default;
};

// Top terms by total count; ties broken lexicographically.
std::vector<FrequencyRow> frequency_report(const std::vector<std::vector<std::string>>& docs, size_t top_n);
std::string frequency_csv(const std::vector<FrequencyRow>& rows);

// JSON persistence for the dictionary and bag-of-words corpus.
std::string dictionary_to_json(const Dictionary& dictionary);
Dictionary dictionary_from_json(std::string_view text);
std::string bow_to_json(const BowCorpus& bow);
BowCorpus bow_from_json(std::string_view text);

}  // namespace ideaminer::preprocess
