#include "ideaminer/preprocess.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/porter_stemmer.hpp"
#include "ideaminer/unicode.hpp"

namespace ideaminer::preprocess {

RootMode parse_root_mode(std::string_view name) {
  if (name == "stem") return RootMode::kStem;
  if (name == "lemma") return RootMode::kLemma;
  throw Error("unknown preprocessing mode '" + std::string(name) + "' (expected stem or lemma)");
}

std::string_view to_string(RootMode mode) { return mode == RootMode::kStem ? "stem" : "lemma"; }

LemmaTable parse_lemma_table(std::string_view text) {
  LemmaTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("lemma table line " + std::to_string(line_no) + ": expected surface<TAB>lemma");
    }
    auto surface = unicode::alphabetic_runs(line.substr(0, tab));
    auto lemma = unicode::alphabetic_runs(line.substr(tab + 1));
    if (surface.size() != 1 || lemma.size() != 1) {
      throw Error("lemma table line " + std::to_string(line_no) + ": each side must be a single word");
    }
    table[surface.front()] = lemma.front();
  }
  return table;
}

LemmaTable load_lemma_table(const std::filesystem::path& path) {
  return parse_lemma_table(io::read_file(path));
}

Normalizer::Normalizer(StopwordSet stopwords, RootMode mode, LemmaTable lemmas)
    : stopwords_(std::move(stopwords)), mode_(mode), lemmas_(std::move(lemmas)) {}

std::vector<std::string> Normalizer::tokenize_surface(std::string_view text) const {
  std::vector<std::string> out;
  for (auto& run : unicode::alphabetic_runs(text)) {
    if (unicode::length(run) < 3 || stopwords_.count(run)) continue;
    out.push_back(std::move(run));
  }
  return out;
}

std::string Normalizer::root(const std::string& token) const {
  if (mode_ == RootMode::kStem) return porter_stem(token);
  const auto it = lemmas_.find(token);
  return it == lemmas_.end() ? token : it->second;
}

std::vector<std::string> Normalizer::tokenize(std::string_view text) const {
  auto tokens = tokenize_surface(text);
  for (auto& t : tokens) t = root(t);
  return tokens;
}

TokenCorpus tokenize_corpus(const corpus::Corpus& corpus, const Normalizer& normalizer) {
  TokenCorpus out;
  for (const auto& [year, positions] : corpus.slice_index()) {
    out.slice_years.push_back(year);
    out.slice_sizes.push_back(positions.size());
    for (size_t p : positions) {
      const auto& rec = corpus.records()[p];
      out.docs.push_back(normalizer.tokenize(rec.text()));
      out.doc_ids.push_back(rec.id);
    }
  }
  return out;
}

std::vector<std::vector<std::string>> detect_bigrams(const std::vector<std::vector<std::string>>& docs,
                                                     const BigramOptions& options,
                                                     std::vector<BigramStats>* accepted) {
  if (options.min_count < 1) throw Error("bigram min_count must be >= 1");
  std::unordered_map<std::string, size_t> unigram;
  std::map<std::pair<std::string, std::string>, size_t> pairs;
  size_t total = 0;
  for (const auto& doc : docs) {
    total += doc.size();
    for (size_t i = 0; i < doc.size(); ++i) {
      ++unigram[doc[i]];
      if (i + 1 < doc.size()) ++pairs[{doc[i], doc[i + 1]}];
    }
  }
  std::map<std::pair<std::string, std::string>, std::string> phrases;
  const double n_tokens = static_cast<double>(total);
  for (const auto& [pair, count] : pairs) {
    if (count < options.min_count) continue;
    const double score = (static_cast<double>(count) - static_cast<double>(options.min_count)) * n_tokens /
                         (static_cast<double>(unigram[pair.first]) * static_cast<double>(unigram[pair.second]));
    if (score > options.threshold) {
      phrases.emplace(pair, pair.first + "_" + pair.second);
      if (accepted) accepted->push_back({pair.first, pair.second, count, score});
    }
  }
  std::vector<std::vector<std::string>> out = docs;
  if (phrases.empty()) return out;
  for (auto& doc : out) {
    const size_t n = doc.size();
    for (size_t i = 0; i + 1 < n; ++i) {
      const auto it = phrases.find({doc[i], doc[i + 1]});
      if (it != phrases.end()) doc.push_back(it->second);
    }
  }
  return out;
}

int64_t Dictionary::find(const std::string& term) const {
  const auto it = term_to_id.find(term);
  return it == term_to_id.end() ? -1 : static_cast<int64_t>(it->second);
}

Dictionary build_dictionary(const std::vector<std::vector<std::string>>& docs, const DictionaryOptions& options) {
  if (options.min_doc_count < 1) throw Error("min_doc_count must be >= 1");
  if (!(options.max_doc_fraction > 0.0 && options.max_doc_fraction <= 1.0)) {
    throw Error("max_doc_fraction must lie in (0, 1]");
  }
  std::map<std::string, uint32_t> df;
  for (const auto& doc : docs) {
    std::vector<std::string> unique(doc.begin(), doc.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (auto& t : unique) ++df[t];
  }
  Dictionary dict;
  dict.num_docs = docs.size();
  const double max_df = options.max_doc_fraction * static_cast<double>(docs.size());
  for (const auto& [term, count] : df) {
    if (count < options.min_doc_count || static_cast<double>(count) > max_df) continue;
    dict.term_to_id.emplace(term, static_cast<uint32_t>(dict.terms.size()));
    dict.terms.push_back(term);
    dict.doc_freq.push_back(count);
  }
  if (dict.terms.empty()) {
    throw Error("dictionary is empty after filtering (" + std::to_string(df.size()) + " candidate terms, " +
                std::to_string(docs.size()) + " documents); lower min_doc_count (currently " +
                std::to_string(options.min_doc_count) + ") or raise max_doc_fraction");
  }
  return dict;
}

uint64_t BowCorpus::total_tokens() const {
  uint64_t n = 0;
  for (const auto& doc : docs) {
    for (const auto& tc : doc) n += tc.count;
  }
  return n;
}

std::pair<size_t, size_t> BowCorpus::slice_range(size_t t) const {
  size_t begin = 0;
  for (size_t s = 0; s < t; ++s) begin += slice_sizes[s];
  return {begin, begin + slice_sizes[t]};
}

VectorizeResult vectorize(const TokenCorpus& tokens, const Dictionary& dictionary) {
  if (dictionary.terms.empty()) throw Error("cannot vectorize with an empty dictionary");
  VectorizeResult result;
  BowCorpus& bow = result.bow;
  bow.vocab_size = dictionary.size();
  bow.slice_years = tokens.slice_years;
  size_t doc = 0;
  for (size_t slice_size : tokens.slice_sizes) {
    size_t kept = 0;
    for (size_t i = 0; i < slice_size; ++i, ++doc) {
      std::map<uint32_t, uint32_t> counts;
      for (const auto& t : tokens.docs[doc]) {
        const int64_t id = dictionary.find(t);
        if (id >= 0) ++counts[static_cast<uint32_t>(id)];
      }
      if (counts.empty()) {
        ++result.dropped_docs;
        continue;
      }
      SparseDoc sparse;
      sparse.reserve(counts.size());
      for (const auto& [id, c] : counts) sparse.push_back({id, c});
      bow.docs.push_back(std::move(sparse));
      bow.doc_ids.push_back(doc < tokens.doc_ids.size() ? tokens.doc_ids[doc] : std::to_string(doc));
      ++kept;
    }
    bow.slice_sizes.push_back(kept);
  }
  if (doc != tokens.docs.size()) throw Error("token corpus slice sizes do not cover its documents");
  if (bow.docs.empty()) throw Error("every document is empty after vocabulary filtering");
  return result;
}

std::vector<FrequencyRow> frequency_report(const std::vector<std::vector<std::string>>& docs, size_t top_n) {
  if (top_n < 1) throw Error("top_n must be >= 1");
  std::unordered_map<std::string, FrequencyRow> rows;
  for (const auto& doc : docs) {
    std::unordered_map<std::string, uint64_t> local;
    for (const auto& t : doc) ++local[t];
    for (const auto& [t, c] : local) {
      auto& row = rows[t];
      row.term = t;
      row.count += c;
      row.doc_freq += 1;
    }
  }
  std::vector<FrequencyRow> out;
  out.reserve(rows.size());
  for (auto& [t, row] : rows) out.push_back(std::move(row));
  std::sort(out.begin(), out.end(), [](const FrequencyRow& a, const FrequencyRow& b) {
    return a.count != b.count ? a.count > b.count : a.term < b.term;
  });
  if (out.size() > top_n) out.resize(top_n);
  return out;
}

std::string frequency_csv(const std::vector<FrequencyRow>& rows) {
  std::string out = "term,count,doc_freq\n";
  for (const auto& r : rows) {
    out += csv::format_row({r.term, std::to_string(r.count), std::to_string(r.doc_freq)});
  }
  return out;
}

std::string dictionary_to_json(const Dictionary& dictionary) {
  nlohmann::ordered_json j;
  j["format"] = "ideaminer.dictionary";
  j["version"] = 1;
  j["num_docs"] = dictionary.num_docs;
  j["terms"] = dictionary.terms;
  j["doc_freq"] = dictionary.doc_freq;
  return j.dump() + "\n";
}

Dictionary dictionary_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ideaminer.dictionary" || j.value("version", 0) != 1) {
    throw Error("not an ideaminer dictionary (version 1) file");
  }
  Dictionary d;
  d.num_docs = j.at("num_docs").get<size_t>();
  d.terms = j.at("terms").get<std::vector<std::string>>();
  d.doc_freq = j.at("doc_freq").get<std::vector<uint32_t>>();
  if (d.doc_freq.size() != d.terms.size()) throw Error("dictionary terms/doc_freq length mismatch");
  for (uint32_t i = 0; i < d.terms.size(); ++i) d.term_to_id.emplace(d.terms[i], i);
  return d;
}

std::string bow_to_json(const BowCorpus& bow) {
  nlohmann::ordered_json j;
  j["format"] = "ideaminer.bow";
  j["version"] = 1;
  j["vocab_size"] = bow.vocab_size;
  j["slice_years"] = bow.slice_years;
  j["slice_sizes"] = bow.slice_sizes;
  j["doc_ids"] = bow.doc_ids;
  auto docs = nlohmann::ordered_json::array();
  for (const auto& d : bow.docs) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& tc : d) arr.push_back({tc.term, tc.count});
    docs.push_back(std::move(arr));
  }
  j["docs"] = std::move(docs);
  return j.dump() + "\n";
}

BowCorpus bow_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ideaminer.bow" || j.value("version", 0) != 1) {
    throw Error("not an ideaminer bag-of-words (version 1) file");
  }
  BowCorpus bow;
  bow.vocab_size = j.at("vocab_size").get<size_t>();
  bow.slice_years = j.at("slice_years").get<std::vector<int>>();
  bow.slice_sizes = j.at("slice_sizes").get<std::vector<size_t>>();
  bow.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
  for (const auto& d : j.at("docs")) {
    SparseDoc doc;
    for (const auto& tc : d) doc.push_back({tc.at(0).get<uint32_t>(), tc.at(1).get<uint32_t>()});
    bow.docs.push_back(std::move(doc));
  }
  return bow;
}

}  // namespace ideaminer::preprocess
