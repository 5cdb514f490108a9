#include "ideaminer/stopwords.hpp"

#include <sstream>

#include "ideaminer/io.hpp"
#include "ideaminer/unicode.hpp"

namespace ideaminer::preprocess {

const StopwordSet& english_stopwords() {
  static const StopwordSet kWords = {
      "a", "about", "above", "after", "again", "against", "ain", "all", "also", "am", "an", "and",
      "any", "are", "aren", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "couldn", "did", "didn", "do", "does",
      "doesn", "doing", "don", "down", "during", "each", "etc", "few", "for", "from", "further",
      "had", "hadn", "has", "hasn", "have", "haven", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "however", "i", "if", "in", "into", "is", "isn",
      "it", "its", "itself", "just", "ll", "may", "me", "might", "mightn", "more", "most",
      "must", "mustn", "my", "myself", "needn", "no", "nor", "not", "now", "of", "off", "on",
      "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same",
      "shall", "shan", "she", "should", "shouldn", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these", "they", "this",
      "those", "through", "thus", "to", "too", "under", "until", "up", "upon", "very", "via",
      "was", "wasn", "we", "were", "weren", "what", "when", "where", "whereas", "which",
      "while", "who", "whom", "why", "will", "with", "within", "won", "would", "wouldn", "yet",
      "you", "your", "yours", "yourself", "yourselves", "paper", "study", "using", "based",
      "results", "proposed", "approach", "method", "show", "shows", "used", "use", "new"};
  return kWords;
}

StopwordSet parse_stopword_file(std::string_view text) {
  StopwordSet out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (auto& run : unicode::alphabetic_runs(line)) out.insert(std::move(run));
  }
  return out;
}

StopwordSet load_stopword_file(const std::filesystem::path& path) {
  return parse_stopword_file(io::read_file(path));
}

StopwordSet with_extension(const StopwordSet& extension) {
  StopwordSet out = english_stopwords();
  out.insert(extension.begin(), extension.end());
  return out;
}

}  // namespace ideaminer::preprocess
