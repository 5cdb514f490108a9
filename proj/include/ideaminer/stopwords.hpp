#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

namespace ideaminer::preprocess {

using StopwordSet = std::unordered_set<std::string>;

// Bundled English list.
const StopwordSet& english_stopwords();

// One term per line; '#' starts a comment; blank lines ignored. Terms are
// lowercased so they match tokenizer output.
StopwordSet parse_stopword_file(std::string_view text);
StopwordSet load_stopword_file(const std::filesystem::path& path);

// Bundled list plus the given extension terms.
StopwordSet with_extension(const StopwordSet& extension);

}  // namespace ideaminer::preprocess
