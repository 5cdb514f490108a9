#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ideaminer::unicode {

// NFKC-normalizes UTF-8 text. Invalid sequences become U+FFFD.
std::string nfkc(std::string_view utf8);

// NFKC, then lowercase, then every run of non-alphanumeric code points
// collapses to a single space; leading and trailing space trimmed.
std::string normalize_title(std::string_view utf8);

// NFKC, then lowercase, then the maximal runs of alphabetic code points.
// Digits and other characters separate runs; runs touching a digit are
// dropped so that mixed alphanumerics ("5g", "h264") produce nothing.
std::vector<std::string> alphabetic_runs(std::string_view utf8);

// Number of code points in valid UTF-8.
size_t length(std::string_view utf8);

bool is_ascii(std::string_view s);

}  // namespace ideaminer::unicode
