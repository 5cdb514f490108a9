#include "ideaminer/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "ideaminer/error.hpp"

namespace ideaminer::unicode {
namespace {

icu::UnicodeString normalized(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFKC normalizer unavailable");
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString out = nfkc->normalize(src, status);
  if (U_FAILURE(status)) throw Error("NFKC normalization failed");
  return out;
}

void append_utf8(std::string& out, UChar32 cp) {
  icu::UnicodeString tmp(cp);
  tmp.toUTF8String(out);
}

}  // namespace

std::string nfkc(std::string_view utf8) {
  std::string out;
  normalized(utf8).toUTF8String(out);
  return out;
}

std::string normalize_title(std::string_view utf8) {
  icu::UnicodeString text = normalized(utf8);
  text.foldCase();
  std::string out;
  bool pending_space = false;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 cp = text.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isalnum(cp)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      append_utf8(out, cp);
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::vector<std::string> alphabetic_runs(std::string_view utf8) {
  icu::UnicodeString text = normalized(utf8);
  text.toLower();
  std::vector<std::string> runs;
  std::string current;
  bool tainted = false;  // run is adjacent to a digit
  auto flush = [&] {
    if (!current.empty() && !tainted) runs.push_back(current);
    current.clear();
    tainted = false;
  };
  for (int32_t i = 0; i < text.length();) {
    const UChar32 cp = text.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isalpha(cp)) {
      append_utf8(current, cp);
    } else if (u_isdigit(cp)) {
      tainted = true;
      // Digits glue the token together: "h264x" is one mixed token.
      while (i < text.length()) {
        const UChar32 next = text.char32At(i);
        if (!u_isalnum(next)) break;
        i += U16_LENGTH(next);
      }
      flush();
    } else {
      flush();
    }
  }
  flush();
  return runs;
}

size_t length(std::string_view utf8) {
  size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

}  // namespace ideaminer::unicode
