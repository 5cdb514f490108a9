#include <doctest.h>

#include <sstream>

#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/porter_stemmer.hpp"
#include "ideaminer/stopwords.hpp"
#include "ideaminer/unicode.hpp"

using namespace ideaminer;

TEST_CASE("csv reader handles quoting, embedded newlines and CRLF") {
  const auto rows = csv::parse("\xEF\xBB\xBF" "a,b,c\r\n\"x, y\",\"say \"\"hi\"\"\",\"two\nlines\"\r\n,,\n");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv::Row{"a", "b", "c"});
  CHECK(rows[1] == csv::Row{"x, y", "say \"hi\"", "two\nlines"});
  CHECK(rows[2] == csv::Row{"", "", ""});
}

TEST_CASE("csv reader reports record start lines") {
  std::istringstream in("h\n\"multi\nline\"\nnext\n");
  csv::Reader r(in);
  csv::Row row;
  REQUIRE(r.next(row));
  CHECK(r.line() == 1);
  REQUIRE(r.next(row));
  CHECK(r.line() == 2);
  REQUIRE(r.next(row));
  CHECK(row == csv::Row{"next"});
  CHECK(r.line() == 4);
  CHECK_FALSE(r.next(row));
}

TEST_CASE("csv unterminated quote is an error") { CHECK_THROWS_AS(csv::parse("a,\"open\n"), Error); }

TEST_CASE("csv format_row round-trips through the reader") {
  const csv::Row row{"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
  const auto back = csv::parse(csv::format_row(row));
  REQUIRE(back.size() == 1);
  CHECK(back[0] == row);
  CHECK(csv::escape("plain") == "plain");
}

TEST_CASE("title normalization folds case, width and punctuation") {
  CHECK(unicode::normalize_title("Self-Driving  Cars!") == "self driving cars");
  CHECK(unicode::normalize_title("self driving cars") == "self driving cars");
  // Fullwidth letters are compatibility-equivalent to ASCII.
  CHECK(unicode::normalize_title("\xEF\xBC\xA1\xEF\xBC\xA2 test") == "ab test");
  CHECK(unicode::normalize_title("  --  ") == "");
}

TEST_CASE("alphabetic runs drop digits and mixed tokens") {
  CHECK(unicode::alphabetic_runs("LiDAR-based 5G h264 networks, 2018") ==
        std::vector<std::string>{"lidar", "based", "networks"});
  CHECK(unicode::alphabetic_runs("Caf\xC3\xA9 na\xC3\xAFve") == std::vector<std::string>{"caf\xC3\xA9", "na\xC3\xAFve"});
  CHECK(unicode::alphabetic_runs("").empty());
  CHECK(unicode::length("caf\xC3\xA9") == 4);
}

TEST_CASE("porter stemmer matches published examples") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"caresses", "caress"},     {"ponies", "poni"},      {"ties", "ti"},          {"caress", "caress"},
      {"cats", "cat"},            {"feed", "feed"},        {"agreed", "agre"},      {"plastered", "plaster"},
      {"bled", "bled"},           {"motoring", "motor"},   {"sing", "sing"},        {"conflated", "conflat"},
      {"troubled", "troubl"},     {"sized", "size"},       {"hopping", "hop"},      {"tanned", "tan"},
      {"falling", "fall"},        {"hissing", "hiss"},     {"fizzed", "fizz"},      {"failing", "fail"},
      {"filing", "file"},         {"happy", "happi"},      {"sky", "sky"},          {"relational", "relat"},
      {"conditional", "condit"},  {"rational", "ration"},  {"valenci", "valenc"},   {"digitizer", "digit"},
      {"operator", "oper"},       {"feudalism", "feudal"}, {"decisiveness", "decis"}, {"hopefulness", "hope"},
      {"callousness", "callous"}, {"formaliti", "formal"}, {"sensitiviti", "sensit"}, {"triplicate", "triplic"},
      {"formative", "form"},      {"formalize", "formal"}, {"electriciti", "electr"}, {"electrical", "electr"},
      {"hopeful", "hope"},        {"goodness", "good"},    {"revival", "reviv"},    {"allowance", "allow"},
      {"inference", "infer"},     {"airliner", "airlin"},  {"adjustable", "adjust"}, {"defensible", "defens"},
      {"irritant", "irrit"},      {"replacement", "replac"}, {"adjustment", "adjust"}, {"dependent", "depend"},
      {"adoption", "adopt"},      {"homologou", "homolog"}, {"communism", "commun"}, {"activate", "activ"},
      {"angulariti", "angular"},  {"homologous", "homolog"}, {"effective", "effect"}, {"bowdlerize", "bowdler"},
      {"probate", "probat"},      {"rate", "rate"},        {"cease", "ceas"},       {"controll", "control"},
      {"roll", "roll"},           {"generalizations", "gener"}, {"oscillators", "oscil"},
      {"driving", "drive"},       {"cars", "car"},
  };
  for (const auto& [word, stem] : cases) {
    CAPTURE(word);
    CHECK(preprocess::porter_stem(word) == stem);
  }
  CHECK(preprocess::porter_stem("is") == "is");
  CHECK(preprocess::porter_stem("caf\xC3\xA9s") == "caf\xC3\xA9s");
}

TEST_CASE("porter stemming reaches a fixpoint on common vocabulary") {
  for (std::string w : {"driving", "vehicles", "collision", "pedestrians", "sensors", "generalization",
                        "controllers", "communication", "infrastructure", "recognition"}) {
    const auto once = preprocess::porter_stem(w);
    CAPTURE(w);
    CHECK(preprocess::porter_stem(once).size() <= once.size());
  }
}

TEST_CASE("stopword files are lowercased and commented") {
  const auto s = preprocess::parse_stopword_file("# boilerplate\nIEEE\n  Copyright  \n\n");
  CHECK(s == preprocess::StopwordSet{"ieee", "copyright"});
  const auto merged = preprocess::with_extension(s);
  CHECK(merged.count("ieee"));
  CHECK(merged.count("the"));
  CHECK(preprocess::english_stopwords().count("the"));
  CHECK_FALSE(preprocess::english_stopwords().count("lidar"));
}
