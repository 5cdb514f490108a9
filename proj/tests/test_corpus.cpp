#include <doctest.h>

#include "ideaminer/corpus.hpp"
#include "ideaminer/error.hpp"

using namespace ideaminer;
using corpus::BiblioRecord;

namespace {

corpus::ParseResult parse(const std::string& text, const corpus::FieldMap& map = {}) {
  return corpus::parse_bibliographic_csv_text({{"batch.csv", text}}, map);
}

BiblioRecord rec(std::string id, std::string title, int year) {
  BiblioRecord r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.year = year;
  return r;
}

}  // namespace

TEST_CASE("parse skips rows with a bad year or empty title and counts them") {
  const auto r = parse("Title,Abstract,Year,DOI,Source title\nA,x,n/a,,\nB,y,2015,10.1/b,J\n,z,2015,,\n");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].title == "B");
  CHECK(r.records[0].id == "10.1/b");
  CHECK(r.report.parsed == 1);
  CHECK(r.report.skipped == 2);
  REQUIRE(r.report.files.size() == 1);
  CHECK(r.report.files[0].path == "batch.csv");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(parse("Title,Abstract,Year,DOI,Source title\n"), doctest::Contains("zero rows parsed"), Error);
  CHECK_THROWS_AS(parse("Name,Year\nA,2015\n"), Error);
  CHECK_THROWS_AS(corpus::parse_bibliographic_csv({"/nonexistent/file.csv"}), Error);
}

TEST_CASE("years outside [1900, 2100] are skipped") {
  const auto r = parse("Title,Year\nA,1899\nB,2101\nC,1900\nD,2100\n", {"Title", "", "Year", "", ""});
  CHECK(r.records.size() == 2);
  CHECK(r.report.skipped == 2);
}

TEST_CASE("field map renames columns and synthesizes ids") {
  const corpus::FieldMap map{"Document Title", "", "PubYear", "", ""};
  const auto r = parse("PubYear,Document Title\n2012,Alpha\n2013,Beta\n", map);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].title == "Alpha");
  CHECK(r.records[1].year == 2013);
  CHECK(r.records[0].id != r.records[1].id);
  CHECK(r.records[0].id.rfind("noid:", 0) == 0);
}

TEST_CASE("batches concatenate in file order") {
  const auto r = corpus::parse_bibliographic_csv_text(
      {{"one.csv", "Title,Year\nA,2010\nB,2011\n"}, {"two.csv", "Title,Year\nC,2009\n"}},
      {"Title", "", "Year", "", ""});
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[2].title == "C");
  CHECK(r.report.files.size() == 2);
}

TEST_CASE("DOI normalization") {
  CHECK(corpus::normalize_doi(" https://doi.org/10.1109/ABC.1 ") == "10.1109/abc.1");
  CHECK(corpus::normalize_doi("doi:10.1109/abc.1") == "10.1109/abc.1");
  CHECK(corpus::normalize_doi("") == "");
}

TEST_CASE("dedup by id keeps the first occurrence") {
  const auto d = corpus::deduplicate(std::vector<BiblioRecord>{rec("10.1/x", "First", 2015), rec("10.1/x", "Second", 2016)});
  REQUIRE(d.corpus.size() == 1);
  CHECK(d.corpus.records()[0].title == "First");
  CHECK(d.report.removed_by_id == 1);
}

TEST_CASE("dedup by normalized title and year") {
  const auto d = corpus::deduplicate(
      std::vector<BiblioRecord>{rec("noid:0:1", "Self-Driving  Cars!", 2015), rec("noid:0:2", "self driving cars", 2015)});
  CHECK(d.corpus.size() == 1);
  CHECK(d.report.removed_by_title == 1);
  const auto e = corpus::deduplicate(
      std::vector<BiblioRecord>{rec("noid:0:1", "Same title", 2015), rec("noid:0:2", "Same title", 2016)});
  CHECK(e.corpus.size() == 2);
}

TEST_CASE("dedup is idempotent and order preserving") {
  std::vector<BiblioRecord> rs;
  for (int i = 0; i < 40; ++i) {
    rs.push_back(rec(i % 3 == 0 ? "10.1/" + std::to_string(i % 7) : "noid:0:" + std::to_string(i),
                     "Title " + std::to_string(i % 11), 2010 + i % 4));
  }
  const auto once = corpus::deduplicate(rs);
  const auto twice = corpus::deduplicate(once.corpus);
  CHECK(twice.corpus.records() == once.corpus.records());
  CHECK(twice.report.removed_by_id + twice.report.removed_by_title == 0);
  CHECK(once.report.kept + once.report.removed_by_id + once.report.removed_by_title == rs.size());
  // Every kept record appears in input order.
  size_t pos = 0;
  for (const auto& r : once.corpus.records()) {
    while (pos < rs.size() && !(rs[pos] == r)) ++pos;
    CHECK(pos < rs.size());
  }
}

TEST_CASE("binning covers every year of the range") {
  std::vector<BiblioRecord> rs;
  for (int y = 2009; y <= 2018; ++y) rs.push_back(rec("id" + std::to_string(y), "T" + std::to_string(y), y));
  const auto b = corpus::bin_time_slices(corpus::Corpus(rs), 2009, 2018);
  CHECK(b.corpus.slice_index().size() == 10);
  CHECK(b.warnings.empty());

  const auto single = corpus::bin_time_slices(corpus::Corpus({rec("a", "A", 2015)}), 2015, 2015);
  CHECK(single.corpus.slice_sizes() == std::vector<size_t>{1});

  const auto gap = corpus::bin_time_slices(corpus::Corpus({rec("a", "A", 2010), rec("b", "B", 2012)}), 2010, 2012);
  CHECK(gap.corpus.slice_sizes() == std::vector<size_t>{1, 0, 1});
  REQUIRE(gap.warnings.size() == 1);
  CHECK(gap.warnings[0].find("2011") != std::string::npos);

  const auto drop = corpus::bin_time_slices(corpus::Corpus({rec("a", "A", 2008), rec("b", "B", 2012)}), 2010, 2012);
  CHECK(drop.dropped == 1);
  CHECK_THROWS_AS(corpus::bin_time_slices(corpus::Corpus({rec("a", "A", 2008)}), 2010, 2012), Error);
  CHECK_THROWS_AS(corpus::bin_time_slices(corpus::Corpus({rec("a", "A", 2008)}), 2012, 2010), Error);
}

TEST_CASE("slice sizes sum to the record count") {
  std::vector<BiblioRecord> rs;
  for (int i = 0; i < 57; ++i) rs.push_back(rec("id" + std::to_string(i), "T", 2000 + (i * 7) % 9));
  const auto b = corpus::bin_time_slices(corpus::Corpus(rs), 2000, 2010);
  size_t total = 0;
  for (size_t s : b.corpus.slice_sizes()) total += s;
  CHECK(total == b.corpus.size());
  CHECK(b.corpus.slice_index().size() == 11);
  const auto by_slice = b.corpus.records_by_slice();
  CHECK(std::is_sorted(by_slice.begin(), by_slice.end(), [](auto& a, auto& c) { return a.year < c.year; }));
}

TEST_CASE("corpus invariants") {
  CHECK_THROWS_AS(corpus::Corpus({rec("a", "A", 2010), rec("a", "B", 2011)}), Error);
  CHECK_THROWS_AS(corpus::Corpus({rec("", "A", 2010)}), Error);
  CHECK_THROWS_AS(corpus::Corpus({rec("a", "", 2010)}), Error);
  CHECK_THROWS_AS(corpus::Corpus({rec("a", "A", 1800)}), Error);
}

TEST_CASE("jsonl and csv round-trips preserve records") {
  const std::string text =
      "Title,Abstract,Year,DOI,Source title\n"
      "\"Quoted, title\",\"Line one\nline two\",2015,10.1/a,Venue\n"
      "Caf\xC3\xA9 study,,2016,10.1/b,\n";
  const auto parsed = parse(text);
  const corpus::Corpus c(parsed.records);
  const auto back = corpus::from_jsonl(corpus::to_jsonl(c));
  CHECK(back.records() == c.records());
  const auto reparsed = parse(corpus::to_csv(c));
  CHECK(reparsed.records == parsed.records);
}
