#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ideaminer::corpus {

inline constexpr int kMinYear = 1900;
inline constexpr int kMaxYear = 2100;

struct BiblioRecord {
  std::string id;  // normalized DOI, or a synthesized "noid:<batch>:<row>"
  std::string title;
  std::string abstract;
  int year = 0;
  std::string source;

  // Title and abstract joined by a space: the text fed to preprocessing.
  std::string text() const;

  bool operator==(const BiblioRecord&) const = default;
};

// Records plus a year -> positions index covering a contiguous year range.
class Corpus {
 public:
  Corpus() = default;
  // Index spans [min year, max year] of the records. Validates invariants.
  explicit Corpus(std::vector<BiblioRecord> records);
  // Index spans exactly [first_year, last_year]; records must lie inside.
  Corpus(std::vector<BiblioRecord> records, int first_year, int last_year);

  const std::vector<BiblioRecord>& records() const { return records_; }
  const std::map<int, std::vector<size_t>>& slice_index() const { return slice_index_; }
  int first_year() const { return first_year_; }
  int last_year() const { return last_year_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Records grouped year by year, stable within a year.
  std::vector<BiblioRecord> records_by_slice() const;
  std::vector<size_t> slice_sizes() const;

 private:
  void build_index();

  std::vector<BiblioRecord> records_;
  std::map<int, std::vector<size_t>> slice_index_;
  int first_year_ = 0;
  int last_year_ = -1;
};

// Column names. An empty name leaves the field unmapped; title and year
// must always be mapped.
struct FieldMap {
  std::string title = "Title";
  std::string abstract = "Abstract";
  std::string year = "Year";
  std::string id = "DOI";
  std::string source = "Source title";
};

struct FileParseStats {
  std::string path;
  size_t parsed = 0;
  size_t skipped = 0;
};

struct ParseReport {
  std::vector<FileParseStats> files;
  size_t parsed = 0;
  size_t skipped = 0;
};

struct ParseResult {
  std::vector<BiblioRecord> records;  // file order; may hold duplicates
  ParseReport report;
};

// Parses CSV batches in path order. Rows with an empty title or a year that
// is not an integer in [1900, 2100] are skipped and counted.
ParseResult parse_bibliographic_csv(const std::vector<std::filesystem::path>& paths,
                                    const FieldMap& field_map = {});
// Single in-memory batch; `name` labels the batch in the report.
ParseResult parse_bibliographic_csv_text(const std::vector<std::pair<std::string, std::string>>& batches,
                                         const FieldMap& field_map = {});

std::string normalize_doi(std::string_view doi);

struct DedupReport {
  size_t input = 0;
  size_t removed_by_id = 0;
  size_t removed_by_title = 0;
  size_t kept = 0;
};

struct DedupResult {
  Corpus corpus;
  DedupReport report;
};

// Equal non-empty id collapses to the first occurrence; otherwise equal
// (normalized title, year) collapses to the first occurrence.
DedupResult deduplicate(const std::vector<BiblioRecord>& records);
DedupResult deduplicate(const Corpus& corpus);

struct BinResult {
  Corpus corpus;
  size_t dropped = 0;
  std::vector<std::string> warnings;  // one per empty year bucket
};

BinResult bin_time_slices(const Corpus& corpus, int from_year, int to_year);

// Canonical JSON-lines corpus file: one object per line with keys
// id, title, abstract, year, source.
std::string to_jsonl(const Corpus& corpus);
Corpus from_jsonl(std::string_view text);

// CSV serialization using the default column names of FieldMap.
std::string to_csv(const Corpus& corpus);

}  // namespace ideaminer::corpus
