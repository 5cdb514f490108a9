#include "ideaminer/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/unicode.hpp"

namespace ideaminer::corpus {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_year(std::string_view raw, int& year) {
  const std::string s = trim(raw);
  if (s.empty() || s.size() > 4) return false;
  int value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  if (value < kMinYear || value > kMaxYear) return false;
  year = value;
  return true;
}

void validate(const BiblioRecord& r) {
  if (r.id.empty()) throw Error("record with empty id");
  if (r.title.empty()) throw Error("record " + r.id + " has an empty title");
  if (r.year < kMinYear || r.year > kMaxYear) {
    throw Error("record " + r.id + " has year outside [1900, 2100]: " + std::to_string(r.year));
  }
}

struct ColumnIndex {
  int title = -1, abstract = -1, year = -1, id = -1, source = -1;
};

ColumnIndex resolve_columns(const csv::Row& header, const FieldMap& map, const std::string& path) {
  auto find = [&](const std::string& name, bool required, const char* field) -> int {
    if (name.empty()) {
      if (required) throw Error(std::string("field map leaves required field '") + field + "' unmapped");
      return -1;
    }
    for (size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return static_cast<int>(i);
    }
    throw Error(path + ": header is missing mapped column '" + name + "' (field " + field + ")");
  };
  ColumnIndex idx;
  idx.title = find(map.title, true, "title");
  idx.year = find(map.year, true, "year");
  idx.abstract = find(map.abstract, false, "abstract");
  idx.id = find(map.id, false, "id");
  idx.source = find(map.source, false, "source");
  return idx;
}

std::string cell(const csv::Row& row, int idx) {
  if (idx < 0 || static_cast<size_t>(idx) >= row.size()) return {};
  return trim(row[static_cast<size_t>(idx)]);
}

void parse_batch(std::istream& in, const std::string& name, size_t batch, const FieldMap& map,
                 std::vector<BiblioRecord>& out, FileParseStats& stats) {
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) throw Error(name + ": empty file (no header row)");
  const ColumnIndex cols = resolve_columns(header, map, name);
  csv::Row row;
  size_t row_no = 0;
  while (reader.next(row)) {
    ++row_no;
    if (row.size() == 1 && trim(row[0]).empty()) continue;  // blank line
    BiblioRecord rec;
    rec.title = cell(row, cols.title);
    if (rec.title.empty() || !parse_year(cell(row, cols.year), rec.year)) {
      ++stats.skipped;
      continue;
    }
    rec.abstract = cell(row, cols.abstract);
    rec.source = cell(row, cols.source);
    rec.id = normalize_doi(cell(row, cols.id));
    if (rec.id.empty()) rec.id = "noid:" + std::to_string(batch) + ":" + std::to_string(row_no);
    out.push_back(std::move(rec));
    ++stats.parsed;
  }
}

ParseResult finish(std::vector<BiblioRecord> records, ParseReport report) {
  for (const auto& f : report.files) {
    report.parsed += f.parsed;
    report.skipped += f.skipped;
  }
  if (records.empty()) throw Error("zero rows parsed across all input files");
  return {std::move(records), std::move(report)};
}

}  // namespace

std::string BiblioRecord::text() const {
  if (abstract.empty()) return title;
  return title + " " + abstract;
}

Corpus::Corpus(std::vector<BiblioRecord> records) : records_(std::move(records)) {
  if (!records_.empty()) {
    auto [lo, hi] = std::minmax_element(records_.begin(), records_.end(),
                                        [](const auto& a, const auto& b) { return a.year < b.year; });
    first_year_ = lo->year;
    last_year_ = hi->year;
  }
  build_index();
}

Corpus::Corpus(std::vector<BiblioRecord> records, int first_year, int last_year)
    : records_(std::move(records)), first_year_(first_year), last_year_(last_year) {
  if (first_year > last_year) throw Error("slice range is empty");
  build_index();
}

void Corpus::build_index() {
  std::unordered_set<std::string> ids;
  for (const auto& r : records_) {
    validate(r);
    if (!ids.insert(r.id).second) throw Error("duplicate record id in corpus: " + r.id);
  }
  slice_index_.clear();
  if (last_year_ < first_year_) return;
  for (int y = first_year_; y <= last_year_; ++y) slice_index_[y];
  for (size_t i = 0; i < records_.size(); ++i) {
    const int y = records_[i].year;
    if (y < first_year_ || y > last_year_) {
      throw Error("record " + records_[i].id + " lies outside the slice range");
    }
    slice_index_[y].push_back(i);
  }
}

std::vector<BiblioRecord> Corpus::records_by_slice() const {
  std::vector<BiblioRecord> out;
  out.reserve(records_.size());
  for (const auto& [year, positions] : slice_index_) {
    for (size_t p : positions) out.push_back(records_[p]);
  }
  return out;
}

std::vector<size_t> Corpus::slice_sizes() const {
  std::vector<size_t> sizes;
  for (const auto& [year, positions] : slice_index_) sizes.push_back(positions.size());
  return sizes;
}

std::string normalize_doi(std::string_view doi) {
  std::string s = trim(doi);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                  "http://dx.doi.org/", "doi:"}) {
    if (s.starts_with(prefix)) {
      s.erase(0, prefix.size());
      break;
    }
  }
  return trim(s);
}

ParseResult parse_bibliographic_csv(const std::vector<std::filesystem::path>& paths,
                                    const FieldMap& field_map) {
  std::vector<BiblioRecord> records;
  ParseReport report;
  for (size_t b = 0; b < paths.size(); ++b) {
    std::ifstream in(paths[b], std::ios::binary);
    if (!in) throw Error("cannot read input file: " + paths[b].string());
    FileParseStats stats{paths[b].string()};
    parse_batch(in, paths[b].string(), b, field_map, records, stats);
    report.files.push_back(stats);
  }
  return finish(std::move(records), std::move(report));
}

ParseResult parse_bibliographic_csv_text(const std::vector<std::pair<std::string, std::string>>& batches,
                                         const FieldMap& field_map) {
  std::vector<BiblioRecord> records;
  ParseReport report;
  for (size_t b = 0; b < batches.size(); ++b) {
    std::istringstream in(batches[b].second);
    FileParseStats stats{batches[b].first};
    parse_batch(in, batches[b].first, b, field_map, records, stats);
    report.files.push_back(stats);
  }
  return finish(std::move(records), std::move(report));
}

DedupResult deduplicate(const std::vector<BiblioRecord>& records) {
  DedupReport report;
  report.input = records.size();
  std::unordered_set<std::string> seen_ids;
  std::unordered_set<std::string> seen_titles;
  std::vector<BiblioRecord> kept;
  for (const auto& r : records) {
    if (!r.id.empty() && seen_ids.count(r.id)) {
      ++report.removed_by_id;
      continue;
    }
    const std::string key = unicode::normalize_title(r.title) + "\x1f" + std::to_string(r.year);
    if (seen_titles.count(key)) {
      ++report.removed_by_title;
      continue;
    }
    seen_ids.insert(r.id);
    seen_titles.insert(key);
    kept.push_back(r);
  }
  report.kept = kept.size();
  if (kept.empty()) return {Corpus{}, report};
  return {Corpus(std::move(kept)), report};
}

DedupResult deduplicate(const Corpus& corpus) {
  DedupResult out = deduplicate(corpus.records());
  if (!out.corpus.empty()) out.corpus = Corpus(out.corpus.records(), corpus.first_year(), corpus.last_year());
  return out;
}

BinResult bin_time_slices(const Corpus& corpus, int from_year, int to_year) {
  if (from_year > to_year) {
    throw Error("from_year " + std::to_string(from_year) + " exceeds to_year " + std::to_string(to_year));
  }
  BinResult result;
  std::vector<BiblioRecord> inside;
  for (const auto& r : corpus.records()) {
    if (r.year >= from_year && r.year <= to_year) {
      inside.push_back(r);
    } else {
      ++result.dropped;
    }
  }
  if (inside.empty()) {
    throw Error("no record falls inside the year range " + std::to_string(from_year) + "-" +
                std::to_string(to_year));
  }
  std::stable_sort(inside.begin(), inside.end(),
                   [](const auto& a, const auto& b) { return a.year < b.year; });
  result.corpus = Corpus(std::move(inside), from_year, to_year);
  for (const auto& [year, positions] : result.corpus.slice_index()) {
    if (positions.empty()) result.warnings.push_back("time slice " + std::to_string(year) + " is empty");
  }
  return result;
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus.records()) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["abstract"] = r.abstract;
    j["year"] = r.year;
    j["source"] = r.source;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

Corpus from_jsonl(std::string_view text) {
  std::vector<BiblioRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      BiblioRecord r;
      r.id = j.at("id").get<std::string>();
      r.title = j.at("title").get<std::string>();
      r.abstract = j.value("abstract", "");
      r.year = j.at("year").get<int>();
      r.source = j.value("source", "");
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Corpus(std::move(records));
}

std::string to_csv(const Corpus& corpus) {
  const FieldMap names;
  std::string out = csv::format_row({names.id, names.title, names.abstract, names.year, names.source});
  for (const auto& r : corpus.records()) {
    out += csv::format_row({r.id, r.title, r.abstract, std::to_string(r.year), r.source});
  }
  return out;
}

}  // namespace ideaminer::corpus
