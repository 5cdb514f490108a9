#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ideaminer::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
// quoted fields may span lines, CRLF or LF line endings. A leading UTF-8
// byte-order mark is dropped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  // Reads the next record. Returns false at end of input.
  bool next(Row& row);

  // 1-based physical line on which the last returned record started.
  size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  size_t line_ = 1;
  size_t record_line_ = 0;
  bool first_ = true;
};

std::vector<Row> parse(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);
std::string format_row(const Row& row);

}  // namespace ideaminer::csv
