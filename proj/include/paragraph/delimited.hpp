#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace paragraph {

// Streaming reader for delimiter-separated records. A field that begins with
// the quote character is quoted: it may contain delimiters and line breaks,
// and a doubled quote stands for a literal one. Other fields are taken
// verbatim. CRLF line endings and a leading UTF-8 BOM are accepted.
class DelimitedReader {
 public:
  DelimitedReader(std::istream& in, char delimiter, std::optional<char> quote);

  // Fills `fields` with the next record. Returns false at end of input.
  // Throws IoError if the stream fails for a reason other than EOF.
  bool next(std::vector<std::string>& fields);

  std::size_t record_line() const { return record_line_; }
  // True when the last record hit end of input inside a quoted field.
  bool unterminated_quote() const { return unterminated_; }

 private:
  bool read_line(std::string& line);

  std::istream& in_;
  char delimiter_;
  std::optional<char> quote_;
  std::size_t line_no_ = 0;
  std::size_t record_line_ = 0;
  bool unterminated_ = false;
  std::string line_;
};

// Quotes a field only when it has to: it contains the delimiter or a line
// break, or begins with the quote character.
void write_delimited_row(std::ostream& out, std::span<const std::string_view> fields, char delimiter,
                         std::optional<char> quote);

}  // namespace paragraph
