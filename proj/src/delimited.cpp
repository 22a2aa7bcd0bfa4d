#include "paragraph/delimited.hpp"

#include <istream>
#include <ostream>

#include "paragraph/errors.hpp"

namespace paragraph {

DelimitedReader::DelimitedReader(std::istream& in, char delimiter, std::optional<char> quote)
    : in_(in), delimiter_(delimiter), quote_(quote) {
  if (!in_) throw IoError("input stream is not readable");
}

bool DelimitedReader::read_line(std::string& line) {
  if (!std::getline(in_, line)) {
    if (in_.bad()) throw IoError("read failure on input stream");
    return false;
  }
  ++line_no_;
  if (line_no_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool DelimitedReader::next(std::vector<std::string>& fields) {
  fields.clear();
  unterminated_ = false;
  if (!read_line(line_)) return false;
  record_line_ = line_no_;

  std::string field;
  std::size_t i = 0;
  bool at_field_start = true;
  bool in_quotes = false;
  for (;;) {
    if (i == line_.size()) {
      if (in_quotes) {
        // Quoted field spans a line break.
        if (!read_line(line_)) {
          unterminated_ = true;
          break;
        }
        field.push_back('\n');
        i = 0;
        continue;
      }
      break;
    }
    const char c = line_[i];
    if (in_quotes) {
      if (c == *quote_) {
        if (i + 1 < line_.size() && line_[i + 1] == *quote_) {
          field.push_back(c);
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == delimiter_) {
      fields.push_back(std::move(field));
      field.clear();
      at_field_start = true;
      ++i;
      continue;
    }
    if (at_field_start && quote_ && c == *quote_) {
      in_quotes = true;
      at_field_start = false;
      ++i;
      continue;
    }
    at_field_start = false;
    field.push_back(c);
    ++i;
  }
  fields.push_back(std::move(field));
  return true;
}

namespace {

bool needs_quoting(std::string_view field, char delimiter, std::optional<char> quote) {
  if (!quote) return false;
  if (!field.empty() && field.front() == *quote) return true;
  return field.find_first_of(std::string{delimiter, '\n', '\r'}) != std::string_view::npos;
}

}  // namespace

void write_delimited_row(std::ostream& out, std::span<const std::string_view> fields, char delimiter,
                         std::optional<char> quote) {
  bool first = true;
  for (std::string_view field : fields) {
    if (!first) out << delimiter;
    first = false;
    if (needs_quoting(field, delimiter, quote)) {
      out << *quote;
      for (char c : field) {
        if (c == *quote) out << c;
        out << c;
      }
      out << *quote;
    } else {
      out << field;
    }
  }
  out << '\n';
}

}  // namespace paragraph
