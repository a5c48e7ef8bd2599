#pragma once

// Minimal RFC 4180 reader/writer. Quoted fields may contain commas, doubled
// quotes and line breaks; both LF and CRLF record separators are accepted.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skillgap::csv {

using Record = std::vector<std::string>;

struct ParsedRecord {
  Record fields;
  std::size_t line = 0;  // 1-based physical line where the record starts
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  /// Next record, or nullopt at end of input. An unterminated quote yields a
  /// record with `error` set; reading stops there.
  std::optional<ParsedRecord> next() {
    if (pos_ >= text_.size() || failed_) return std::nullopt;
    ParsedRecord rec;
    rec.line = line_;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (quoted) {
        if (c == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            field.push_back('"');
            pos_ += 2;
            continue;
          }
          quoted = false;
          ++pos_;
          continue;
        }
        if (c == '\n') ++line_;
        field.push_back(c);
        ++pos_;
        continue;
      }
      if (c == '"' && !field_started) {
        quoted = true;
        field_started = true;
        ++pos_;
        continue;
      }
      if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
        ++pos_;
        continue;
      }
      if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
        ++pos_;
        continue;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        rec.fields.push_back(std::move(field));
        return rec;
      }
      field.push_back(c);
      field_started = true;
      ++pos_;
    }
    if (quoted) {
      failed_ = true;
      error_ = "unterminated quoted field starting on line " + std::to_string(rec.line);
    }
    rec.fields.push_back(std::move(field));
    return rec;
  }

  bool failed() const { return failed_; }
  const std::string& error() const { return error_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  bool failed_ = false;
  std::string error_;
};

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

inline std::string format_record(const Record& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace skillgap::csv
