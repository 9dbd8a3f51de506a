#pragma once

// Minimal RFC 4180 reader/writer: quoted fields may contain commas, quotes
// (doubled) and newlines.

#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tkndd/errors.hpp"

namespace tkndd::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

inline std::vector<Record> read(std::istream& in) {
  std::vector<Record> out;
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::size_t line = 1, i = 0;
  while (i < text.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool quoted = false, end_of_record = false;
    while (!end_of_record) {
      if (i >= text.size()) {
        if (quoted) throw FormatError("csv: unterminated quote starting on line " +
                                      std::to_string(rec.line));
        rec.fields.push_back(std::move(field));
        break;
      }
      const char c = text[i++];
      if (quoted) {
        if (c == '"') {
          if (i < text.size() && text[i] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
        }
      } else if (c == '"' && field.empty()) {
        quoted = true;
      } else if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && i < text.size() && text[i] == '\n') ++i;
        ++line;
        rec.fields.push_back(std::move(field));
        end_of_record = true;
      } else {
        field += c;
      }
    }
    // Skip blank lines.
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

// 17 significant digits: round-trips every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw FormatError("csv line " + std::to_string(line) + ": not a number: '" + std::string(s) +
                      "'");
  return v;
}

}  // namespace tkndd::csv
