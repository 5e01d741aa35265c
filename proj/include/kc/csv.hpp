#pragma once

// Minimal RFC-4180 reader and writer.

#include <string>
#include <string_view>
#include <vector>

#include "kc/error.hpp"

namespace kc::csv {

struct Row {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

// Parses a whole document. Quoted fields may contain commas, doubled quotes and
// line breaks. A UTF-8 byte-order mark at the start is skipped. Blank lines are dropped.
inline std::vector<Row> parse(std::string_view doc, char delim = ',') {
  std::vector<Row> rows;
  std::size_t i = 0;
  if (doc.size() >= 3 && doc.substr(0, 3) == "\xEF\xBB\xBF") i = 3;

  std::size_t line = 1;
  Row row;
  row.line = line;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = Row{};
  };

  for (; i < doc.size(); ++i) {
    char c = doc[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < doc.size() && doc[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delim) {
      end_field();
    } else if (c == '\r') {
      // swallowed; the following '\n' ends the row
    } else if (c == '\n') {
      end_row();
      ++line;
      row.line = line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field starting near line " + std::to_string(row.line));
  if (field_started || !field.empty() || !row.fields.empty()) end_row();
  return rows;
}

inline bool needs_quoting(std::string_view s, char delim = ',') {
  for (char c : s)
    if (c == delim || c == '"' || c == '\n' || c == '\r') return true;
  return false;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string field(std::string_view s, char delim = ',') {
  return needs_quoting(s, delim) ? quote(s) : std::string(s);
}

inline std::string line(const std::vector<std::string>& fields, char delim = ',') {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(delim);
    out += field(fields[i], delim);
  }
  out.push_back('\n');
  return out;
}

}  // namespace kc::csv
