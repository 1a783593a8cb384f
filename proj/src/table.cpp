// Copyright 2026 The iGPC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "igpc/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "igpc/errors.hpp"

namespace igpc {

int Table::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  throw ConfigError("missing CSV column: " + name);
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw ConfigError("CSV row width does not match header");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("not a number: '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s) {
  int v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  return v;
}

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) out += ',';
    append_field(out, table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      append_field(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text) {
  // Single character scan so quoted fields may contain commas, escaped
  // quotes and newlines (everything append_field emits).
  Table table;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  bool first = true;

  auto end_field = [&]() {
    fields.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&]() {
    if (!row_has_content) {
      fields.clear();
      field.clear();
      return;  // blank line
    }
    end_field();
    if (first) {
      table.columns = std::move(fields);
      first = false;
    } else {
      table.add_row(std::move(fields));
    }
    fields.clear();
    row_has_content = false;
  };

  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      row_has_content = true;
    } else if (c == ',') {
      end_field();
      row_has_content = true;
    } else if (c == '\n') {
      end_record();
    } else if (c != '\r') {
      field += c;
      row_has_content = true;
    }
  }
  if (quoted) throw ConfigError("unterminated quoted field in CSV input");
  end_record();
  if (first) throw ConfigError("CSV input has no header line");
  return table;
}

void write_csv(const Table& table, const std::string& path) {
  write_text_file(path, to_csv(table));
}

Table read_csv(const std::string& path) {
  return parse_csv(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
  if (!out) throw ConfigError("short write: " + path);
}

}  // namespace igpc
