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

// Small CSV table with deterministic, locale-independent number
// formatting (shortest round-trip form), used for ledgers and plot data.

#ifndef IGPC_TABLE_HPP_
#define IGPC_TABLE_HPP_

#include <string>
#include <vector>

namespace igpc {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws ConfigError if absent.
  int column_index(const std::string& name) const;
  void add_row(std::vector<std::string> row);
};

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict parse of a full-string double; throws ConfigError otherwise.
double parse_double(const std::string& s);
int parse_int(const std::string& s);

std::string to_csv(const Table& table);
Table parse_csv(const std::string& text);

void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

// Whole-file helpers shared by the config and metadata plumbing.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace igpc

#endif  // IGPC_TABLE_HPP_
