// Copyright 2026 The dpbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "dpbench/harness.hpp"

namespace dpbench {

namespace {

constexpr std::array<std::string_view, 16> kColumns = {
    "dataset",         "n_classes",       "method",
    "stage",           "epsilon",         "rep",
    "accuracy",        "baseline_accuracy", "acl",
    "salem_mi_adv",    "yeom_mi_adv",     "yeom_ai_mean_adv",
    "yeom_ai_std",     "salem_ai_mean_adv", "wall_time_s",
    "seed"};

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double_field(const std::string& cell, std::string_view column,
                          std::size_t line_no) {
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ParseError("results: line " + std::to_string(line_no) + ", column '" +
                     std::string(column) + "': not a number: '" + cell + "'");
  return v;
}

std::uint64_t parse_u64_field(const std::string& cell, std::string_view column,
                              std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw ParseError("results: line " + std::to_string(line_no) + ", column '" +
                     std::string(column) + "': not an unsigned integer: '" + cell +
                     "'");
  return v;
}

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

}  // namespace

void write_results(const std::vector<TrialRecord>& records,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("results: cannot write " + path.string());
  for (std::size_t c = 0; c < kColumns.size(); ++c)
    out << kColumns[c] << (c + 1 < kColumns.size() ? "," : "\n");
  for (const TrialRecord& r : records) {
    if (r.dataset.find(',') != std::string::npos ||
        r.dataset.find('\n') != std::string::npos)
      throw std::invalid_argument("results: dataset name contains a delimiter");
    out << r.dataset << ',' << r.n_classes << ',' << r.method << ',' << r.stage
        << ',' << format_double(r.epsilon) << ',' << r.rep << ','
        << format_double(r.accuracy) << ',' << format_double(r.baseline_accuracy)
        << ',' << format_double(r.acl) << ',' << format_double(r.salem_mi_adv)
        << ',' << format_double(r.yeom_mi_adv) << ','
        << format_double(r.yeom_ai_mean_adv) << ',' << format_double(r.yeom_ai_std)
        << ',' << format_double(r.salem_ai_mean_adv) << ','
        << format_double(r.wall_time_s) << ',' << r.seed << '\n';
  }
  if (!out) throw IoError("results: write failed: " + path.string());
}

std::vector<TrialRecord> read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("results: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line))
    throw ParseError("results: empty file " + path.string());
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() != kColumns.size())
    throw ParseError("results: expected " + std::to_string(kColumns.size()) +
                     " columns, found " + std::to_string(header.size()));
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (header[c] != kColumns[c])
      throw ParseError("results: column " + std::to_string(c + 1) +
                       " should be '" + std::string(kColumns[c]) + "', found '" +
                       header[c] + "'");
  }

  std::vector<TrialRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != kColumns.size())
      throw ParseError("results: line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " fields, expected " +
                       std::to_string(kColumns.size()));
    TrialRecord r;
    r.dataset = cells[0];
    r.n_classes = static_cast<std::size_t>(parse_u64_field(cells[1], "n_classes", line_no));
    r.method = cells[2];
    r.stage = cells[3];
    stage_from_name(r.stage);  // validates
    r.epsilon = parse_double_field(cells[4], "epsilon", line_no);
    r.rep = static_cast<std::size_t>(parse_u64_field(cells[5], "rep", line_no));
    r.accuracy = parse_double_field(cells[6], "accuracy", line_no);
    r.baseline_accuracy = parse_double_field(cells[7], "baseline_accuracy", line_no);
    r.acl = parse_double_field(cells[8], "acl", line_no);
    r.salem_mi_adv = parse_double_field(cells[9], "salem_mi_adv", line_no);
    r.yeom_mi_adv = parse_double_field(cells[10], "yeom_mi_adv", line_no);
    r.yeom_ai_mean_adv = parse_double_field(cells[11], "yeom_ai_mean_adv", line_no);
    r.yeom_ai_std = parse_double_field(cells[12], "yeom_ai_std", line_no);
    r.salem_ai_mean_adv = parse_double_field(cells[13], "salem_ai_mean_adv", line_no);
    r.wall_time_s = parse_double_field(cells[14], "wall_time_s", line_no);
    r.seed = parse_u64_field(cells[15], "seed", line_no);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace dpbench
