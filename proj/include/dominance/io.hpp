// Copyright 2026 The dominance-lab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dominance/empirical.hpp"
#include "dominance/errors.hpp"

namespace dominance {

// Two samples read from delimiter-separated text. Accepted layouts:
//   * two sources, one numeric column each, optional header line;
//   * one source with a header naming columns `group` (x or y) and `value`.
// Fields may be separated by commas, semicolons, tabs or spaces. Blank
// lines and lines starting with '#' are ignored. Non-finite values are
// rejected rather than skipped.
struct SamplePair {
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

// Splits on commas, semicolons or tabs when any is present, otherwise on
// runs of spaces.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  const bool delimited = line.find_first_of(",;\t") != std::string_view::npos;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t end = delimited ? line.find_first_of(",;\t", start) : line.find(' ', start);
    const std::size_t stop = end == std::string_view::npos ? line.size() : end;
    const auto field = line.substr(start, stop - start);
    if (delimited || !field.empty()) fields.push_back(field);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

inline std::string trim(std::string_view text) {
  auto begin = text.find_first_not_of(" \t\r\"'");
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(" \t\r\"'");
  return std::string(text.substr(begin, end - begin + 1));
}

enum class ParseStatus { kOk, kNotNumber, kNonFinite };

inline ParseStatus parse_number(std::string_view text, double& out) {
  const std::string cleaned = trim(text);
  if (cleaned.empty()) return ParseStatus::kNotNumber;
  const char* first = cleaned.data();
  const char* last = first + cleaned.size();
  if (*first == '+') ++first;
  const auto result = std::from_chars(first, last, out);
  if (result.ec == std::errc::result_out_of_range) return ParseStatus::kNonFinite;
  if (result.ec != std::errc() || result.ptr != last) return ParseStatus::kNotNumber;
  if (!std::isfinite(out)) return ParseStatus::kNonFinite;
  return ParseStatus::kOk;
}

inline std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  return text;
}

inline std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

struct Line {
  std::size_t number;
  std::string text;
};

inline std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] == '#') continue;
    lines.push_back({number, std::move(text)});
  }
  return lines;
}

}  // namespace detail

// One numeric column with an optional header line.
inline std::vector<double> read_column(std::istream& in, std::string_view source) {
  std::vector<double> values;
  const auto lines = detail::content_lines(in);
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& [number, text] = lines[k];
    const auto fields = detail::split_fields(text);
    if (fields.size() != 1) {
      throw InputError(detail::where(source, number) + "expected one column, found " + std::to_string(fields.size()));
    }
    double value = 0.0;
    switch (detail::parse_number(fields[0], value)) {
      case detail::ParseStatus::kOk:
        values.push_back(value);
        break;
      case detail::ParseStatus::kNonFinite:
        throw InputError(detail::where(source, number) + "non-finite value '" + detail::trim(fields[0]) + "'");
      case detail::ParseStatus::kNotNumber:
        if (k == 0) break;  // header
        throw InputError(detail::where(source, number) + "cannot parse '" + detail::trim(fields[0]) + "' as a number");
    }
  }
  return values;
}

// Long format with a header containing `group` and `value` columns.
inline SamplePair read_grouped(std::istream& in, std::string_view source) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw InputError(std::string(source) + ": empty input");
  const auto header = detail::split_fields(lines.front().text);
  std::size_t group_column = header.size();
  std::size_t value_column = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = detail::lowercase(detail::trim(header[c]));
    if (name == "group") group_column = c;
    if (name == "value") value_column = c;
  }
  if (group_column == header.size() || value_column == header.size()) {
    throw InputError(detail::where(source, lines.front().number) +
                     "a single input needs a header with 'group' and 'value' columns");
  }
  SamplePair out;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [number, text] = lines[k];
    const auto fields = detail::split_fields(text);
    if (fields.size() != header.size()) {
      throw InputError(detail::where(source, number) + "expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    const auto group = detail::lowercase(detail::trim(fields[group_column]));
    double value = 0.0;
    switch (detail::parse_number(fields[value_column], value)) {
      case detail::ParseStatus::kOk:
        break;
      case detail::ParseStatus::kNonFinite:
        throw InputError(detail::where(source, number) + "non-finite value '" + detail::trim(fields[value_column]) + "'");
      case detail::ParseStatus::kNotNumber:
        throw InputError(detail::where(source, number) + "cannot parse '" + detail::trim(fields[value_column]) +
                         "' as a number");
    }
    if (group == "x") {
      out.x.push_back(value);
    } else if (group == "y") {
      out.y.push_back(value);
    } else {
      throw InputError(detail::where(source, number) + "group must be 'x' or 'y', got '" +
                       detail::trim(fields[group_column]) + "'");
    }
  }
  return out;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return in;
}

// Resolves one grouped file or two single-column files.
inline SamplePair read_samples(const std::vector<std::string>& paths) {
  if (paths.size() == 1) {
    auto in = open_input(paths[0]);
    return read_grouped(in, paths[0]);
  }
  if (paths.size() == 2) {
    auto in_x = open_input(paths[0]);
    auto in_y = open_input(paths[1]);
    return {read_column(in_x, paths[0]), read_column(in_y, paths[1])};
  }
  throw InputError("expected one grouped input file or two single-column files, got " +
                   std::to_string(paths.size()));
}

}  // namespace dominance
