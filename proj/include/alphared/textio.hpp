// textio.hpp

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
//
// \file
// Text formats.
//
// FST files (.fst), one item per line, fields separated by spaces or tabs:
//
//   SRC DST IN OUT     arc
//   STATE              final state
//   !isym SYMBOL       declared input symbol
//   !osym SYMBOL       declared output symbol
//   # ...              comment
//
// The state count is one more than the largest state index mentioned.
// Manifests (.lst) list one FST path per line, first-applied first.
// Reports (.tsv) have one row per FST followed by a `total` row.

#ifndef ALPHARED_TEXTIO_HPP_
#define ALPHARED_TEXTIO_HPP_

#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alphared/core.hpp"
#include "alphared/error.hpp"

namespace alphared {

struct Manifest {
  std::vector<std::string> paths;

  friend bool operator==(const Manifest &, const Manifest &) = default;
};

// One size-table row: an FST's counts before and after reduction.
struct ReductionReport {
  std::size_t stage_index = 0;
  Counts before;
  Counts after;
  std::size_t classes_merged = 0;
  std::size_t symbols_eliminated = 0;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

[[noreturn]] inline void syntax_error(std::size_t line_no,
                                      const std::string &what) {
  throw FstError(ErrorKind::SyntaxError,
                 "line " + std::to_string(line_no) + ": " + what);
}

inline StateId parse_state(std::string_view field, std::size_t line_no) {
  StateId value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    syntax_error(line_no, "'" + std::string(field) + "' is not a state index");
  return value;
}

inline Symbol parse_symbol(std::string_view field, std::size_t line_no) {
  try {
    return Symbol(field);
  } catch (const FstError &e) {
    syntax_error(line_no, e.message());
  }
}

inline std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FstError(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path &path,
                       std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FstError(ErrorKind::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw FstError(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace detail

inline Fst parse_fst(std::string_view text) {
  std::vector<Arc> arcs;
  std::set<StateId> finals;
  SymbolSet declared_in, declared_out;
  StateId max_state = 0;

  const auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const auto fields = detail::split_fields(lines[i]);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields[0] == "!isym" || fields[0] == "!osym") {
      if (fields.size() != 2)
        detail::syntax_error(line_no, "declaration takes exactly one symbol");
      Symbol s = detail::parse_symbol(fields[1], line_no);
      (fields[0] == "!isym" ? declared_in : declared_out).insert(s);
      continue;
    }
    if (fields.size() == 4) {
      Arc arc{detail::parse_state(fields[0], line_no),
              detail::parse_state(fields[1], line_no),
              detail::parse_symbol(fields[2], line_no),
              detail::parse_symbol(fields[3], line_no)};
      max_state = std::max({max_state, arc.src, arc.dst});
      arcs.push_back(arc);
    } else if (fields.size() == 1) {
      StateId q = detail::parse_state(fields[0], line_no);
      max_state = std::max(max_state, q);
      finals.insert(q);
    } else {
      detail::syntax_error(line_no, "expected 1 or 4 fields, got " +
                                        std::to_string(fields.size()));
    }
  }
  if (max_state == std::numeric_limits<StateId>::max())
    throw FstError(ErrorKind::InvalidStateIndex, "state index out of range");
  return make_fst(max_state + 1, std::move(finals), std::move(arcs),
                  std::move(declared_in), std::move(declared_out));
}

inline std::string serialize_fst(const Fst &fst) {
  std::string out;
  for (const Symbol &s : fst.declared_in()) out += "!isym " + s.text() + "\n";
  for (const Symbol &s : fst.declared_out()) out += "!osym " + s.text() + "\n";
  for (const Arc &arc : fst.arcs()) {
    out += std::to_string(arc.src);
    out += ' ';
    out += std::to_string(arc.dst);
    out += ' ';
    out += arc.input.text();
    out += ' ';
    out += arc.output.text();
    out += '\n';
  }
  for (StateId q : fst.finals()) out += std::to_string(q) + "\n";
  return out;
}

inline Manifest parse_manifest(std::string_view text) {
  Manifest manifest;
  for (std::string_view line : detail::split_lines(text)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    manifest.paths.emplace_back(line.substr(first, last - first + 1));
  }
  if (manifest.paths.empty())
    throw FstError(ErrorKind::SyntaxError, "manifest lists no FST files");
  return manifest;
}

inline std::string serialize_manifest(const Manifest &manifest) {
  std::string out;
  for (const auto &path : manifest.paths) out += path + "\n";
  return out;
}

inline constexpr std::string_view kReportHeader =
    "fst\tstates_before\tarcs_before\tinsyms_before\toutsyms_before\t"
    "states_after\tarcs_after\tinsyms_after\toutsyms_after\n";

// Rows are numbered by list position, starting at 1. The total row sums the
// state and arc columns; the symbol columns are dashed.
inline std::string write_report(const std::vector<ReductionReport> &reports) {
  std::string out(kReportHeader);
  Counts total_before, total_after;
  auto columns = [](const Counts &c) {
    return std::to_string(c.states) + "\t" + std::to_string(c.arcs) + "\t" +
           std::to_string(c.input_symbols) + "\t" +
           std::to_string(c.output_symbols);
  };
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto &r = reports[i];
    out += std::to_string(i + 1) + "\t" + columns(r.before) + "\t" +
           columns(r.after) + "\n";
    total_before.states += r.before.states;
    total_before.arcs += r.before.arcs;
    total_after.states += r.after.states;
    total_after.arcs += r.after.arcs;
  }
  out += "total\t" + std::to_string(total_before.states) + "\t" +
         std::to_string(total_before.arcs) + "\t-\t-\t" +
         std::to_string(total_after.states) + "\t" +
         std::to_string(total_after.arcs) + "\t-\t-\n";
  return out;
}

inline Fst load_fst(const std::filesystem::path &path) {
  try {
    return parse_fst(detail::read_file(path));
  } catch (const FstError &e) {
    if (e.kind() == ErrorKind::IoError) throw;
    throw FstError(e.kind(), path.string() + ": " + e.message());
  }
}

inline void save_fst(const std::filesystem::path &path, const Fst &fst) {
  detail::write_file(path, serialize_fst(fst));
}

// Manifest entries are resolved relative to the manifest's directory.
inline std::vector<std::filesystem::path> manifest_files(
    const std::filesystem::path &manifest_path) {
  const Manifest manifest = parse_manifest(detail::read_file(manifest_path));
  std::vector<std::filesystem::path> files;
  for (const auto &entry : manifest.paths) {
    std::filesystem::path p(entry);
    files.push_back(p.is_absolute() ? p : manifest_path.parent_path() / p);
  }
  return files;
}

inline Cascade load_cascade(const std::filesystem::path &manifest_path) {
  std::vector<Fst> stages;
  for (const auto &file : manifest_files(manifest_path))
    stages.push_back(load_fst(file));
  return Cascade(std::move(stages));
}

}  // namespace alphared

#endif  // ALPHARED_TEXTIO_HPP_
