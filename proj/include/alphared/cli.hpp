// cli.hpp

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
// The `alphared` command line: reduce, apply, verify, stats and gen.
//
// Exit codes:
//   0  success
//   1  verification failed (a witness pair is printed)
//   2  usage, format or I/O error
//   3  a limit was hit, so no verdict could be reached

#ifndef ALPHARED_CLI_HPP_
#define ALPHARED_CLI_HPP_

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "alphared/core.hpp"
#include "alphared/engine.hpp"
#include "alphared/error.hpp"
#include "alphared/gen.hpp"
#include "alphared/reduce.hpp"
#include "alphared/textio.hpp"

namespace alphared {

enum ExitStatus : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitTruncated = 3,
};

inline constexpr std::string_view kProbeToken = "__probe__";

namespace detail {

namespace fs = std::filesystem;

inline Word parse_tokens(const std::string &text) {
  Word word;
  for (std::string_view field : split_fields(text)) word.emplace_back(field);
  return word;
}

inline std::string percent(std::size_t before, std::size_t after) {
  std::ostringstream out;
  const double p = before == 0 ? 0.0
                               : 100.0 * (static_cast<double>(before) -
                                          static_cast<double>(after)) /
                                     static_cast<double>(before);
  out << std::fixed << std::setprecision(1) << p << "%";
  return out.str();
}

struct LimitFlags {
  Limits limits;

  void attach(CLI::App *cmd) {
    cmd->add_option("--max-outputs", limits.max_outputs,
                    "Cap on distinct outputs per input")
        ->capture_default_str();
    cmd->add_option("--epsilon-bound", limits.max_epsilon_moves,
                    "Cap on consecutive epsilon-input moves")
        ->capture_default_str();
    cmd->add_option("--max-output-len", limits.max_output_len,
                    "Cap on output length in tokens")
        ->capture_default_str();
  }
};

inline int cmd_reduce(const std::string &manifest,
                      const std::vector<std::string> &pair,
                      const std::string &out_dir, const std::string &report,
                      std::ostream &out) {
  std::vector<fs::path> files;
  fs::path manifest_name = "cascade.lst";
  if (!manifest.empty()) {
    files = manifest_files(manifest);
    manifest_name = fs::path(manifest).filename();
  } else {
    files.assign(pair.begin(), pair.end());
  }
  if (files.size() < 2)
    throw FstError(ErrorKind::SyntaxError, "reduction needs at least 2 FSTs");

  Manifest reduced_manifest;
  std::set<std::string> names;
  std::vector<Fst> stages;
  for (const auto &file : files) {
    const std::string name = file.filename().string();
    if (!names.insert(name).second)
      throw FstError(ErrorKind::SyntaxError, "two stages share the file name " + name);
    reduced_manifest.paths.push_back(name);
    stages.push_back(load_fst(file));
  }
  const Cascade before(std::move(stages));
  const CascadeResult result = reduce_cascade(before);
  const auto rows = stage_reports(before, result.cascade, result.reports);

  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < files.size(); ++i)
    save_fst(fs::path(out_dir) / reduced_manifest.paths[i], result.cascade[i]);
  write_file(fs::path(out_dir) / manifest_name, serialize_manifest(reduced_manifest));
  if (!report.empty()) write_file(report, write_report(rows));

  std::size_t arcs_before = 0, arcs_after = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    out << "fst " << i + 1 << " (" << reduced_manifest.paths[i] << "): arcs "
        << r.before.arcs << " -> " << r.after.arcs << " ("
        << percent(r.before.arcs, r.after.arcs) << " reduction), symbols in "
        << r.before.input_symbols << " -> " << r.after.input_symbols << ", out "
        << r.before.output_symbols << " -> " << r.after.output_symbols << "\n";
    arcs_before += r.before.arcs;
    arcs_after += r.after.arcs;
  }
  out << "total: arcs " << arcs_before << " -> " << arcs_after << " ("
      << percent(arcs_before, arcs_after) << " reduction)\n";
  return kExitOk;
}

inline int cmd_apply(const std::string &manifest, const std::string &input,
                     const Limits &limits, std::ostream &out, std::ostream &err) {
  const Cascade cascade = load_cascade(manifest);
  const Word tokens = parse_tokens(input);
  const ApplyResult result = apply_cascade(cascade, tokens, limits);
  for (const Word &w : result.outputs) out << format_word(w) << "\n";
  if (result.truncated)
    err << "warning: a limit was hit; the output set may be incomplete\n";
  return kExitOk;
}

inline int cmd_verify(const std::string &before_manifest,
                      const std::string &after_manifest, std::size_t max_len,
                      const std::string &vocab_spec, bool probe,
                      const Limits &limits, std::ostream &out) {
  const Cascade before = load_cascade(before_manifest);
  const Cascade after = load_cascade(after_manifest);

  SymbolSet vocab;
  if (vocab_spec == "auto") {
    vocab = before[0].input_alphabet();
  } else {
    std::string spaced = vocab_spec;
    for (char &c : spaced)
      if (c == ',') c = ' ';
    for (const Symbol &s : parse_tokens(spaced)) {
      if (s.is_reserved())
        throw FstError(ErrorKind::ReservedInputToken, s.text() + " in --vocab");
      vocab.insert(s);
    }
  }
  if (probe) vocab.insert(Symbol(kProbeToken));

  const Relation r1 = enumerate_relation(before, max_len, vocab, limits);
  const Relation r2 = enumerate_relation(after, max_len, vocab, limits);
  const Comparison cmp = relations_equal(r1, r2);
  if (!cmp.equal) {
    out << "mismatch: input \"" << format_word(cmp.witness->first)
        << "\" output \"" << format_word(cmp.witness->second) << "\" only in "
        << (cmp.witness_side == 1 ? "before" : "after") << "\n";
    return kExitVerifyFailed;
  }
  out << "equal: " << r1.pairs.size() << " pairs, inputs up to length "
      << max_len << " over " << vocab.size() << " symbols\n";
  return kExitOk;
}

inline int cmd_stats(const std::string &fst_file, const std::string &manifest,
                     std::ostream &out) {
  std::vector<Fst> stages;
  if (!fst_file.empty()) {
    stages.push_back(load_fst(fst_file));
  } else {
    stages = load_cascade(manifest).stages();
  }
  const Cascade cascade(std::move(stages));
  out << write_report(stage_reports(cascade, cascade));
  return kExitOk;
}

inline int cmd_gen(const GenParams &params, const std::string &out_dir,
                   std::ostream &out) {
  const Cascade cascade = random_cascade(params);
  fs::create_directories(out_dir);
  Manifest manifest;
  for (std::size_t i = 0; i < cascade.size(); ++i) {
    const std::string name = "stage" + std::to_string(i + 1) + ".fst";
    save_fst(fs::path(out_dir) / name, cascade[i]);
    manifest.paths.push_back(name);
  }
  write_file(fs::path(out_dir) / "cascade.lst", serialize_manifest(manifest));
  out << "wrote " << cascade.size() << " stages to " << out_dir << "\n";
  return kExitOk;
}

}  // namespace detail

// Runs the command line `args` (args[0] is the program name).
inline int run_cli(const std::vector<std::string> &args, std::ostream &out,
                   std::ostream &err) {
  CLI::App app{"Intermediate alphabet reduction for FST cascades", "alphared"};
  app.require_subcommand(1);

  std::string manifest, fst_file, out_dir, report, input, before, after;
  std::string vocab = "auto";
  std::vector<std::string> pair;
  std::size_t max_len = 0;
  bool probe = false;
  detail::LimitFlags apply_limits, verify_limits;
  GenParams params;

  auto *reduce = app.add_subcommand("reduce", "Reduce the intermediate alphabets of a cascade");
  auto *r_cascade = reduce->add_option("--cascade", manifest, "Cascade manifest (.lst)");
  auto *r_pair = reduce->add_option("--pair", pair, "Two FST files T1 T2")->expected(2);
  r_cascade->excludes(r_pair);
  reduce->add_option("--out-dir", out_dir, "Directory for the reduced FSTs")->required();
  reduce->add_option("--report", report, "Write a TSV size report here");

  auto *apply = app.add_subcommand("apply", "Apply a cascade to a token sequence");
  apply->add_option("--cascade", manifest, "Cascade manifest (.lst)")->required();
  apply->add_option("--input", input, "Space-separated input tokens")->required();
  apply_limits.attach(apply);

  auto *verify = app.add_subcommand("verify", "Compare two cascades on all bounded inputs");
  verify->add_option("--before", before, "Original cascade manifest")->required();
  verify->add_option("--after", after, "Reduced cascade manifest")->required();
  verify->add_option("--max-len", max_len, "Maximum input length")->required();
  verify->add_option("--vocab", vocab, "auto, or a space/comma separated token list")
      ->capture_default_str();
  verify->add_flag("--probe", probe, "Add the out-of-alphabet token __probe__");
  verify_limits.attach(verify);

  auto *stats = app.add_subcommand("stats", "Print FST sizes as a TSV report");
  auto *s_fst = stats->add_option("--fst", fst_file, "A single FST file");
  auto *s_cascade = stats->add_option("--cascade", manifest, "Cascade manifest (.lst)");
  s_fst->excludes(s_cascade);

  auto *gen = app.add_subcommand("gen", "Generate a random cascade");
  gen->add_option("--seed", params.seed, "PRNG seed")->required();
  gen->add_option("--stages", params.stages, "Number of stages (>= 2)")->capture_default_str();
  gen->add_option("--min-states", params.states_per_stage.lo)->capture_default_str();
  gen->add_option("--max-states", params.states_per_stage.hi)->capture_default_str();
  gen->add_option("--min-alphabet", params.alphabet_size.lo)->capture_default_str();
  gen->add_option("--max-alphabet", params.alphabet_size.hi)->capture_default_str();
  gen->add_option("--min-arcs", params.arcs_per_state.lo, "Arcs per state, low end")
      ->capture_default_str();
  gen->add_option("--max-arcs", params.arcs_per_state.hi, "Arcs per state, high end")
      ->capture_default_str();
  gen->add_option("--redundancy", params.redundancy)->capture_default_str();
  gen->add_option("--final-prob", params.final_prob)->capture_default_str();
  gen->add_option("--epsilon-prob", params.epsilon_prob)->capture_default_str();
  gen->add_option("--unknown-prob", params.unknown_prob)->capture_default_str();
  gen->add_option("--out-dir", out_dir, "Output directory")->required();

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (reduce->parsed()) {
      if (manifest.empty() && pair.empty()) {
        err << "error: reduce needs --cascade or --pair\n";
        return kExitUsage;
      }
      return detail::cmd_reduce(manifest, pair, out_dir, report, out);
    }
    if (apply->parsed())
      return detail::cmd_apply(manifest, input, apply_limits.limits, out, err);
    if (verify->parsed())
      return detail::cmd_verify(before, after, max_len, vocab, probe,
                                verify_limits.limits, out);
    if (stats->parsed()) {
      if (manifest.empty() && fst_file.empty()) {
        err << "error: stats needs --fst or --cascade\n";
        return kExitUsage;
      }
      return detail::cmd_stats(fst_file, manifest, out);
    }
    return detail::cmd_gen(params, out_dir, out);
  } catch (const FstError &e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::TruncatedRelation ? kExitTruncated : kExitUsage;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace alphared

#endif  // ALPHARED_CLI_HPP_
