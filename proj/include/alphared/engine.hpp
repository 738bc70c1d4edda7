// engine.hpp

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
// Nondeterministic application of FSTs and cascades to token sequences,
// bounded enumeration of cascade relations, and relation comparison.
//
// Application tracks configurations (state, emitted output). Epsilon-input
// moves are explored breadth-first per input position, so every
// configuration is reached with its minimal number of consecutive epsilon
// moves; a configuration that needs more than Limits::max_epsilon_moves of
// them is cut and the result is flagged truncated. Re-reaching a known
// configuration is not a cut, so epsilon:epsilon loops never truncate.

#ifndef ALPHARED_ENGINE_HPP_
#define ALPHARED_ENGINE_HPP_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "alphared/core.hpp"
#include "alphared/error.hpp"

namespace alphared {

struct Limits {
  std::size_t max_outputs = 100000;
  std::size_t max_epsilon_moves = 64;
  std::size_t max_output_len = 256;

  void validate() const {
    if (max_outputs == 0 || max_epsilon_moves == 0 || max_output_len == 0)
      throw FstError(ErrorKind::InvalidLimits, "all limits must be >= 1");
  }
};

struct ApplyResult {
  std::set<Word> outputs;
  bool truncated = false;
};

using WordPair = std::pair<Word, Word>;

struct Relation {
  std::set<WordPair> pairs;
  bool truncated = false;

  friend bool operator==(const Relation &, const Relation &) = default;
};

struct Comparison {
  bool equal = true;
  std::optional<WordPair> witness;
  // 1 if the witness is only in the first relation, 2 if only in the second.
  int witness_side = 0;
};

inline std::string format_word(const Word &word) {
  std::string out;
  for (const Symbol &s : word) {
    if (!out.empty()) out += ' ';
    out += s.text();
  }
  return out;
}

namespace detail {

struct Config {
  StateId state;
  Word output;

  friend bool operator==(const Config &, const Config &) = default;
};

struct ConfigHash {
  std::size_t operator()(const Config &c) const noexcept {
    std::size_t h = c.state * 0x9e3779b97f4a7c15ULL;
    for (const Symbol &s : c.output)
      h = (h ^ s.id()) * 0x100000001b3ULL + (h >> 29);
    return h;
  }
};

using ConfigSet = std::unordered_set<Config, ConfigHash>;

// One FST's transition function over configuration sets.
class Runner {
 public:
  Runner(const Fst &fst, const Limits &limits) : fst_(fst), limits_(limits) {}

  ConfigSet start(bool &truncated) const {
    ConfigSet seed;
    seed.insert(Config{fst_.initial(), {}});
    return closure(std::move(seed), truncated);
  }

  ConfigSet step(const ConfigSet &configs, const Symbol &token,
                 bool &truncated) const {
    ConfigSet next;
    for (const Config &c : configs) {
      for (const Arc &arc : fst_.arcs_from(c.state)) {
        if (arc.input.is_epsilon() || !matches(token, arc.input, fst_.sigma()))
          continue;
        const Symbol &emitted = arc.output.is_unknown() ? token : arc.output;
        Config moved{arc.dst, c.output};
        if (!emit(moved.output, emitted, truncated)) continue;
        next.insert(std::move(moved));
      }
    }
    return closure(std::move(next), truncated);
  }

  void collect(const ConfigSet &configs, std::set<Word> &outputs) const {
    for (const Config &c : configs)
      if (fst_.is_final(c.state)) outputs.insert(c.output);
  }

 private:
  bool emit(Word &output, const Symbol &symbol, bool &truncated) const {
    if (symbol.is_epsilon()) return true;
    if (output.size() >= limits_.max_output_len) {
      truncated = true;
      return false;
    }
    output.push_back(symbol);
    return true;
  }

  ConfigSet closure(ConfigSet seen, bool &truncated) const {
    std::vector<const Config *> layer;
    layer.reserve(seen.size());
    for (const Config &c : seen) layer.push_back(&c);
    for (std::size_t depth = 0; !layer.empty(); ++depth) {
      std::vector<const Config *> next_layer;
      for (const Config *c : layer) {
        for (const Arc &arc : fst_.arcs_from(c->state)) {
          if (!arc.input.is_epsilon()) continue;
          Config moved{arc.dst, c->output};
          if (!emit(moved.output, arc.output, truncated)) continue;
          if (seen.contains(moved)) continue;
          if (depth == limits_.max_epsilon_moves) {
            truncated = true;
            continue;
          }
          // unordered_set never relocates its nodes, so the pointer is stable.
          next_layer.push_back(&*seen.insert(std::move(moved)).first);
        }
      }
      layer = std::move(next_layer);
    }
    return seen;
  }

  const Fst &fst_;
  const Limits &limits_;
};

inline void check_input(std::span<const Symbol> input) {
  for (const Symbol &s : input) {
    if (s.is_reserved())
      throw FstError(ErrorKind::ReservedInputToken,
                     s.text() + " cannot appear in an input sequence");
  }
}

inline void cap_outputs(std::set<Word> &outputs, std::size_t max_outputs,
                        bool &truncated) {
  if (outputs.size() <= max_outputs) return;
  truncated = true;
  outputs.erase(std::next(outputs.begin(), static_cast<std::ptrdiff_t>(max_outputs)),
                outputs.end());
}

// Applies one FST to many words, sharing work between common prefixes. The
// words should be sorted for the sharing to pay off; results are positional.
inline std::vector<ApplyResult> apply_each(const Fst &fst,
                                           const std::vector<Word> &words,
                                           const Limits &limits) {
  Runner runner(fst, limits);
  struct Level {
    ConfigSet configs;
    bool truncated;
  };
  std::vector<Level> stack;
  const Word *previous = nullptr;
  std::vector<ApplyResult> results;
  results.reserve(words.size());
  for (const Word &word : words) {
    check_input(word);
    std::size_t common = 0;
    if (previous) {
      const std::size_t n = std::min(previous->size(), word.size());
      while (common < n && (*previous)[common] == word[common]) ++common;
    }
    if (stack.empty()) {
      bool truncated = false;
      ConfigSet configs = runner.start(truncated);
      stack.push_back({std::move(configs), truncated});
    }
    stack.resize(std::min(stack.size(), common + 1));
    for (std::size_t i = stack.size() - 1; i < word.size(); ++i) {
      bool truncated = stack.back().truncated;
      ConfigSet configs = runner.step(stack.back().configs, word[i], truncated);
      stack.push_back({std::move(configs), truncated});
    }
    ApplyResult result;
    result.truncated = stack.back().truncated;
    runner.collect(stack.back().configs, result.outputs);
    cap_outputs(result.outputs, limits.max_outputs, result.truncated);
    results.push_back(std::move(result));
    previous = &word;
  }
  return results;
}

// All words over `vocab` of length 0..max_len, in lexicographic order.
inline std::vector<Word> all_words(const SymbolSet &vocab, std::size_t max_len) {
  std::vector<Word> words;
  Word current;
  std::function<void()> extend = [&]() {
    words.push_back(current);
    if (current.size() == max_len) return;
    for (const Symbol &s : vocab) {
      current.push_back(s);
      extend();
      current.pop_back();
    }
  };
  extend();
  return words;
}

}  // namespace detail

inline ApplyResult apply_fst(const Fst &fst, std::span<const Symbol> input,
                             const Limits &limits = {}) {
  limits.validate();
  detail::check_input(input);
  return std::move(detail::apply_each(fst, {Word(input.begin(), input.end())},
                                      limits)
                       .front());
}

inline ApplyResult apply_cascade(const Cascade &cascade,
                                 std::span<const Symbol> input,
                                 const Limits &limits = {}) {
  limits.validate();
  detail::check_input(input);
  ApplyResult current;
  current.outputs.insert(Word(input.begin(), input.end()));
  for (const Fst &stage : cascade.stages()) {
    const std::vector<Word> words(current.outputs.begin(), current.outputs.end());
    ApplyResult next;
    next.truncated = current.truncated;
    for (auto &result : detail::apply_each(stage, words, limits)) {
      next.truncated |= result.truncated;
      next.outputs.merge(result.outputs);
    }
    detail::cap_outputs(next.outputs, limits.max_outputs, next.truncated);
    current = std::move(next);
  }
  return current;
}

// Every (input, output) pair of the cascade for inputs over `vocab` of length
// at most max_input_len. Per input, the outputs equal apply_cascade's.
inline Relation enumerate_relation(const Cascade &cascade,
                                   std::size_t max_input_len,
                                   const SymbolSet &vocab,
                                   const Limits &limits = {}) {
  limits.validate();
  const std::vector<Word> inputs = detail::all_words(vocab, max_input_len);

  std::vector<ApplyResult> current =
      detail::apply_each(cascade[0], inputs, limits);
  for (std::size_t k = 1; k < cascade.size(); ++k) {
    std::set<Word> distinct;
    for (const auto &r : current) distinct.insert(r.outputs.begin(), r.outputs.end());
    const std::vector<Word> words(distinct.begin(), distinct.end());
    const std::vector<ApplyResult> applied =
        detail::apply_each(cascade[k], words, limits);
    std::map<Word, const ApplyResult *> by_word;
    for (std::size_t i = 0; i < words.size(); ++i) by_word[words[i]] = &applied[i];

    for (auto &r : current) {
      ApplyResult next;
      next.truncated = r.truncated;
      for (const Word &w : r.outputs) {
        const ApplyResult &a = *by_word.at(w);
        next.truncated |= a.truncated;
        next.outputs.insert(a.outputs.begin(), a.outputs.end());
      }
      detail::cap_outputs(next.outputs, limits.max_outputs, next.truncated);
      r = std::move(next);
    }
  }

  Relation relation;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    relation.truncated |= current[i].truncated;
    for (const Word &out : current[i].outputs)
      relation.pairs.emplace_hint(relation.pairs.end(), inputs[i], out);
  }
  return relation;
}

inline Comparison relations_equal(const Relation &a, const Relation &b) {
  if (a.truncated || b.truncated)
    throw FstError(ErrorKind::TruncatedRelation,
                   "a relation was truncated; raise the limits to compare");
  Comparison result;
  auto ia = a.pairs.begin();
  auto ib = b.pairs.begin();
  while (ia != a.pairs.end() || ib != b.pairs.end()) {
    if (ib == b.pairs.end() || (ia != a.pairs.end() && *ia < *ib)) {
      result = {false, *ia, 1};
      return result;
    }
    if (ia == a.pairs.end() || *ib < *ia) {
      result = {false, *ib, 2};
      return result;
    }
    ++ia;
    ++ib;
  }
  return result;
}

// An accepting path of `fst` that reads `input` and writes `output`, if one
// exists. Searches the (state, input position, output position) graph
// directly, independent of the configuration-set machinery above.
inline std::optional<std::vector<Arc>> find_trace(const Fst &fst,
                                                  const Word &input,
                                                  const Word &output) {
  const std::size_t in_n = input.size() + 1, out_n = output.size() + 1;
  std::vector<bool> visited(static_cast<std::size_t>(fst.state_count()) * in_n * out_n);
  std::vector<Arc> path;
  std::function<bool(StateId, std::size_t, std::size_t)> search =
      [&](StateId q, std::size_t i, std::size_t j) -> bool {
    const std::size_t key = (static_cast<std::size_t>(q) * in_n + i) * out_n + j;
    if (visited[key]) return false;
    visited[key] = true;
    if (i == input.size() && j == output.size() && fst.is_final(q)) return true;
    for (const Arc &arc : fst.arcs_from(q)) {
      std::size_t ni = i;
      Symbol emitted = arc.output;
      if (!arc.input.is_epsilon()) {
        if (i == input.size() || !matches(input[i], arc.input, fst.sigma()))
          continue;
        if (arc.output.is_unknown()) emitted = input[i];
        ++ni;
      }
      std::size_t nj = j;
      if (!emitted.is_epsilon()) {
        if (j == output.size() || output[j] != emitted) continue;
        ++nj;
      }
      path.push_back(arc);
      if (search(arc.dst, ni, nj)) return true;
      path.pop_back();
    }
    return false;
  };
  if (search(fst.initial(), 0, 0)) return path;
  return std::nullopt;
}

}  // namespace alphared

#endif  // ALPHARED_ENGINE_HPP_
