// core.hpp

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
// Transducer data model: interned symbols, arcs, immutable FSTs and cascades.
//
// Conventions: state 0 is the initial state. "<eps>" is the empty string and
// "<unk>" is the unknown symbol, which matches every token outside the
// network's alphabet. An arc "<unk>:<unk>" passes the matched token through
// unchanged; "<unk>:x" maps any unknown token to x.

#ifndef ALPHARED_CORE_HPP_
#define ALPHARED_CORE_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphared/error.hpp"

namespace alphared {

using StateId = std::uint32_t;

inline constexpr std::string_view kEpsilonText = "<eps>";
inline constexpr std::string_view kUnknownText = "<unk>";

namespace detail {

// Process-wide intern table. Entries are never removed, so the string
// addresses handed out stay valid for the lifetime of the program.
class SymbolPool {
 public:
  static SymbolPool &instance() {
    static SymbolPool pool;
    return pool;
  }

  std::pair<std::uint32_t, const std::string *> intern(std::string_view text) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = index_.find(text); it != index_.end())
      return {it->second, &texts_[it->second]};
    const auto id = static_cast<std::uint32_t>(texts_.size());
    texts_.emplace_back(text);
    index_.emplace(std::string_view(texts_.back()), id);
    return {id, &texts_.back()};
  }

 private:
  SymbolPool() {
    intern(kEpsilonText);
    intern(kUnknownText);
  }

  std::mutex mutex_;
  std::deque<std::string> texts_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
};

inline bool is_reserved_text(std::string_view text) {
  return text.size() >= 2 && text.front() == '<' && text.back() == '>';
}

inline bool is_blank(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace detail

// An interned token. Equality is identity of the interned text; ordering is
// byte order of the text, so ordered containers of symbols are canonical.
class Symbol {
 public:
  // Default-constructed symbols are epsilon.
  Symbol() : Symbol(kEpsilonText) {}

  explicit Symbol(std::string_view text) {
    if (text.empty())
      throw FstError(ErrorKind::InvalidSymbol, "empty symbol text");
    if (std::any_of(text.begin(), text.end(), detail::is_blank))
      throw FstError(ErrorKind::InvalidSymbol,
                     "whitespace in symbol '" + std::string(text) + "'");
    if (detail::is_reserved_text(text) && text != kEpsilonText &&
        text != kUnknownText)
      throw FstError(ErrorKind::InvalidSymbol,
                     "'" + std::string(text) + "' uses the reserved <...> namespace");
    std::tie(id_, text_) = detail::SymbolPool::instance().intern(text);
  }

  static Symbol epsilon() { return Symbol(kEpsilonText); }
  static Symbol unknown() { return Symbol(kUnknownText); }

  std::uint32_t id() const { return id_; }
  const std::string &text() const { return *text_; }

  // Ids 0 and 1 are claimed by the pool constructor.
  bool is_epsilon() const { return id_ == 0; }
  bool is_unknown() const { return id_ == 1; }
  bool is_reserved() const { return id_ < 2; }

  friend bool operator==(const Symbol &a, const Symbol &b) {
    return a.id_ == b.id_;
  }
  friend std::strong_ordering operator<=>(const Symbol &a, const Symbol &b) {
    if (a.id_ == b.id_) return std::strong_ordering::equal;
    return a.text_->compare(*b.text_) < 0 ? std::strong_ordering::less
                                          : std::strong_ordering::greater;
  }

 private:
  std::uint32_t id_ = 0;
  const std::string *text_ = nullptr;
};

using SymbolSet = std::set<Symbol>;
using Word = std::vector<Symbol>;

struct Arc {
  StateId src = 0;
  StateId dst = 0;
  Symbol input;
  Symbol output;

  bool is_identity_unknown() const {
    return input.is_unknown() && output.is_unknown();
  }

  friend bool operator==(const Arc &, const Arc &) = default;
};

// Canonical arc order: (src, input text, output text, dst).
inline bool canonical_less(const Arc &a, const Arc &b) {
  return std::tie(a.src, a.input, a.output, a.dst) <
         std::tie(b.src, b.input, b.output, b.dst);
}

// Per-FST size record; the four columns of a size table.
struct Counts {
  std::size_t states = 0;
  std::size_t arcs = 0;
  std::size_t input_symbols = 0;
  std::size_t output_symbols = 0;

  friend bool operator==(const Counts &, const Counts &) = default;
};

struct Alphabets {
  SymbolSet input;
  SymbolSet output;
  SymbolSet sigma;
};

class Fst;
Fst make_fst(StateId state_count, std::set<StateId> finals,
             std::vector<Arc> arcs, SymbolSet declared_in = {},
             SymbolSet declared_out = {});

// Immutable, validated transducer. Arcs are deduplicated and kept in
// canonical order; declared alphabets only hold symbols that do not already
// occur on the corresponding side of some arc.
class Fst {
 public:
  StateId state_count() const { return state_count_; }
  StateId initial() const { return 0; }
  const std::set<StateId> &finals() const { return finals_; }
  bool is_final(StateId q) const { return final_flags_[q]; }
  std::span<const Arc> arcs() const { return arcs_; }

  // Outgoing arcs of q; contiguous because arcs are sorted by source.
  std::span<const Arc> arcs_from(StateId q) const {
    return std::span<const Arc>(arcs_).subspan(
        offsets_[q], offsets_[q + 1] - offsets_[q]);
  }

  const SymbolSet &declared_in() const { return declared_in_; }
  const SymbolSet &declared_out() const { return declared_out_; }

  const SymbolSet &input_alphabet() const { return alphabets_.input; }
  const SymbolSet &output_alphabet() const { return alphabets_.output; }
  const SymbolSet &sigma() const { return alphabets_.sigma; }

  bool has_unknown_input() const { return has_unknown_input_; }

  friend bool operator==(const Fst &a, const Fst &b) {
    return a.state_count_ == b.state_count_ && a.finals_ == b.finals_ &&
           a.arcs_ == b.arcs_ && a.declared_in_ == b.declared_in_ &&
           a.declared_out_ == b.declared_out_;
  }

 private:
  friend Fst make_fst(StateId, std::set<StateId>, std::vector<Arc>,
                      SymbolSet, SymbolSet);

  Fst() = default;

  StateId state_count_ = 0;
  std::set<StateId> finals_;
  std::vector<bool> final_flags_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> offsets_;
  SymbolSet declared_in_;
  SymbolSet declared_out_;
  Alphabets alphabets_;
  bool has_unknown_input_ = false;
};

inline Fst make_fst(StateId state_count, std::set<StateId> finals,
                    std::vector<Arc> arcs, SymbolSet declared_in,
                    SymbolSet declared_out) {
  if (state_count == 0)
    throw FstError(ErrorKind::EmptyFst, "an FST needs at least one state");
  for (StateId q : finals) {
    if (q >= state_count)
      throw FstError(ErrorKind::InvalidStateIndex,
                     "final state " + std::to_string(q) + " >= state count " +
                         std::to_string(state_count));
  }
  for (const Arc &arc : arcs) {
    if (arc.src >= state_count || arc.dst >= state_count)
      throw FstError(ErrorKind::InvalidStateIndex,
                     "arc " + std::to_string(arc.src) + " -> " +
                         std::to_string(arc.dst) + " exceeds state count " +
                         std::to_string(state_count));
    if (arc.output.is_unknown() && !arc.input.is_unknown())
      throw FstError(ErrorKind::IllegalUnknownOutput,
                     "arc " + arc.input.text() + ":" + arc.output.text() +
                         " maps a known symbol to <unk>");
  }
  for (const SymbolSet *declared : {&declared_in, &declared_out}) {
    for (const Symbol &s : *declared) {
      if (s.is_reserved())
        throw FstError(ErrorKind::ReservedSymbolInAlphabet,
                       s.text() + " cannot be declared in an alphabet");
    }
  }

  std::sort(arcs.begin(), arcs.end(), canonical_less);
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Fst fst;
  fst.state_count_ = state_count;
  fst.final_flags_.assign(state_count, false);
  for (StateId q : finals) fst.final_flags_[q] = true;
  fst.finals_ = std::move(finals);

  fst.offsets_.assign(state_count + 1, 0);
  for (const Arc &arc : arcs) ++fst.offsets_[arc.src + 1];
  for (StateId q = 0; q < state_count; ++q)
    fst.offsets_[q + 1] += fst.offsets_[q];

  for (const Arc &arc : arcs) {
    if (!arc.input.is_reserved()) fst.alphabets_.input.insert(arc.input);
    if (!arc.output.is_reserved()) fst.alphabets_.output.insert(arc.output);
    if (arc.input.is_unknown()) fst.has_unknown_input_ = true;
  }
  for (const Symbol &s : declared_in) {
    if (fst.alphabets_.input.insert(s).second) fst.declared_in_.insert(s);
  }
  for (const Symbol &s : declared_out) {
    if (fst.alphabets_.output.insert(s).second) fst.declared_out_.insert(s);
  }
  fst.alphabets_.sigma = fst.alphabets_.input;
  fst.alphabets_.sigma.insert(fst.alphabets_.output.begin(),
                              fst.alphabets_.output.end());
  fst.arcs_ = std::move(arcs);
  return fst;
}

// Does an arc whose input is `arc_input` accept `token`? "<unk>" accepts
// exactly the tokens outside `sigma`.
inline bool matches(const Symbol &token, const Symbol &arc_input,
                    const SymbolSet &sigma) {
  if (arc_input == token) return true;
  return arc_input.is_unknown() && !sigma.contains(token);
}

inline Alphabets effective_alphabets(const Fst &fst) {
  return {fst.input_alphabet(), fst.output_alphabet(), fst.sigma()};
}

inline Counts fst_stats(const Fst &fst) {
  return {fst.state_count(), fst.arcs().size(), fst.input_alphabet().size(),
          fst.output_alphabet().size()};
}

// Ordered stages; the output tape of stage i feeds the input tape of
// stage i + 1.
class Cascade {
 public:
  explicit Cascade(std::vector<Fst> stages) : stages_(std::move(stages)) {
    if (stages_.empty())
      throw FstError(ErrorKind::EmptyCascade, "a cascade needs at least one stage");
  }

  std::size_t size() const { return stages_.size(); }
  const Fst &operator[](std::size_t i) const { return stages_[i]; }
  const std::vector<Fst> &stages() const & { return stages_; }
  std::vector<Fst> stages() && { return std::move(stages_); }

  friend bool operator==(const Cascade &, const Cascade &) = default;

 private:
  std::vector<Fst> stages_;
};

}  // namespace alphared

template <>
struct std::hash<alphared::Symbol> {
  std::size_t operator()(const alphared::Symbol &s) const noexcept {
    return std::hash<std::uint32_t>{}(s.id());
  }
};

#endif  // ALPHARED_CORE_HPP_
