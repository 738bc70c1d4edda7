// reduce.hpp

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
// Intermediate alphabet reduction for transducer cascades.
//
// For a pair (upstream, downstream) applied in sequence, two intermediate
// symbols are equivalent when, at every state of the downstream FST, the
// arcs reading them agree on (output, destination). Each equivalence class
// is collapsed onto its representative on the upstream output tape and on
// the downstream input tape. The relation of the whole cascade is unchanged;
// the relations of the individual stages are not.

#ifndef ALPHARED_REDUCE_HPP_
#define ALPHARED_REDUCE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphared/core.hpp"
#include "alphared/error.hpp"
#include "alphared/textio.hpp"

namespace alphared {

using Signature = std::set<std::pair<Symbol, StateId>>;
using SymbolMap = std::map<Symbol, Symbol>;

// Equivalence classes over a candidate set. Each class is sorted by symbol
// text and its representative is its first (smallest) member; classes are
// ordered by representative.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<Symbol>> classes)
      : classes_(std::move(classes)) {
    for (auto &c : classes_) std::sort(c.begin(), c.end());
    std::sort(classes_.begin(), classes_.end(),
              [](const auto &a, const auto &b) { return a.front() < b.front(); });
  }

  const std::vector<std::vector<Symbol>> &classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  const Symbol &representative(std::size_t i) const { return classes_[i].front(); }

  // Maps every candidate to its representative.
  SymbolMap representatives() const {
    SymbolMap rep;
    for (const auto &c : classes_)
      for (const Symbol &s : c) rep.emplace(s, c.front());
    return rep;
  }

  std::size_t merged_class_count() const {
    return static_cast<std::size_t>(std::count_if(
        classes_.begin(), classes_.end(), [](const auto &c) { return c.size() > 1; }));
  }

  std::size_t symbols_eliminated() const {
    std::size_t n = 0;
    for (const auto &c : classes_) n += c.size() - 1;
    return n;
  }

  bool all_singletons() const { return symbols_eliminated() == 0; }

  friend bool operator==(const Partition &, const Partition &) = default;

 private:
  std::vector<std::vector<Symbol>> classes_;
};

inline Signature signature(const Fst &fst, StateId q, const Symbol &symbol) {
  Signature sig;
  for (const Arc &arc : fst.arcs_from(q))
    if (arc.input == symbol) sig.emplace(arc.output, arc.dst);
  return sig;
}

namespace detail {

// Arcs at a state are sorted by (input, output, dst), so the arcs reading one
// symbol form a run whose (output, dst) sequence is that symbol's signature.
struct SignatureRun {
  std::uint32_t member;
  std::span<const Arc> arcs;
};

inline bool run_less(std::span<const Arc> a, std::span<const Arc> b) {
  return std::lexicographical_compare(
      a.begin(), a.end(), b.begin(), b.end(), [](const Arc &x, const Arc &y) {
        return std::pair(x.output.id(), x.dst) < std::pair(y.output.id(), y.dst);
      });
}

inline bool run_equal(std::span<const Arc> a, std::span<const Arc> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Arc &x, const Arc &y) {
                      return x.output == y.output && x.dst == y.dst;
                    });
}

inline void check_candidates(const SymbolSet &candidates) {
  for (const Symbol &s : candidates) {
    if (s.is_reserved())
      throw FstError(ErrorKind::ReservedCandidate,
                     s.text() + " can never be merged with other symbols");
  }
}

}  // namespace detail

// Coarsest partition of `candidates` under signature equality at every state
// of `fst`, refining states in the order given. The result does not depend on
// the order; refinement stops early once every class is a singleton.
inline Partition compute_partition(const Fst &fst, const SymbolSet &candidates,
                                   std::span<const StateId> scan_order) {
  detail::check_candidates(candidates);
  const std::vector<Symbol> members(candidates.begin(), candidates.end());
  std::unordered_map<Symbol, std::uint32_t> index;
  for (std::uint32_t i = 0; i < members.size(); ++i) index.emplace(members[i], i);

  std::vector<std::uint32_t> class_of(members.size(), 0);
  std::vector<std::size_t> class_size;
  if (!members.empty()) class_size.push_back(members.size());

  std::vector<detail::SignatureRun> runs;
  for (StateId q : scan_order) {
    if (class_size.size() == members.size()) break;

    runs.clear();
    const auto arcs = fst.arcs_from(q);
    for (std::size_t i = 0; i < arcs.size();) {
      std::size_t j = i;
      while (j < arcs.size() && arcs[j].input == arcs[i].input) ++j;
      if (auto it = index.find(arcs[i].input); it != index.end())
        runs.push_back({it->second, arcs.subspan(i, j - i)});
      i = j;
    }
    std::sort(runs.begin(), runs.end(), [&](const auto &a, const auto &b) {
      if (class_of[a.member] != class_of[b.member])
        return class_of[a.member] < class_of[b.member];
      return detail::run_less(a.arcs, b.arcs);
    });

    // Members present at q are grouped by (class, signature). Members of a
    // touched class that are absent at q have the empty signature and keep
    // the old class id; if none are absent, the first group keeps it.
    for (std::size_t i = 0; i < runs.size();) {
      const std::uint32_t old_class = class_of[runs[i].member];
      std::size_t end = i;
      while (end < runs.size() && class_of[runs[end].member] == old_class) ++end;
      const std::size_t present = end - i;
      bool keep_first = present == class_size[old_class];
      for (std::size_t g = i; g < end;) {
        std::size_t h = g + 1;
        while (h < end && detail::run_equal(runs[g].arcs, runs[h].arcs)) ++h;
        if (keep_first) {
          keep_first = false;
        } else if (h - g != class_size[old_class]) {
          const auto fresh = static_cast<std::uint32_t>(class_size.size());
          class_size.push_back(h - g);
          class_size[old_class] -= h - g;
          for (std::size_t k = g; k < h; ++k) class_of[runs[k].member] = fresh;
        }
        g = h;
      }
      i = end;
    }
  }

  std::vector<std::vector<Symbol>> classes(class_size.size());
  for (std::size_t i = 0; i < members.size(); ++i)
    classes[class_of[i]].push_back(members[i]);
  return Partition(std::move(classes));
}

inline Partition compute_partition(const Fst &fst, const SymbolSet &candidates) {
  std::vector<StateId> order(fst.state_count());
  std::iota(order.begin(), order.end(), StateId{0});
  return compute_partition(fst, candidates, order);
}

// Intermediate symbols that may be merged between `upstream` and
// `downstream`. If the upstream FST reads "<unk>", its behaviour depends on
// which symbols it knows, so only symbols on its output alphabet are
// eligible: any other symbol could be passed through unchanged, or would
// become newly known upstream when chosen as a representative.
inline SymbolSet eligible_candidates(const Fst &upstream, const Fst &downstream) {
  SymbolSet candidates = downstream.input_alphabet();
  if (upstream.has_unknown_input())
    std::erase_if(candidates, [&](const Symbol &s) {
      return !upstream.output_alphabet().contains(s);
    });
  return candidates;
}

namespace detail {

inline Symbol lookup(const SymbolMap &rep, const Symbol &s) {
  auto it = rep.find(s);
  return it == rep.end() ? s : it->second;
}

}  // namespace detail

// Rewrites the output tape of `upstream` through `rep`. When `upstream` reads
// "<unk>", the symbols mapped away stay declared on the output side so that
// its alphabet, and therefore its "<unk>" matching, is unchanged.
inline Fst relabel_output_side(const Fst &upstream, const SymbolMap &rep) {
  std::vector<Arc> arcs(upstream.arcs().begin(), upstream.arcs().end());
  for (Arc &arc : arcs) arc.output = detail::lookup(rep, arc.output);
  SymbolSet declared_out;
  for (const Symbol &s : upstream.declared_out())
    declared_out.insert(detail::lookup(rep, s));
  if (upstream.has_unknown_input())
    declared_out.insert(upstream.output_alphabet().begin(),
                        upstream.output_alphabet().end());
  return make_fst(upstream.state_count(), upstream.finals(), std::move(arcs),
                  upstream.declared_in(), std::move(declared_out));
}

// Rewrites the input tape of `downstream` through `rep`; symbols mapped away
// leave its input alphabet.
inline Fst relabel_input_side(const Fst &downstream, const SymbolMap &rep) {
  std::vector<Arc> arcs(downstream.arcs().begin(), downstream.arcs().end());
  for (Arc &arc : arcs) arc.input = detail::lookup(rep, arc.input);
  SymbolSet declared_in;
  for (const Symbol &s : downstream.declared_in())
    declared_in.insert(detail::lookup(rep, s));
  return make_fst(downstream.state_count(), downstream.finals(), std::move(arcs),
                  std::move(declared_in), downstream.declared_out());
}

struct PairResult {
  Fst upstream;
  Fst downstream;
  Partition partition;
  // Counts of the downstream FST, which owns the reduced input alphabet.
  ReductionReport report;
  ReductionReport upstream_report;
};

inline PairResult reduce_pair(const Fst &upstream, const Fst &downstream) {
  Partition partition =
      compute_partition(downstream, eligible_candidates(upstream, downstream));
  const SymbolMap rep = partition.representatives();
  Fst up = relabel_output_side(upstream, rep);
  Fst down = relabel_input_side(downstream, rep);

  ReductionReport report{1, fst_stats(downstream), fst_stats(down),
                         partition.merged_class_count(),
                         partition.symbols_eliminated()};
  ReductionReport upstream_report{0, fst_stats(upstream), fst_stats(up),
                                  partition.merged_class_count(),
                                  partition.symbols_eliminated()};
  return {std::move(up), std::move(down), std::move(partition), report,
          upstream_report};
}

enum class SweepOrder {
  // Last intermediate alphabet first. Each step can only help the next.
  Reverse,
  // First intermediate alphabet first; for comparison only.
  Forward,
};

struct CascadeResult {
  Cascade cascade;
  // One per adjacent pair, in processing order. stage_index is the 0-based
  // index of the pair's downstream stage.
  std::vector<ReductionReport> reports;
  std::vector<Partition> partitions;
};

inline CascadeResult reduce_cascade(const Cascade &cascade,
                                    SweepOrder order = SweepOrder::Reverse) {
  std::vector<Fst> stages = cascade.stages();
  CascadeResult result{cascade, {}, {}};
  const std::size_t pairs = stages.size() - 1;
  for (std::size_t step = 0; step < pairs; ++step) {
    const std::size_t i = order == SweepOrder::Reverse ? pairs - 1 - step : step;
    PairResult pair = reduce_pair(stages[i], stages[i + 1]);
    pair.report.stage_index = i + 1;
    result.reports.push_back(pair.report);
    result.partitions.push_back(std::move(pair.partition));
    stages[i] = std::move(pair.upstream);
    stages[i + 1] = std::move(pair.downstream);
  }
  result.cascade = Cascade(std::move(stages));
  return result;
}

// Per-FST before/after rows for a size table, with the merge counts of the
// intermediate alphabet each stage reads.
inline std::vector<ReductionReport> stage_reports(
    const Cascade &before, const Cascade &after,
    const std::vector<ReductionReport> &pair_reports = {}) {
  std::vector<ReductionReport> rows;
  for (std::size_t i = 0; i < before.size(); ++i) {
    ReductionReport row{i, fst_stats(before[i]), fst_stats(after[i]), 0, 0};
    for (const auto &p : pair_reports) {
      if (p.stage_index != i) continue;
      row.classes_merged = p.classes_merged;
      row.symbols_eliminated = p.symbols_eliminated;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace alphared

#endif  // ALPHARED_REDUCE_HPP_
