// gen.hpp

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
// Seeded random cascades with planted symbol equivalences.
//
// Randomness comes from xoshiro256** seeded through splitmix64, with integer
// ranges drawn by rejection sampling and probabilities from the top 53 bits.
// None of it goes through <random> distributions, whose output differs
// between standard libraries, so a seed yields the same cascade everywhere.

#ifndef ALPHARED_GEN_HPP_
#define ALPHARED_GEN_HPP_

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "alphared/core.hpp"
#include "alphared/error.hpp"

namespace alphared {

// splitmix64 (Steele, Lea, Flood), used only to expand a seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** 1.0 (Blackman, Vigna).
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto &word : s_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return next();  // full 64-bit range
    const std::uint64_t limit = (0 - span) % span;  // 2^64 mod span
    std::uint64_t x;
    do {
      x = next();
    } while (x < limit);
    return lo + x % span;
  }

  // Bernoulli(p) for p in [0, 1].
  bool chance(double p) {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

struct Range {
  std::size_t lo = 1;
  std::size_t hi = 1;
};

struct GenParams {
  std::uint64_t seed = 0;
  std::size_t stages = 3;
  Range states_per_stage{2, 6};
  Range alphabet_size{2, 6};
  Range arcs_per_state{1, 3};
  // Chance that a symbol (other than the first) of an intermediate or output
  // tape is planted as a clone of an earlier symbol.
  double redundancy = 0.3;
  double final_prob = 0.4;
  double epsilon_prob = 0.05;
  double unknown_prob = 0.05;

  void validate() const {
    auto fail = [](const std::string &what) {
      throw FstError(ErrorKind::InvalidParams, what);
    };
    if (stages < 2) fail("a cascade needs at least 2 stages");
    for (const Range *r : {&states_per_stage, &alphabet_size, &arcs_per_state}) {
      if (r->lo == 0 && r != &arcs_per_state) fail("ranges must start at 1 or more");
      if (r->lo > r->hi) fail("empty range");
    }
    if (!(redundancy >= 0.0 && redundancy <= 1.0)) fail("redundancy must lie in [0, 1]");
    if (!(final_prob > 0.0 && final_prob <= 1.0)) fail("final_prob must lie in (0, 1]");
    if (!(epsilon_prob >= 0.0 && epsilon_prob < 1.0)) fail("epsilon_prob must lie in [0, 1)");
    if (!(unknown_prob >= 0.0 && unknown_prob < 1.0)) fail("unknown_prob must lie in [0, 1)");
  }
};

namespace detail {

// Tape t is spelled with letter 'a' + t: a0 a1 ..., then b0 b1 ... .
inline std::string tape_symbol(std::size_t tape, std::size_t index) {
  std::string name(1, static_cast<char>('a' + tape % 26));
  if (tape >= 26) name += std::to_string(tape / 26);
  return name + std::to_string(index);
}

struct Tape {
  std::vector<Symbol> symbols;
  // donor[i] == i for an original symbol, else the original it clones.
  std::vector<std::size_t> donor;
  std::vector<std::size_t> originals;
};

}  // namespace detail

// Stage i reads tape i and writes tape i + 1; every symbol of a tape is
// declared on both FSTs that touch it, so adjacent stages share an alphabet.
// A planted clone reads exactly the arcs its donor reads, at every state.
inline Cascade random_cascade(const GenParams &params) {
  params.validate();
  Xoshiro256 rng(params.seed);
  auto draw = [&](const Range &r) {
    return static_cast<std::size_t>(rng.uniform(r.lo, r.hi));
  };

  std::vector<detail::Tape> tapes(params.stages + 1);
  for (std::size_t t = 0; t < tapes.size(); ++t) {
    auto &tape = tapes[t];
    const std::size_t n = draw(params.alphabet_size);
    for (std::size_t j = 0; j < n; ++j) {
      tape.symbols.emplace_back(detail::tape_symbol(t, j));
      // Tape 0 feeds no reduction, so it gets no clones.
      if (t > 0 && j > 0 && rng.chance(params.redundancy)) {
        tape.donor.push_back(
            tape.originals[rng.uniform(0, tape.originals.size() - 1)]);
      } else {
        tape.donor.push_back(j);
        tape.originals.push_back(j);
      }
    }
  }

  std::vector<Fst> stages;
  for (std::size_t i = 0; i < params.stages; ++i) {
    const auto &in = tapes[i];
    const auto &out = tapes[i + 1];
    const auto n = static_cast<StateId>(draw(params.states_per_stage));
    auto pick_output = [&]() {
      return out.symbols[rng.uniform(0, out.symbols.size() - 1)];
    };

    std::vector<Arc> arcs;
    for (StateId q = 0; q < n; ++q) {
      const std::size_t m = draw(params.arcs_per_state);
      for (std::size_t k = 0; k < m; ++k) {
        Arc arc;
        arc.src = q;
        arc.dst = static_cast<StateId>(rng.uniform(0, n - 1));
        if (rng.chance(params.epsilon_prob)) {
          // Epsilon-input arcs only move forward, except for silent
          // self-loops, so no epsilon cycle can emit output.
          arc.input = Symbol::epsilon();
          if (q + 1 < n) {
            arc.dst = static_cast<StateId>(rng.uniform(q + 1, n - 1));
            arc.output = rng.chance(0.5) ? Symbol::epsilon() : pick_output();
          } else {
            arc.dst = q;
            arc.output = Symbol::epsilon();
          }
        } else if (rng.chance(params.unknown_prob)) {
          arc.input = Symbol::unknown();
          arc.output = rng.chance(0.5) ? Symbol::unknown() : pick_output();
        } else {
          arc.input = in.symbols[in.originals[rng.uniform(0, in.originals.size() - 1)]];
          arc.output = rng.chance(params.epsilon_prob) ? Symbol::epsilon()
                                                       : pick_output();
        }
        arcs.push_back(arc);
      }
    }

    // Copy each donor's arcs to its clones.
    const std::size_t base = arcs.size();
    for (std::size_t j = 0; j < in.symbols.size(); ++j) {
      if (in.donor[j] == j) continue;
      const Symbol &donor = in.symbols[in.donor[j]];
      for (std::size_t a = 0; a < base; ++a) {
        if (arcs[a].input != donor) continue;
        Arc clone = arcs[a];
        clone.input = in.symbols[j];
        arcs.push_back(clone);
      }
    }

    std::set<StateId> finals;
    for (StateId q = 0; q < n; ++q)
      if (rng.chance(params.final_prob)) finals.insert(q);
    if (finals.empty()) finals.insert(static_cast<StateId>(rng.uniform(0, n - 1)));

    stages.push_back(make_fst(n, std::move(finals), std::move(arcs),
                              SymbolSet(in.symbols.begin(), in.symbols.end()),
                              SymbolSet(out.symbols.begin(), out.symbols.end())));
  }
  return Cascade(std::move(stages));
}

}  // namespace alphared

#endif  // ALPHARED_GEN_HPP_
