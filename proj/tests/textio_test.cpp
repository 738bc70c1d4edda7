// textio_test.cpp

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

#include <gtest/gtest.h>

#include "alphared/gen.hpp"
#include "alphared/textio.hpp"
#include "test_util.hpp"

namespace alphared {
namespace {

using testing::sym;
using testing::syms;

TEST(ParseFstTest, SmallestArcFile) {
  const Fst f = parse_fst("0 1 a x\n1\n");
  EXPECT_EQ(f.state_count(), 2u);
  ASSERT_EQ(f.arcs().size(), 1u);
  EXPECT_EQ(f.arcs()[0], (Arc{0, 1, sym("a"), sym("x")}));
  EXPECT_EQ(f.finals(), (std::set<StateId>{1}));
}

TEST(ParseFstTest, EpsilonLoop) {
  const Fst f = parse_fst("0 0 <eps> y\n0\n");
  EXPECT_EQ(f.state_count(), 1u);
  ASSERT_EQ(f.arcs().size(), 1u);
  EXPECT_TRUE(f.arcs()[0].input.is_epsilon());
  EXPECT_EQ(f.arcs()[0].output, sym("y"));
  EXPECT_TRUE(f.is_final(0));
}

TEST(ParseFstTest, CommentsBlanksTabsAndDeclarations) {
  const Fst f = parse_fst("# header\n\n0\t1   a  x\n!isym b\n!osym z\n  \n1\n");
  EXPECT_EQ(f.input_alphabet(), syms("a b"));
  EXPECT_EQ(f.output_alphabet(), syms("x z"));
  EXPECT_EQ(f.declared_in(), syms("b"));
}

TEST(ParseFstTest, StateCountFromLargestIndex) {
  EXPECT_EQ(parse_fst("").state_count(), 1u);
  EXPECT_EQ(parse_fst("5\n").state_count(), 6u);
  EXPECT_EQ(parse_fst("0 3 a a\n").state_count(), 4u);
}

TEST(ParseFstTest, SyntaxErrors) {
  for (const char *bad : {"0 1 a\n", "0 1 a b c\n", "x 1 a b\n", "0 -1 a b\n",
                          "!isym\n", "!osym a b\n", "1.5\n", "0 1 <foo> a\n",
                          "99999999999 0 a a\n"}) {
    try {
      parse_fst(bad);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const FstError &e) {
      EXPECT_EQ(e.kind(), ErrorKind::SyntaxError) << bad;
    }
  }
}

TEST(ParseFstTest, PropagatesModelErrors) {
  try {
    parse_fst("0 1 a <unk>\n");
    FAIL();
  } catch (const FstError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllegalUnknownOutput);
  }
  try {
    parse_fst("!isym <eps>\n");
    FAIL();
  } catch (const FstError &e) {
    EXPECT_EQ(e.kind(), ErrorKind::ReservedSymbolInAlphabet);
  }
}

TEST(SerializeFstTest, CanonicalForm) {
  EXPECT_EQ(serialize_fst(make_fst(2, {1}, {{0, 1, sym("a"), sym("a")}})), "0 1 a a\n1\n");
  EXPECT_EQ(serialize_fst(parse_fst("1\n0 1 b y\n!osym w\n0 1 a x\n!isym c\n!isym b\n")),
            "!isym c\n!osym w\n0 1 a x\n0 1 b y\n1\n");
}

TEST(SerializeFstTest, KeepsUnusedDeclarations) {
  const Fst f = make_fst(2, {1}, {{0, 1, sym("a"), sym("x")}}, syms("b"));
  EXPECT_NE(serialize_fst(f).find("!isym b\n"), std::string::npos);
}

TEST(SerializeFstTest, RoundTripOnGeneratedFsts) {
  GenParams params;
  params.epsilon_prob = 0.2;
  params.unknown_prob = 0.2;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    params.seed = seed;
    for (const Fst &f : random_cascade(params).stages()) {
      const std::string text = serialize_fst(f);
      const Fst back = parse_fst(text);
      EXPECT_EQ(back, f);
      EXPECT_EQ(serialize_fst(back), text);
    }
  }
}

TEST(ManifestTest, ParsesPathsInOrder) {
  EXPECT_EQ(parse_manifest("t1.fst\nt2.fst\n").paths,
            (std::vector<std::string>{"t1.fst", "t2.fst"}));
  EXPECT_EQ(parse_manifest("# c\n  a.fst \n\nsub/b.fst").paths,
            (std::vector<std::string>{"a.fst", "sub/b.fst"}));
}

TEST(ManifestTest, EmptyIsASyntaxError) {
  for (const char *text : {"", "\n", "# only a comment\n"}) {
    try {
      parse_manifest(text);
      ADD_FAILURE() << "accepted empty manifest";
    } catch (const FstError &e) {
      EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    }
  }
}

TEST(ReportTest, HeaderRowsAndTotal) {
  std::vector<ReductionReport> rows = {
      {0, {2, 2, 2, 1}, {2, 1, 1, 1}, 1, 1},
      {1, {3, 4, 1, 2}, {3, 4, 1, 2}, 0, 0},
  };
  EXPECT_EQ(write_report(rows),
            "fst\tstates_before\tarcs_before\tinsyms_before\toutsyms_before\t"
            "states_after\tarcs_after\tinsyms_after\toutsyms_after\n"
            "1\t2\t2\t2\t1\t2\t1\t1\t1\n"
            "2\t3\t4\t1\t2\t3\t4\t1\t2\n"
            "total\t5\t6\t-\t-\t5\t5\t-\t-\n");
}

TEST(ReportTest, TwelveStageTotals) {
  // Per-FST (states, arcs before, arcs after) of a 12-stage cascade; the
  // totals row must match the independently summed values.
  const std::size_t states[] = {10487, 604, 27704, 3613, 1276, 3293,
                                5544,  396, 7009,  6033, 573,  2};
  const std::size_t before[] = {404903, 28569, 225215, 61259,   128222, 29079,
                                166704, 19008, 370419, 1156053, 114328, 288};
  const std::size_t after[] = {404903, 28569, 225215, 61259,  124754, 29079,
                               90024,  12276, 204411, 498506, 52801,  34};
  std::vector<ReductionReport> rows;
  for (int i = 0; i < 12; ++i)
    rows.push_back({static_cast<std::size_t>(i), {states[i], before[i], 0, 0},
                    {states[i], after[i], 0, 0}, 0, 0});
  const std::string report = write_report(rows);
  EXPECT_NE(report.find("\ntotal\t66534\t2704047\t-\t-\t66534\t1731831\t-\t-\n"),
            std::string::npos);
  EXPECT_NE(report.find("\n12\t2\t288\t0\t0\t2\t34\t0\t0\n"), std::string::npos);
}

TEST(ReportTest, UnreducedFstHasEqualColumns) {
  const Fst f = parse_fst("0 1 a a\n1\n");
  const std::string report =
      write_report({{0, fst_stats(f), fst_stats(f), 0, 0}});
  EXPECT_NE(report.find("\n1\t2\t1\t1\t1\t2\t1\t1\t1\n"), std::string::npos);
}

}  // namespace
}  // namespace alphared
