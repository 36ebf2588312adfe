#include <gtest/gtest.h>

#include <random>
#include <set>

#include "csync/encoder.hpp"
#include "csync/generators.hpp"
#include "test_support.hpp"

namespace csync {
namespace {

using testing::a1;

// Enumerates all assignments over var_count ≤ 24 variables and returns the
// satisfying ones. Clause evaluation is written out here on purpose.
std::vector<Assignment> all_models(const Cnf& cnf) {
  std::vector<Assignment> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cnf.var_count); ++bits) {
    bool ok = true;
    for (const Clause& c : cnf.clauses) {
      bool sat = false;
      for (Literal l : c) sat = sat || (((bits >> (std::abs(l) - 1)) & 1u) == (l > 0 ? 1u : 0u));
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Assignment a(cnf.var_count);
    for (std::int32_t v = 1; v <= cnf.var_count; ++v) a.set(v, (bits >> (v - 1)) & 1u);
    out.push_back(a);
  }
  return out;
}

TEST(VarLayout, IsABijectionOntoOneToVarCount) {
  for (std::int32_t n = 1; n <= 5; ++n)
    for (std::int32_t m = 1; m <= 4; ++m)
      for (std::int32_t l = 1; l <= 4; ++l) {
        const VarLayout v{n, m, l};
        std::set<std::int32_t> seen;
        for (std::int32_t t = 0; t <= l; ++t)
          for (std::int32_t j = 1; j <= n; ++j) seen.insert(v.y(j, t));
        for (std::int32_t t = 1; t <= l; ++t)
          for (std::int32_t i = 1; i <= m; ++i) seen.insert(v.x(i, t));
        ASSERT_EQ(seen.size(), static_cast<std::size_t>(v.var_count()));
        EXPECT_EQ(*seen.begin(), 1);
        EXPECT_EQ(*seen.rbegin(), (m + n) * l + n);
      }
}

TEST(Encode, A1LengthOneCounts) {
  const CnfInstance inst = encode(a1(), 1);
  EXPECT_EQ(inst.cnf.var_count, 6);
  EXPECT_EQ(inst.cnf.clauses.size(), 9u);
  EXPECT_EQ(inst.groups, (GroupSizes{2, 2, 4, 1}));
}

TEST(Encode, A1LengthTwoCounts) {
  const CnfInstance inst = encode(a1(), 2);
  EXPECT_EQ(inst.cnf.var_count, 10);
  EXPECT_EQ(inst.cnf.clauses.size(), 15u);
  EXPECT_EQ(inst.groups, (GroupSizes{2, 4, 8, 1}));
}

TEST(Encode, A1LengthOneClauseList) {
  // y(1,0)=1 y(2,0)=2 x(1,1)=3 x(2,1)=4 y(1,1)=5 y(2,1)=6
  const std::vector<Clause> expected = {{1},         {2},         {3, 4},  {-3, -4}, {-1, -3, 5},
                                        {-1, -4, 6}, {-2, -3, 5}, {-2, -4}, {-5, -6}};
  EXPECT_EQ(encode(a1(), 1).cnf.clauses, expected);
}

TEST(Encode, RejectsZeroLength) { EXPECT_THROW(encode(a1(), 0), std::invalid_argument); }

TEST(Encode, EveryModelOfA1LengthOneDecodesToA) {
  const CnfInstance inst = encode(a1(), 1);
  const auto models = all_models(inst.cnf);
  ASSERT_EQ(models.size(), 1u);  // x(1,1) forces y(1,1), S then forces ¬y(2,1)
  for (const auto& m : models) {
    const Word w = decode_word(m, inst.layout);
    EXPECT_EQ(w, parse_word("a"));
    EXPECT_TRUE(is_carefully_synchronizing(a1(), w));
  }
}

TEST(DecodeWord, ReadsLetters) {
  const VarLayout v{2, 2, 1};
  Assignment a(v.var_count());
  a.set(v.x(1, 1), true);
  EXPECT_EQ(decode_word(a, v), parse_word("a"));
}

TEST(DecodeWord, ReportsStepViolatingExactlyOne) {
  const VarLayout v{2, 2, 2};
  Assignment a(v.var_count());
  a.set(v.x(1, 1), true);
  a.set(v.x(1, 2), true);
  a.set(v.x(2, 2), true);
  try {
    decode_word(a, v);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos);
  }
  Assignment none(v.var_count());
  EXPECT_THROW(decode_word(none, v), std::invalid_argument);
}

TEST(EncodeProperty, CountExactness) {
  std::mt19937_64 rng(21);
  for (std::size_t n = 1; n <= 8; ++n)
    for (std::size_t m = 1; m <= 8; ++m) {
      const Pfa pfa = testing::random_table(n, m, 0.25, rng);
      for (std::int32_t l = 1; l <= 6; ++l) {
        const CnfInstance inst = encode(pfa, l);
        ASSERT_EQ(static_cast<std::size_t>(inst.cnf.var_count), (m + n) * l + n);
        ASSERT_EQ(inst.cnf.clauses.size(), l * (m * (m - 1) / 2 + m * n + 1) + n * (n + 1) / 2);
      }
    }
}

// Walks the clause list group by group and checks each clause's shape,
// including that each (t, q_j, a_i) contributes exactly one transition clause
// of the form matching whether δ(q_j, a_i) is defined.
TEST(EncodeProperty, GroupStructure) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 6, m = 1 + rng() % 4;
    const Pfa pfa = testing::random_table(n, m, 0.3, rng);
    const std::int32_t l = 1 + static_cast<std::int32_t>(rng() % 4);
    const CnfInstance inst = encode(pfa, l);
    const VarLayout& v = inst.layout;
    std::size_t k = 0;
    const auto& cs = inst.cnf.clauses;
    for (std::int32_t j = 1; j <= v.n; ++j) ASSERT_EQ(cs[k++], (Clause{v.y(j, 0)}));
    for (std::int32_t t = 1; t <= l; ++t) {
      ASSERT_EQ(cs[k++].size(), m);
      for (std::size_t p = 0; p < m * (m - 1) / 2; ++p) ASSERT_EQ(cs[k++].size(), 2u);
      for (State j = 1; j <= n; ++j)
        for (Letter i = 1; i <= m; ++i) {
          const Clause& c = cs[k++];
          ASSERT_EQ(c[0], -v.y(static_cast<std::int32_t>(j), t - 1));
          ASSERT_EQ(c[1], -v.x(static_cast<std::int32_t>(i), t));
          if (pfa.defined(j, i)) {
            ASSERT_EQ(c.size(), 3u);
            ASSERT_EQ(c[2], v.y(static_cast<std::int32_t>(pfa.next(j, i)), t));
          } else {
            ASSERT_EQ(c.size(), 2u);
          }
        }
    }
    for (std::size_t p = 0; p < n * (n - 1) / 2; ++p) ASSERT_EQ(cs[k++].size(), 2u);
    EXPECT_EQ(k, cs.size());
  }
}

TEST(Scale, IdentityAtLengthOne) {
  const CnfInstance t = encode(a1(), 1);
  EXPECT_EQ(scale(t, 1), t);
}

TEST(Scale, MatchesDirectEncoding) {
  EXPECT_EQ(scale(encode(a1(), 1), 2), encode(a1(), 2));
  EXPECT_EQ(scale(encode(pn(4), 1), 5), encode(pn(4), 5));
}

TEST(Scale, RejectsLongerTemplates) { EXPECT_THROW(scale(encode(a1(), 2), 3), std::invalid_argument); }

TEST(ScaleProperty, EqualsEncodeOnRandomAutomata) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Pfa pfa = testing::random_table(1 + rng() % 6, 1 + rng() % 4, 0.25, rng);
    const CnfInstance tmpl = encode(pfa, 1);
    for (std::int32_t l = 1; l <= 6; ++l) ASSERT_EQ(scale(tmpl, l), encode(pfa, l));
  }
}

TEST(ToDimacs, A1Instance) {
  const std::string text = to_dimacs(encode(a1(), 1));
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> content;
  std::size_t comments = 0;
  while (std::getline(in, line)) {
    if (line.rfind("c ", 0) == 0)
      ++comments;
    else
      content.push_back(line);
  }
  EXPECT_EQ(comments, 1u);
  ASSERT_EQ(content.size(), 10u);
  EXPECT_EQ(content[0], "p cnf 6 9");
  EXPECT_EQ(content[5], "-1 -3 5 0");
  EXPECT_EQ(parse_dimacs(text), encode(a1(), 1).cnf);
  EXPECT_NE(text.find("n=2 m=2 length=1"), std::string::npos);
}

// Forward direction: the assignment induced by a CSW satisfies the instance.
TEST(EncodingProperty, WordAssignmentSatisfies) {
  std::mt19937_64 rng(24);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Pfa pfa = testing::random_table(2 + rng() % 5, 2, 0.15, rng);
    Word w(1 + rng() % 6);
    for (auto& l : w) l = static_cast<Letter>(1 + rng() % 2);
    const bool csw = is_carefully_synchronizing(pfa, w);
    const CnfInstance inst = encode(pfa, static_cast<std::int32_t>(w.size()));
    if (csw) {
      ++checked;
      EXPECT_TRUE(satisfies(inst.cnf, word_assignment(pfa, w)));
    }
  }
  EXPECT_GT(checked, 100);
}

// Backward direction and the one-to-one correspondence: letter restrictions of
// the models are exactly the CSWs of that length.
TEST(EncodingProperty, ModelsCorrespondToCarefulWords) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 150; ++trial) {
    const Pfa pfa = testing::random_table(1 + rng() % 3, 2, 0.2, rng);
    const std::int32_t l = 1 + static_cast<std::int32_t>(rng() % 3);
    const CnfInstance inst = encode(pfa, l);
    if (inst.cnf.var_count > 20) continue;
    std::set<Word> decoded;
    for (const auto& m : all_models(inst.cnf)) {
      const Word w = decode_word(m, inst.layout);
      ASSERT_TRUE(is_carefully_synchronizing(pfa, w));
      decoded.insert(w);
    }
    std::set<Word> expected;
    testing::for_each_word(2, static_cast<std::size_t>(l), [&](const Word& w) {
      if (testing::naive_csw(pfa, w)) expected.insert(w);
    });
    EXPECT_EQ(decoded, expected);
  }
}

}  // namespace
}  // namespace csync
