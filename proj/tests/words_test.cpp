#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "freestate/errors.hpp"
#include "freestate/words.hpp"
#include "support/oracles.hpp"

namespace fs = freestate;

namespace {

fs::Word W(int n, std::vector<int> t) { return fs::Word::from_tokens(n, t); }

oracle::Tokens tokens(const fs::Word& w) {
  oracle::Tokens t;
  for (const auto& l : w.letters()) t.push_back(l.token());
  return t;
}

}  // namespace

TEST(Words, ParseAndFormat) {
  EXPECT_EQ(tokens(fs::parse_word("1 -2 1", 2)), (oracle::Tokens{1, -2, 1}));
  EXPECT_EQ(tokens(fs::parse_word("  1   -1 2 ", 2)), (oracle::Tokens{2}));
  EXPECT_TRUE(fs::parse_word("", 3).empty());
  EXPECT_EQ(fs::format_word(W(2, {1, -2, 1})), "1 -2 1");
  EXPECT_EQ(fs::format_word(W(2, {})), "");
  EXPECT_EQ(fs::pretty_word(W(2, {1, -2})), "u1 u2^-1");
  EXPECT_EQ(fs::pretty_word(W(2, {})), "1");
}

TEST(Words, ParseErrorsNameTheToken) {
  auto message = [](const char* text, int n) {
    try {
      fs::parse_word(text, n);
    } catch (const fs::ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("1 3", 2).find("'3'"), std::string::npos);
  EXPECT_NE(message("1 0", 2).find("'0'"), std::string::npos);
  EXPECT_NE(message("1 x", 2).find("'x'"), std::string::npos);
  EXPECT_NE(message("-3", 2).find("'-3'"), std::string::npos);
}

TEST(Words, LetterCount) {
  const auto w = W(2, {1, -2, 1});
  EXPECT_EQ(fs::letter_count(w, 1), 2);
  EXPECT_EQ(fs::letter_count(w, 2), 1);
  EXPECT_EQ(fs::letter_count(W(3, {}), 3), 0);
}

TEST(Words, GammaExamples) {
  EXPECT_EQ(fs::gamma_pair(W(2, {-1, 2}), 1, 2), 1);
  EXPECT_EQ(fs::gamma_pair(W(2, {1, -2}), 1, 2), 0);
  EXPECT_EQ(fs::gamma_pair(W(3, {-2, 1, -3, 1}), 1, 3), 1);
  EXPECT_EQ(fs::gamma_total(W(2, {-1, 2})), 1);
  EXPECT_EQ(fs::gamma_total(W(3, {1, 2, 3})), 0);
  EXPECT_EQ(fs::gamma_total(W(3, {-1, 2, -3, 1})), 2);
  EXPECT_THROW(fs::gamma_pair(W(2, {1}), 1, 1), fs::PreconditionError);
  EXPECT_THROW(fs::letter_count(W(2, {1}), 3), fs::PreconditionError);
}

TEST(Words, GammaMatchesOracleExhaustively) {
  for (int n : {2, 3}) {
    for (const auto& w : fs::enumerate_words(n, 5)) {
      const auto t = tokens(w);
      int pair_sum = 0;
      for (int i = 1; i <= n; ++i) {
        ASSERT_EQ(fs::letter_count(w, i), oracle::count_index(t, i));
        for (int j = 1; j < i; ++j) {
          ASSERT_EQ(fs::gamma_pair(w, i, j), oracle::junctions(t, i, j));
          ASSERT_EQ(fs::gamma_pair(w, j, i), fs::gamma_pair(w, i, j));
          pair_sum += fs::gamma_pair(w, i, j);
        }
      }
      ASSERT_EQ(fs::gamma_total(w), pair_sum);
      ASSERT_EQ(fs::gamma_total(w), oracle::all_junctions(t));
    }
  }
}

TEST(Words, EnumerationCountsAndOrder) {
  EXPECT_EQ(fs::enumerate_words(2, 0).size(), 1u);
  EXPECT_EQ(fs::enumerate_words(2, 1).size(), 5u);
  EXPECT_EQ(fs::enumerate_words(2, 2).size(), 17u);
  for (int n = 1; n <= 3; ++n) {
    for (int L = 0; L <= 5; ++L) {
      const auto words = fs::enumerate_words(n, L);
      const auto brute = oracle::all_reduced(n, L);
      ASSERT_EQ(words.size(), brute.size());
      ASSERT_EQ(words.size(), fs::reduced_word_count(n, L));
      // Each exactly once, already in shortlex order.
      ASSERT_TRUE(std::is_sorted(words.begin(), words.end()));
      ASSERT_EQ(std::adjacent_find(words.begin(), words.end()), words.end());
      std::set<oracle::Tokens> a, b(brute.begin(), brute.end());
      for (const auto& w : words) a.insert(tokens(w));
      ASSERT_EQ(a, b);
    }
  }
  const auto len2 = fs::enumerate_words_of_length(2, 2);
  EXPECT_EQ(len2.size(), 12u);
  EXPECT_EQ(tokens(len2.front()), (oracle::Tokens{1, 1}));
  EXPECT_EQ(tokens(len2[1]), (oracle::Tokens{1, 2}));
}

TEST(Words, PositiveEnumeration) {
  const auto p = fs::enumerate_positive(2, 2);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_EQ(tokens(p[0]), (oracle::Tokens{1, 1}));
  EXPECT_EQ(tokens(p[1]), (oracle::Tokens{1, 2}));
  EXPECT_EQ(tokens(p[2]), (oracle::Tokens{2, 1}));
  EXPECT_EQ(tokens(p[3]), (oracle::Tokens{2, 2}));
  EXPECT_EQ(tokens(fs::enumerate_positive(2, 1)[1]), (oracle::Tokens{2}));
  EXPECT_EQ(fs::enumerate_positive(3, 2).size(), 9u);
  EXPECT_EQ(fs::enumerate_positive(3, 0).size(), 1u);
  for (const auto& w : fs::enumerate_positive(3, 3)) EXPECT_TRUE(w.is_positive());
}

TEST(Words, ReductionIdempotence) {
  for (const auto& w : fs::enumerate_words(2, 6)) {
    ASSERT_EQ(fs::parse_word(fs::format_word(w), 2), w);
  }
}

TEST(Words, ConstructorReducesAndChecksRank) {
  EXPECT_EQ(tokens(W(2, {1, 2, -2, -1, 2})), (oracle::Tokens{2}));
  EXPECT_THROW(W(2, {3}), fs::PreconditionError);
  EXPECT_THROW(fs::multiply(W(2, {1}), W(3, {1})), fs::PreconditionError);
}

TEST(Words, GroupLawsOnShortWords) {
  const auto words = fs::enumerate_words(2, 3);
  const fs::Word e(2);
  for (const auto& a : words) {
    ASSERT_EQ(a * e, a);
    ASSERT_EQ(e * a, a);
    ASSERT_TRUE((a * fs::inverse(a)).empty());
    ASSERT_TRUE((fs::inverse(a) * a).empty());
  }
  // Associativity over all triples from length <= 2 and a strided sample of
  // length-3 triples.
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); j += (i % 3) + 1) {
      for (std::size_t k = 0; k < words.size(); k += 7) {
        const auto &a = words[i], &b = words[j], &c = words[k];
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(tokens(a * b), oracle::concat(tokens(a), tokens(b)));
      }
    }
  }
}

TEST(Words, AssociativityAllTriplesUpToTwo) {
  const auto words = fs::enumerate_words(2, 2);
  for (const auto& a : words) {
    for (const auto& b : words) {
      for (const auto& c : words) ASSERT_EQ((a * b) * c, a * (b * c));
    }
  }
}

TEST(Words, StatisticAdditivityProperty) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + trial % 3;
    const auto a = W(n, oracle::random_reduced(rng, n, 1 + trial % 5));
    const auto b = W(n, oracle::random_reduced(rng, n, 1 + (trial / 5) % 5));
    const auto ab = a * b;
    if (ab.size() != a.size() + b.size()) continue;
    for (int i = 1; i <= n; ++i) {
      ASSERT_EQ(fs::letter_count(ab, i), fs::letter_count(a, i) + fs::letter_count(b, i));
    }
    const bool junction = !a.back().positive() && b.front().positive() &&
                          a.back().index() != b.front().index();
    ASSERT_EQ(fs::gamma_total(ab), fs::gamma_total(a) + fs::gamma_total(b) + (junction ? 1 : 0));
  }
}

TEST(Words, InversionInvariance) {
  for (const auto& w : fs::enumerate_words(3, 5)) {
    const auto v = fs::inverse(w);
    ASSERT_EQ(tokens(v), oracle::invert(tokens(w)));
    for (int i = 1; i <= 3; ++i) {
      ASSERT_EQ(fs::letter_count(v, i), fs::letter_count(w, i));
      for (int j = 1; j < i; ++j) ASSERT_EQ(fs::gamma_pair(v, i, j), fs::gamma_pair(w, i, j));
    }
  }
  for (const auto& w : fs::enumerate_words(2, 6)) {
    ASSERT_EQ(fs::gamma_pair(fs::inverse(w), 1, 2), fs::gamma_pair(w, 1, 2));
  }
}

TEST(Words, LetterSlotsAndOrder) {
  EXPECT_EQ(fs::Letter(1, 1).slot(), 0u);
  EXPECT_EQ(fs::Letter(1, -1).slot(), 1u);
  EXPECT_EQ(fs::Letter(3, -1).slot(), 5u);
  for (std::size_t s = 0; s < 8; ++s) EXPECT_EQ(fs::Letter::from_slot(s).slot(), s);
  EXPECT_LT(fs::Letter(1, -1), fs::Letter(2, 1));
  EXPECT_EQ(fs::Letter::from_token(-2).inverse(), fs::Letter(2, 1));
  EXPECT_THROW(fs::Letter::from_token(0), fs::PreconditionError);
}
