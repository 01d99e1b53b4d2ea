#include <random>
#include <set>

#include <gtest/gtest.h>

#include "framelab/word.hpp"

using framelab::Letter;
using framelab::Word;

namespace {

// Reduction by a stack of letters, independent of the syllable representation.
std::vector<Letter> stack_reduce(const std::vector<Letter>& in) {
    std::vector<Letter> out;
    for (const Letter& l : in) {
        if (!out.empty() && out.back().gen == l.gen && out.back().sign == -l.sign)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

std::vector<Letter> random_letters(std::mt19937_64& rng, int rank, int n) {
    std::vector<Letter> v;
    for (int i = 0; i < n; ++i)
        v.push_back({static_cast<int>(rng() % rank) + 1, rng() % 2 ? 1 : -1});
    return v;
}

}  // namespace

TEST(Word, ParsePrintRoundTrip) {
    for (const char* s : {"e", "x", "XyyZ", "xyXY", "yyyxxY"}) EXPECT_EQ(Word::parse(s).str(), s);
    EXPECT_EQ(Word::parse("xXyY").str(), "e");
    EXPECT_EQ(Word::parse("xyYX").length(), 0u);
}

TEST(Word, RejectsBadInput) {
    EXPECT_THROW(Word::parse("x1"), std::invalid_argument);
    EXPECT_THROW(Word::parse("z", 2), std::out_of_range);
    EXPECT_THROW(Word::reduce({{1, 2}}), std::invalid_argument);
}

TEST(Word, ReductionMatchesStackOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int rank = 2 + static_cast<int>(rng() % 3);
        const auto letters = random_letters(rng, rank, static_cast<int>(rng() % 20));
        EXPECT_EQ(Word::reduce(letters, rank).letters(), stack_reduce(letters));
    }
}

TEST(Word, GroupAxioms) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const Word a = Word::reduce(random_letters(rng, 3, 8));
        const Word b = Word::reduce(random_letters(rng, 3, 8));
        const Word c = Word::reduce(random_letters(rng, 3, 8));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_TRUE((a * a.inverse()).is_identity());
        EXPECT_EQ(a * Word::identity(), a);
        EXPECT_EQ((a * b).inverse(), b.inverse() * a.inverse());
        EXPECT_EQ(a.pow(3), a * a * a);
        EXPECT_EQ(a.pow(-2), a.inverse() * a.inverse());
    }
}

TEST(Word, BallSizesAndOrder) {
    // |S(n)| = 2r (2r - 1)^(n - 1)
    for (int rank : {2, 3}) {
        std::size_t expected = 1, shell = 2 * rank;
        for (int r = 0; r <= 4; ++r) {
            if (r > 0) {
                expected += shell;
                shell *= 2 * rank - 1;
            }
            const auto b = framelab::ball(rank, r);
            EXPECT_EQ(b.size(), expected);
            EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
            EXPECT_EQ(std::set<Word>(b.begin(), b.end()).size(), b.size());
            for (const Word& w : b) EXPECT_LE(w.length(), static_cast<std::size_t>(r));
        }
    }
}

TEST(Word, ShortlexPutsShorterFirst) {
    EXPECT_LT(Word::parse("y"), Word::parse("xx"));
    EXPECT_LT(Word::identity(), Word::parse("X"));
    EXPECT_EQ(Word::parse("xy") <=> Word::parse("xy"), std::strong_ordering::equal);
}

TEST(Word, HashAgreesWithEquality) {
    const framelab::WordHash h;
    EXPECT_EQ(h(Word::parse("xyX")), h(Word::parse("xyyYX")));
}
