#include <gtest/gtest.h>

#include <map>
#include <random>

#include "lbraid/freegroup.hpp"

using namespace lbraid;

namespace {

const GenSet ab({"a", "b"});

// Magnus expansion s -> 1 + X_s, s^-1 -> 1 - X_s + X_s^2 - ..., truncated
// at degree n and multiplied as honest noncommutative polynomials.
using Poly = std::map<std::vector<int>, BigInt>;

Poly poly_mul(const Poly& p, const Poly& q, int n)
{
    Poly r;
    for (const auto& [a, ca] : p)
        for (const auto& [b, cb] : q) {
            if (static_cast<int>(a.size() + b.size()) > n)
                continue;
            auto ab_ = a;
            ab_.insert(ab_.end(), b.begin(), b.end());
            r[ab_] += ca * cb;
        }
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    return r;
}

Poly magnus(const Word& w, int n)
{
    Poly acc{{{}, 1}};
    for (const auto& l : w.letters()) {
        Poly f{{{}, 1}};
        if (l.sign > 0)
            f[{l.gen}] = 1;
        else
            for (int k = 1; k <= n; ++k)
                f[std::vector<int>(static_cast<std::size_t>(k), l.gen)] = (k % 2) ? -1 : 1;
        acc = poly_mul(acc, f, n);
    }
    return acc;
}

Word random_word(std::mt19937_64& rng, std::size_t gens, std::size_t max_len)
{
    std::vector<Letter> ls;
    std::size_t len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
        ls.push_back({static_cast<int>(rng() % gens), (rng() % 2) ? 1 : -1});
    return Word(ls);
}

} // namespace

TEST(Word, ParseAndReduce)
{
    Word w = parse_word("a b a^-1", ab);
    EXPECT_EQ(w.size(), 3u);
    EXPECT_TRUE(parse_word("a a^-1", ab).is_identity());
    EXPECT_EQ(parse_word("a^3", ab).size(), 3u);
    EXPECT_EQ(format_word(parse_word("a^2 b^-1", ab), ab), "a^2 b^-1");
    EXPECT_EQ(format_word(Word(), ab), "");
}

TEST(Word, ParseErrors)
{
    try {
        parse_word("a c", ab);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "unknown_generator");
    }
    EXPECT_THROW(parse_word("a^", ab), Error);
    EXPECT_THROW(parse_word("a^0", ab), Error);
}

TEST(Word, GroupLaws)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        Word u = random_word(rng, 2, 6), v = random_word(rng, 2, 6), x = random_word(rng, 2, 6);
        EXPECT_EQ((u * v) * x, u * (v * x));
        EXPECT_TRUE((u * u.inverse()).is_identity());
        EXPECT_EQ((u * v).inverse(), v.inverse() * u.inverse());
    }
    EXPECT_EQ(conjugate(parse_word("a", ab), parse_word("b", ab)), parse_word("a b a^-1", ab));
}

TEST(GroupRing, AugmentationIsMultiplicative)
{
    Ring z = Ring::integers();
    auto x = GroupRingElement::of_word(z, parse_word("a b", ab), 3) - GroupRingElement::one(z);
    auto y = GroupRingElement::difference(z, parse_word("b", ab)) + GroupRingElement::one(z).scaled(5);
    EXPECT_EQ(augmentation(x * y), augmentation(x) * augmentation(y));
}

TEST(FoxExpand, SmallCases)
{
    Ring z = Ring::integers();
    auto e = fox_expand(GroupRingElement::difference(z, parse_word("a", ab)), 3);
    ASSERT_EQ(e.terms.size(), 1u);
    EXPECT_EQ(e.terms.at(Monomial{0}), 1);

    auto inv = fox_expand(parse_word("a^-1", ab), z, 2);
    EXPECT_EQ(inv.terms.size(), 2u);
    EXPECT_EQ(inv.terms.at(Monomial{0}), -1);
    EXPECT_EQ(inv.terms.at(Monomial({0, 0})), 1);

    auto prod = fox_expand(parse_word("a b", ab), z, 2);
    EXPECT_EQ(prod.terms.size(), 3u);
    EXPECT_EQ(prod.terms.at(Monomial({0, 1})), 1);
    EXPECT_EQ(prod.terms.at(Monomial{0}), 1);
    EXPECT_EQ(prod.terms.at(Monomial{1}), 1);
    EXPECT_FALSE(prod.truncated);

    EXPECT_THROW(fox_expand(parse_word("a", ab), z, 0), Error);
}

TEST(FoxExpand, MatchesMagnusExpansion)
{
    // the Magnus map identifies Z[F]/I^{n+1} with noncommutative polynomials
    // of degree <= n, so the expansion must reproduce its coefficients
    std::mt19937_64 rng(5);
    Ring z = Ring::integers();
    for (int trial = 0; trial < 150; ++trial) {
        Word w = random_word(rng, 3, 7);
        int n = 1 + static_cast<int>(rng() % 4);
        auto e = fox_expand(w, z, n);
        Poly m = magnus(w, n);
        m.erase(std::vector<int>{});
        std::map<std::vector<int>, BigInt> got;
        for (const auto& [mono, c] : e.terms)
            got[mono] = boost::multiprecision::numerator(c);
        EXPECT_EQ(Poly(got.begin(), got.end()), m);
    }
}

TEST(FoxExpand, ReconstructsModuloHigherPowers)
{
    // x - eps(x) - expand(fox_expand(x)) has vanishing Magnus terms up to degree n
    std::mt19937_64 rng(9);
    Ring z = Ring::integers();
    for (int trial = 0; trial < 40; ++trial) {
        GroupRingElement x(z);
        for (int k = 0; k < 3; ++k)
            x.add_term(random_word(rng, 2, 4), Scalar(static_cast<int>(rng() % 7) - 3));
        int n = 1 + static_cast<int>(rng() % 3);
        auto diff = x - GroupRingElement::one(z).scaled(augmentation(x)) - expand_combination(fox_expand(x, n));
        Poly total;
        for (const auto& [w, c] : diff.terms())
            for (const auto& [mono, mc] : magnus(w, n))
                total[mono] += mc * boost::multiprecision::numerator(c);
        std::erase_if(total, [](const auto& kv) { return kv.second == 0; });
        EXPECT_TRUE(total.empty());
    }
}

TEST(Presentation, ParseFormat)
{
    auto p = parse_presentation("# torus\ngens: a b\nrel: a b a^-1 b^-1\nrel: a a^-1\n", "t.grp");
    EXPECT_EQ(p.gens.size(), 2u);
    EXPECT_EQ(p.relators.size(), 1u);
    EXPECT_EQ(p.warnings.size(), 1u);
    EXPECT_EQ(format_presentation(p), "gens: a b\nrel: a b a^-1 b^-1\n");
    try {
        parse_presentation("gens: a\nrel: a x\n", "bad.grp");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("bad.grp:2"), std::string::npos);
    }
}

TEST(Words, EnumerationCountsReducedWords)
{
    // 1 + 2k * sum (2k-1)^{j-1}
    auto w = enumerate_words(2, 4);
    EXPECT_EQ(w.size(), 1u + 4 + 12 + 36 + 108);
    EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
}
