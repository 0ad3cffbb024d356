#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>

#include "lbraid/braiding.hpp"

using namespace lbraid;

namespace {

const GenSet ab({"a", "b"});
const Ring Z = Ring::integers();

// Direct summation over index tuples i_1 <_w ... <_w i_p of a word given as
// a raw (possibly unreduced) letter list.
Scalar brute_force(const BraidingTensor& t, const std::vector<Letter>& w)
{
    Scalar total = 0;
    for (const auto& [seq, c] : t.terms()) {
        const std::size_t p = seq.size();
        if (p == 0) {
            total += c;
            continue;
        }
        std::vector<std::size_t> idx(p, 0);
        // odometer over nondecreasing tuples
        std::function<void(std::size_t, std::size_t, Scalar)> rec = [&](std::size_t j, std::size_t from, Scalar acc) {
            if (j == p) {
                total += c * acc;
                return;
            }
            for (std::size_t i = from; i < w.size(); ++i) {
                if (j > 0 && i == idx[j - 1] && w[i].sign > 0)
                    continue;
                if (w[i].gen != seq[j])
                    continue;
                idx[j] = i;
                rec(j + 1, i, acc * w[i].sign);
            }
        };
        rec(0, 0, Scalar(1));
    }
    return Z.normalize(total);
}

BraidingTensor random_tensor(std::mt19937_64& rng, const GenSet& gens, int max_weight, int terms)
{
    BraidingTensor t(Z, gens);
    for (int k = 0; k < terms; ++k) {
        Sequence s(rng() % static_cast<std::size_t>(max_weight + 1));
        for (auto& x : s)
            x = static_cast<int>(rng() % gens.size());
        t.add_term(s, Scalar(static_cast<int>(rng() % 7) - 3));
    }
    return t;
}

std::vector<Letter> random_letters(std::mt19937_64& rng, std::size_t gens, std::size_t len)
{
    std::vector<Letter> ls(len);
    for (auto& l : ls)
        l = {static_cast<int>(rng() % gens), (rng() % 2) ? 1 : -1};
    return ls;
}

BraidingTensor lk() { return BraidingTensor::indicator(Z, ab, {0, 1}); }

} // namespace

TEST(Eval, LinkingExamples)
{
    EXPECT_EQ(eval_word(lk(), parse_word("a b", ab)), 1);
    EXPECT_EQ(eval_word(lk(), parse_word("a b a^-1 b^-1", ab)), 1);
    auto sym = lk() + BraidingTensor::indicator(Z, ab, {1, 0});
    EXPECT_EQ(eval_word(sym, parse_word("a b a^-1 b^-1", ab)), 0);
    // the inverse commutator flips the sign
    EXPECT_EQ(eval_word(lk(), parse_word("b a b^-1 a^-1", ab)), -1);
}

TEST(Eval, PowersOfOneGenerator)
{
    GenSet s({"s"});
    auto t = BraidingTensor::indicator(Z, s, {0, 0});
    for (int k = 0; k <= 8; ++k)
        EXPECT_EQ(eval_word(t, Word(std::vector<Letter>(static_cast<std::size_t>(k), {0, 1}))), k * (k - 1) / 2);
    EXPECT_EQ(eval_word(t, parse_word("s^-1", s)), 1);
}

TEST(Eval, MatchesBruteForceOnUnreducedWords)
{
    std::mt19937_64 rng(17);
    GenSet abc({"a", "b", "c"});
    for (int trial = 0; trial < 300; ++trial) {
        auto t = random_tensor(rng, abc, 4, 5);
        auto letters = random_letters(rng, 3, rng() % 9);
        // the formula is independent of free reduction
        EXPECT_EQ(eval_word(t, Word(letters)), brute_force(t, letters));
    }
}

TEST(Eval, GeneratorMismatch)
{
    GenSet abc({"a", "b", "c"});
    try {
        eval_word(lk(), parse_word("c", abc), abc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "gen_mismatch");
    }
    EXPECT_THROW(eval_word(lk(), Word::generator(2)), Error);
}

TEST(Eval, GroupRingAndMonomials)
{
    auto x = GroupRingElement::difference(Z, parse_word("a", ab)) * GroupRingElement::difference(Z, parse_word("b", ab));
    EXPECT_EQ(eval_group_ring(BraidingTensor::indicator(Z, ab, {0}), x), 0);
    EXPECT_EQ(eval_group_ring(lk(), x), 1);
    EXPECT_EQ(eval_monomial(lk(), {0, 1}), 1);
    EXPECT_EQ(eval_monomial(lk(), {0}), 0);
    EXPECT_EQ(eval_monomial(lk(), {1, 0}), 0);
}

TEST(Eval, MonomialValueIsCoefficient)
{
    // eval on the multiplied-out monomial agrees with the shortcut
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        auto t = random_tensor(rng, ab, 3, 6);
        Monomial m(rng() % 4);
        for (auto& g : m)
            g = static_cast<int>(rng() % 2);
        Scalar direct = eval_group_ring(t, expand_monomial(Z, m));
        Scalar expected = m.empty() ? t.constant_term() : eval_monomial(t, m);
        EXPECT_EQ(direct, expected);
    }
}

TEST(Eval, AnnihilatesHigherPowersOfAugmentationIdeal)
{
    // weight <= n tensors kill (g_1 - 1)...(g_{n+1} - 1) for arbitrary words g_i
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto t = random_tensor(rng, ab, n, 6);
        GroupRingElement x = GroupRingElement::one(Z);
        for (int i = 0; i <= n; ++i)
            x = x * GroupRingElement::difference(Z, Word(random_letters(rng, 2, 1 + rng() % 3)));
        EXPECT_EQ(eval_group_ring(t, x), 0);
    }
}

TEST(Eval, MultiplicativeOnPureTensorsOfWeightOne)
{
    // weight-one tensors are homomorphisms F_S -> R
    std::mt19937_64 rng(31);
    auto h = BraidingTensor::pure(Z, ab, {Functional{{Scalar(2), Scalar(-3)}}});
    for (int trial = 0; trial < 50; ++trial) {
        Word u(random_letters(rng, 2, 5)), v(random_letters(rng, 2, 5));
        EXPECT_EQ(eval_word(h, u * v), eval_word(h, u) + eval_word(h, v));
    }
}

TEST(Cycle, RotatesRight)
{
    EXPECT_EQ(cycle(lk()), BraidingTensor::indicator(Z, ab, {1, 0}));
    auto t = BraidingTensor::indicator(Z, GenSet({"a", "b", "c"}), {0, 1, 2});
    EXPECT_EQ(cycle(t).terms().begin()->first, (Sequence{2, 0, 1}));
}

TEST(Cycle, RotationIdentityOnMonomials)
{
    // T((s_1-1)...(s_k-1)) = (cycle T)((s_k-1)(s_1-1)...(s_{k-1}-1))
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        auto t = random_tensor(rng, ab, 3, 8);
        SequenceIndex idx(2, 3);
        for (std::size_t i = idx.offset(1); i < idx.size(); ++i) {
            const Sequence& m = idx.at(i);
            Sequence rot = rotate_right(m);
            EXPECT_EQ(eval_group_ring(t, expand_monomial(Z, m)), eval_group_ring(cycle(t), expand_monomial(Z, rot)));
        }
    }
}

TEST(Cycle, InvariantBasisMatchesNecklaceCount)
{
    // Burnside: number of rotation orbits of length-p words over k letters
    auto necklaces = [](int k, int p) {
        long total = 0;
        for (int r = 0; r < p; ++r) {
            int g = std::gcd(r, p);
            long pw = 1;
            for (int i = 0; i < g; ++i)
                pw *= k;
            total += pw;
        }
        return static_cast<std::size_t>(total / p);
    };
    for (int k = 1; k <= 3; ++k)
        for (int p = 1; p <= 5; ++p) {
            std::vector<std::string> names;
            for (int i = 0; i < k; ++i)
                names.push_back("g" + std::to_string(i));
            GenSet gens(names);
            auto basis = cycle_invariant_basis(gens, p, Z);
            EXPECT_EQ(basis.size(), necklaces(k, p));
            for (const auto& t : basis)
                EXPECT_EQ(cycle(t), t);
        }
    EXPECT_EQ(cycle_invariant_basis(ab, 1, Z).size(), 2u);
    EXPECT_EQ(cycle_invariant_basis(ab, 4, Z).size(), 6u);
}

TEST(SequenceIndexing, ShortlexRoundTrip)
{
    SequenceIndex idx(3, 3);
    EXPECT_EQ(idx.size(), 1u + 3 + 9 + 27);
    for (std::size_t i = 0; i < idx.size(); ++i)
        EXPECT_EQ(idx.index_of(idx.at(i)), i);
    EXPECT_TRUE(std::is_sorted(idx.sequences().begin(), idx.sequences().end(), ShortLex{}));
}

TEST(Tensor, ArithmeticAndCoordinates)
{
    auto t = lk().scaled(3) - BraidingTensor::constant(Z, ab, 2);
    SequenceIndex idx(2, 2);
    auto v = t.coordinates(idx);
    EXPECT_EQ(BraidingTensor::from_coordinates(Z, ab, idx, v), t);
    EXPECT_EQ(t.max_weight(), 2);
    EXPECT_EQ((t - t).is_zero(), true);
    EXPECT_THROW(t + BraidingTensor(Ring::integers_mod(2), ab), Error);
    BraidingTensor z2(Ring::integers_mod(2), ab);
    z2.add_term({0}, 3);
    EXPECT_EQ(z2.coefficient({0}), 1);
}
