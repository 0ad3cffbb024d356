#include <gtest/gtest.h>

#include "lbraid/dga.hpp"

using namespace lbraid;

namespace {

std::size_t rank_of(const IntMatrix& m) { return m.rows() && m.cols() ? rank(m) : 0; }

} // namespace

TEST(Degeneracies, NormalForm)
{
    // s_0 s_0 = s_1 s_0
    EXPECT_EQ(canonical_degeneracies({0, 0}), (std::vector<int>{1, 0}));
    EXPECT_EQ(canonical_degeneracies({0, 1}), (std::vector<int>{2, 0}));
    EXPECT_EQ(canonical_degeneracies({2, 0}), (std::vector<int>{2, 0}));
}

TEST(Simplicial, FacesOfDegenerateSimplices)
{
    auto X = models::circle();
    int e = *X.find("e1");
    Simplex s0e{e, {0}}; // 2-simplex
    EXPECT_EQ(X.face(s0e, 0), nondeg(e));
    EXPECT_EQ(X.face(s0e, 1), nondeg(e));
    Simplex f2 = X.face(s0e, 2); // = s_0 d_1 e
    EXPECT_EQ(f2.cell, X.base_vertex());
    EXPECT_EQ(f2.degeneracies, std::vector<int>{0});
}

TEST(Simplicial, IdentitiesAreChecked)
{
    SimplicialSetModel X;
    int v = X.add_cell("v", 0);
    int w = X.add_cell("w", 0);
    int a = X.add_cell("a", 1, {nondeg(v), nondeg(v)});
    int b = X.add_cell("b", 1, {nondeg(w), nondeg(v)});
    // d_0 d_1 t must equal d_0 d_0 t: faces a, a, b violate this
    X.add_cell("t", 2, {nondeg(a), nondeg(a), nondeg(b)});
    try {
        X.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "bad_simplicial_set");
    }
}

TEST(Cochains, Point)
{
    auto A = cochain_algebra(models::point());
    EXPECT_EQ(A.dim(0), 1u);
    EXPECT_EQ(A.dim(1), 0u);
    EXPECT_TRUE(A.is_connected());
    EXPECT_TRUE(verify_dga(A).ok());
}

TEST(Cochains, Circle)
{
    auto A = cochain_algebra(models::circle());
    EXPECT_EQ(A.dim(1), 1u);
    EXPECT_TRUE(A.differential(0).is_zero());
    EXPECT_TRUE(A.product({1, 0}, {1, 0}).empty());
    EXPECT_TRUE(verify_dga(A).ok()) << verify_dga(A).summary();
}

TEST(Cochains, TorusByHand)
{
    auto X = models::torus();
    auto A = cochain_algebra(X);
    ASSERT_EQ(A.dim(1), 3u);
    ASSERT_EQ(A.dim(2), 2u);
    // d(delta_e)(x) = sum (-1)^i delta_e(d_i x); U = (d0 b, d1 c, d2 a)
    IntMatrix expected(Ring::integers(), 2, 3, {1, 1, -1, 1, 1, -1});
    EXPECT_EQ(A.differential(1), expected);
    // H^1 = ker d1 / im d0
    EXPECT_EQ(3 - rank_of(A.differential(1)) - rank_of(A.differential(0)), 2u);
    // a u b = U (front a, back b); b u a = L
    EXPECT_EQ(A.product({1, 0}, {1, 1}), (Combination{{0, 1}}));
    EXPECT_EQ(A.product({1, 1}, {1, 0}), (Combination{{1, 1}}));
    EXPECT_TRUE(A.product({1, 0}, {1, 0}).empty());
    EXPECT_TRUE(A.product({1, 2}, {1, 2}).empty());
    EXPECT_TRUE(verify_dga(A).ok()) << verify_dga(A).summary();
}

TEST(Cochains, ProjectivePlane)
{
    auto A = cochain_algebra(models::projective_plane());
    EXPECT_EQ(A.differential(1), IntMatrix(Ring::integers(), 1, 1, {2}));
    EXPECT_EQ(A.product({1, 0}, {1, 0}), (Combination{{0, 1}}));
    EXPECT_TRUE(verify_dga(A).ok());
    auto A2 = cochain_algebra(models::projective_plane(), Ring::integers_mod(2));
    EXPECT_TRUE(A2.differential(1).is_zero());
    EXPECT_TRUE(verify_dga(A2).ok());
}

TEST(Cochains, MultiVertexIsNotConnected)
{
    SimplicialSetModel X;
    int v = X.add_cell("v", 0);
    int w = X.add_cell("w", 0);
    X.add_cell("e", 1, {nondeg(w), nondeg(v)});
    auto A = cochain_algebra(X);
    EXPECT_FALSE(A.is_connected());
    EXPECT_TRUE(verify_dga(A).ok()) << verify_dga(A).summary();
    EXPECT_EQ(A.differential(0), IntMatrix(Ring::integers(), 1, 2, {-1, 1}));
}

TEST(Cochains, TruncationFlag)
{
    SimplicialSetModel X = models::torus();
    EXPECT_FALSE(cochain_algebra(X).truncated());
    EXPECT_THROW(cochain_algebra(X, 1), Error);
}

TEST(Cochains, CollapsibleTriangleKeepsCohomology)
{
    auto A = cochain_algebra(models::wedge_with_collapsible_triangle(2));
    EXPECT_TRUE(verify_dga(A).ok()) << verify_dga(A).summary();
    EXPECT_EQ(A.dim(1) - rank_of(A.differential(1)), 2u);
    // the triangle's front edge is degenerate, so all degree-1 cups vanish
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            EXPECT_TRUE(A.product({1, i}, {1, j}).empty());
}

TEST(Wedge, SquareZero)
{
    GenSet S({"x", "y"});
    auto A = wedge_algebra(S, Ring::integers());
    EXPECT_EQ(A.dim(0), 1u);
    EXPECT_EQ(A.dim(1), 2u);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            EXPECT_TRUE(A.product({1, i}, {1, j}).empty());
    EXPECT_TRUE(verify_dga(A).ok());
    EXPECT_TRUE(A.is_connected());
}

TEST(Verify, CorruptedUnitIsReported)
{
    auto A = wedge_algebra(GenSet({"x"}), Ring::integers());
    A.set_product({0, 0}, {1, 0}, {});
    auto rep = verify_dga(A);
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.summary().find("unit"), std::string::npos);
}

TEST(Verify, NonzeroDSquaredIsReported)
{
    Ring z = Ring::integers();
    FiniteDGA A(z, {{"1"}, {"x"}, {"y"}});
    A.set_product({0, 0}, {0, 0}, {{0, Scalar(1)}});
    A.set_product({0, 0}, {1, 0}, {{0, Scalar(1)}});
    A.set_product({1, 0}, {0, 0}, {{0, Scalar(1)}});
    A.set_product({0, 0}, {2, 0}, {{0, Scalar(1)}});
    A.set_product({2, 0}, {0, 0}, {{0, Scalar(1)}});
    A.set_unit({Scalar(1)});
    A.set_augmentation({Scalar(1)});
    EXPECT_TRUE(verify_dga(A).ok()) << verify_dga(A).summary();
    A.set_differential(0, IntMatrix(z, 1, 1, {1}));
    A.set_differential(1, IntMatrix(z, 1, 1, {1}));
    auto rep = verify_dga(A);
    EXPECT_NE(rep.summary().find("d^2"), std::string::npos);
    EXPECT_NE(rep.summary().find("Leibniz"), std::string::npos);
}

TEST(Presentation, ReadOffTwoSkeleton)
{
    auto P = presentation_of(models::torus());
    ASSERT_EQ(P.relators.size(), 2u);
    EXPECT_EQ(format_word(P.relators[0], P.gens), "a b c^-1");
    EXPECT_EQ(format_word(P.relators[1], P.gens), "b a c^-1");
    auto Q = presentation_of(models::projective_plane());
    EXPECT_EQ(format_word(Q.relators.at(0), Q.gens), "a^2");
}
