#include <random>

#include <gtest/gtest.h>

#include "quasifix/map.hpp"
#include "quasifix/sampling.hpp"

namespace {

using quasifix::Map;
using quasifix::Matrix;
using quasifix::Vector;

TEST(ReflectionMapTest, ReflectsAroundOneHalfInAnyDimension) {
    const Map T = Map::reflection();
    EXPECT_EQ(T({2.0, 2.0}), (Vector{-1.0, -1.0}));
    EXPECT_EQ(T({0.5, 0.5}), (Vector{0.5, 0.5}));
    EXPECT_EQ(T({1.0, 0.0, -1.0}), (Vector{0.0, 1.0, 2.0}));
    EXPECT_EQ(T.fixed_dim(), 0);
}

TEST(StepMapTest, ScalarTwoValuedMap) {
    const Map T = Map::step();
    EXPECT_EQ(T({5.0}), (Vector{-1.0 / 3.0}));
    EXPECT_EQ(T({2.0}), (Vector{0.0}));
    EXPECT_EQ(T({-10.0}), (Vector{0.0}));
    EXPECT_EQ(T({2.0000001}), (Vector{-1.0 / 3.0}));
    EXPECT_THROW(T({1.0, 1.0}), quasifix::DimensionMismatch);
}

TEST(PowerMapTest, IteratesInnerMap) {
    const Map T2 = Map::power(Map::step(), 2);
    EXPECT_EQ(T2({5.0}), (Vector{0.0})); // step(5) = -1/3 <= 2, step(-1/3) = 0
    EXPECT_EQ(T2({-10.0}), (Vector{0.0}));

    const Map T1 = Map::power(Map::reflection(), 1);
    std::mt19937_64 gen(1);
    for (int i = 0; i < 100; ++i) {
        const Vector x = quasifix::draw_point(gen, 3, 10.0);
        EXPECT_EQ(T1(x), Map::reflection()(x));
    }
    EXPECT_THROW(Map::power(Map::step(), 0), quasifix::InvalidParameter);
}

TEST(AffineMapTest, MatrixVectorProductPlusOffset) {
    const Map I = Map::affine({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0});
    EXPECT_EQ(I({3.0, -4.0}), (Vector{3.0, -4.0}));

    const Map T = Map::affine({{1.0, 2.0}, {3.0, 4.0}}, {10.0, 20.0});
    EXPECT_EQ(T({1.0, 1.0}), (Vector{13.0, 27.0}));

    EXPECT_THROW(Map::affine({{1.0, 2.0}}, {0.0}), quasifix::InvalidParameter);
    EXPECT_THROW(Map::affine({{1.0}}, {0.0, 0.0}), quasifix::DimensionMismatch);
    EXPECT_THROW(T({1.0}), quasifix::DimensionMismatch);
}

TEST(ExpressionMapTest, AgreesWithEquivalentAffineMap) {
    const Map expr = Map::expression({"1 - x1", "1 - x2"});
    const Map refl = Map::reflection();
    std::mt19937_64 gen(2);
    for (int i = 0; i < 200; ++i) {
        const Vector x = quasifix::draw_point(gen, 2, 10.0);
        const Vector a = expr(x);
        const Vector b = refl(x);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_DOUBLE_EQ(a[k], b[k]);
    }

    const Map affine_expr = Map::expression({"2 * x1 + 3 * x2 - 1", "x1 - x2"});
    const Map affine = Map::affine({{2.0, 3.0}, {1.0, -1.0}}, {-1.0, 0.0});
    for (int i = 0; i < 200; ++i) {
        const Vector x = quasifix::draw_point(gen, 2, 10.0);
        const Vector a = affine_expr(x);
        const Vector b = affine(x);
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_NEAR(a[k], b[k], 1e-12 * std::max(1.0, std::abs(b[k])));
        }
    }
}

TEST(ExpressionMapTest, VariableIndexMustFitCoordinateCount) {
    EXPECT_THROW(Map::expression({"x3", "x1"}), quasifix::InvalidParameter);
    EXPECT_THROW(Map::expression({}), quasifix::InvalidParameter);
    EXPECT_NO_THROW(Map::expression({"x2", "x1"}));
}

TEST(AveragedMapTest, BlendsIdentityAndInnerMap) {
    const Map T = Map::reflection();
    const Map T_half = quasifix::averaged_map(T, 0.5);
    EXPECT_EQ(T_half({2.0, 2.0}), (Vector{0.5, 0.5}));

    const Map T_two_thirds = quasifix::averaged_map(T, 2.0 / 3.0);
    const Vector y = T_two_thirds({2.0, 2.0});
    EXPECT_NEAR(y[0], 0.0, 1e-15);
    EXPECT_NEAR(y[1], 0.0, 1e-15);

    const Map T_one = quasifix::averaged_map(T, 1.0);
    std::mt19937_64 gen(3);
    for (int i = 0; i < 100; ++i) {
        const Vector x = quasifix::draw_point(gen, 2, 10.0);
        EXPECT_EQ(T_one(x), T(x));
    }

    EXPECT_THROW(quasifix::averaged_map(T, 0.0), quasifix::InvalidParameter);
    EXPECT_THROW(quasifix::averaged_map(T, 1.5), quasifix::InvalidParameter);
}

TEST(AveragedMapTest, SharesFixedPointsWithInnerMap) {
    const Map T = Map::reflection();
    const Vector p = {0.5, 0.5};
    std::mt19937_64 gen(4);
    for (int i = 0; i < 50; ++i) {
        const double lambda = quasifix::detail::u64_to_unit(gen()) * 0.99 + 0.01;
        const Vector q = quasifix::averaged_map(T, lambda)(p);
        EXPECT_NEAR(q[0], 0.5, 1e-15);
        EXPECT_NEAR(q[1], 0.5, 1e-15);
    }
}

TEST(DomainBoxTest, ValidationAndAccess) {
    const Map T = Map::reflection().with_domain({0.5, 0.5}, {2.0, 2.0});
    ASSERT_TRUE(T.domain().has_value());
    EXPECT_EQ(T.domain()->lo, (Vector{0.5, 0.5}));
    EXPECT_EQ(T.domain()->hi, (Vector{2.0, 2.0}));

    EXPECT_THROW(Map::reflection().with_domain({1.0}, {0.0}), quasifix::InvalidParameter);
    EXPECT_THROW(Map::reflection().with_domain({1.0, 1.0}, {2.0}), quasifix::DimensionMismatch);
    EXPECT_THROW(Map::step().with_domain({0.0, 0.0}, {1.0, 1.0}), quasifix::DimensionMismatch);
}

TEST(MapTest, EmptyInputRejected) {
    EXPECT_THROW(Map::reflection()({}), quasifix::DimensionMismatch);
}

} // namespace
