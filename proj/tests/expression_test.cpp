#include <gtest/gtest.h>

#include "quasifix/expression.hpp"

namespace {

using quasifix::Expression;
using quasifix::Vector;

double eval(const std::string& text, const Vector& x = {}) {
    return Expression::parse(text).eval(x);
}

TEST(ExpressionTest, LiteralsAndVariables) {
    EXPECT_DOUBLE_EQ(eval("42"), 42.0);
    EXPECT_DOUBLE_EQ(eval("2.5e2"), 250.0);
    EXPECT_DOUBLE_EQ(eval(".5"), 0.5);
    EXPECT_DOUBLE_EQ(eval("1e-3"), 0.001);
    EXPECT_DOUBLE_EQ(eval("x1", {7.0}), 7.0);
    EXPECT_DOUBLE_EQ(eval("x2", {1.0, -3.0}), -3.0);
    EXPECT_DOUBLE_EQ(eval("x12", Vector(12, 5.0)), 5.0);
}

TEST(ExpressionTest, ArithmeticPrecedenceAndAssociativity) {
    EXPECT_DOUBLE_EQ(eval("2 + 3 * 4"), 14.0);
    EXPECT_DOUBLE_EQ(eval("(2 + 3) * 4"), 20.0);
    EXPECT_DOUBLE_EQ(eval("2 - 3 - 4"), -5.0);
    EXPECT_DOUBLE_EQ(eval("12 / 3 / 2"), 2.0);
    EXPECT_DOUBLE_EQ(eval("-x1 * 2", {3.0}), -6.0);
    EXPECT_DOUBLE_EQ(eval("--1"), 1.0);
    EXPECT_DOUBLE_EQ(eval("2 * -3"), -6.0);
    EXPECT_DOUBLE_EQ(eval("1 - x1", {2.0}), -1.0);
}

TEST(ExpressionTest, Functions) {
    EXPECT_DOUBLE_EQ(eval("abs(-3)"), 3.0);
    EXPECT_DOUBLE_EQ(eval("abs(x1 - 4)", {1.0}), 3.0);
    EXPECT_DOUBLE_EQ(eval("min(2, 3)"), 2.0);
    EXPECT_DOUBLE_EQ(eval("max(2, 3)"), 3.0);
    EXPECT_DOUBLE_EQ(eval("min(x1, max(x2, 0))", {-1.0, 5.0}), -1.0);
}

TEST(ExpressionTest, ConditionalComparisons) {
    EXPECT_DOUBLE_EQ(eval("if(x1 <= 2, 0, -1/3)", {1.0}), 0.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 <= 2, 0, -1/3)", {2.0}), 0.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 <= 2, 0, -1/3)", {5.0}), -1.0 / 3.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 < 2, 1, 0)", {2.0}), 0.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 >= 2, 1, 0)", {2.0}), 1.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 > 2, 1, 0)", {2.0}), 0.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 ≤ 2, 1, 0)", {2.0}), 1.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 ≥ 2, 1, 0)", {1.0}), 0.0);
}

TEST(ExpressionTest, OnlyTakenBranchEvaluates) {
    EXPECT_DOUBLE_EQ(eval("if(x1 <= 0, 0, 1 / x1)", {0.0}), 0.0);
    EXPECT_DOUBLE_EQ(eval("if(x1 <= 0, 0, 1 / x1)", {4.0}), 0.25);
}

TEST(ExpressionTest, ParseErrors) {
    EXPECT_THROW(Expression::parse(""), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("1 +"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("(1"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("1 2"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("x0"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("x"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("foo(2)"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("min(1)"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("if(1, 2, 3)"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("1 @ 2"), quasifix::ExpressionParseError);
    EXPECT_THROW(Expression::parse("1 < 2"), quasifix::ExpressionParseError);
}

TEST(ExpressionTest, EvalErrors) {
    EXPECT_THROW(eval("1 / x1", {0.0}), quasifix::ExpressionEvalError);
    EXPECT_THROW(eval("x3", {1.0, 2.0}), quasifix::ExpressionEvalError);
}

TEST(ExpressionTest, MaxVariableTracksLargestIndex) {
    EXPECT_EQ(Expression::parse("3 + 4").max_variable(), 0);
    EXPECT_EQ(Expression::parse("x1 + 1").max_variable(), 1);
    EXPECT_EQ(Expression::parse("x2 + x5").max_variable(), 5);
    EXPECT_EQ(Expression::parse("if(x3 < 1, x1, x2)").max_variable(), 3);
}

TEST(ExpressionTest, TextIsPreserved) {
    const auto e = Expression::parse(" 1 - x1 ");
    EXPECT_EQ(e.text(), " 1 - x1 ");
}

} // namespace
