#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "epd/data.hpp"
#include "epd/errors.hpp"

using namespace epd;
using namespace epd::solver;

TEST(DataFunction, DefaultIsZero) {
    DataFunction f;
    EXPECT_TRUE(f.is_zero());
    EXPECT_EQ(f(1.3), 0.0);
    EXPECT_TRUE(DataFunction::zero().is_zero());
    EXPECT_TRUE(DataFunction::polynomial({0.0, 0.0}).is_zero());
}

TEST(DataFunction, Polynomial) {
    const DataFunction p = DataFunction::polynomial({1.0, -2.0, 0.5});
    EXPECT_DOUBLE_EQ(p(2.0), 1.0 - 4.0 + 2.0);
    EXPECT_FALSE(p.support());
    std::vector<double> big(18, 1.0);
    EXPECT_THROW(DataFunction::polynomial(big), DomainError);
}

TEST(DataFunction, GaussianAndEffectiveSupport) {
    const DataFunction g = DataFunction::gaussian(2.0, 1.0, 0.5);
    EXPECT_DOUBLE_EQ(g(1.0), 2.0);
    EXPECT_NEAR(g(1.5), 2.0 * std::exp(-1.0), 1e-15);
    EXPECT_FALSE(g.support());
    const auto s = g.effective_support();
    ASSERT_TRUE(s);
    EXPECT_LE(std::abs(g(s->second)), 2.0 * 1.05e-18);
    EXPECT_NEAR(s->first + s->second, 2.0, 1e-12);
    EXPECT_THROW(DataFunction::gaussian(1.0, 0.0, 0.0), DomainError);
}

TEST(DataFunction, BumpIsCompact) {
    const DataFunction b = DataFunction::bump(1.0, 0.25);
    EXPECT_DOUBLE_EQ(b(1.0), 1.0);
    EXPECT_EQ(b(1.25), 0.0);
    EXPECT_EQ(b(0.7), 0.0);
    EXPECT_GT(b(1.2), 0.0);
    const auto s = b.support();
    ASSERT_TRUE(s);
    EXPECT_DOUBLE_EQ(s->first, 0.75);
    EXPECT_DOUBLE_EQ(s->second, 1.25);
}

TEST(DataFunction, TabulatedSplineInterpolates) {
    std::vector<double> k, v;
    for (int i = 0; i <= 20; ++i) {
        k.push_back(0.1 * i);
        v.push_back(std::sin(0.1 * i));
    }
    const DataFunction t = DataFunction::tabulated(k, v);
    EXPECT_DOUBLE_EQ(t(0.5), std::sin(0.5));
    EXPECT_NEAR(t(0.55), std::sin(0.55), 1e-4);
    EXPECT_EQ(t(2.5), 0.0);
    EXPECT_EQ(t(-0.1), 0.0);
    EXPECT_THROW(DataFunction::tabulated({0.0, 0.0, 1.0}, {1.0, 2.0, 3.0}), DomainError);
    EXPECT_THROW(DataFunction::tabulated({0.0, 1.0}, {1.0}), DomainError);
}

TEST(DataFunction, RadialProfileUsesDistance) {
    const DataFunction r = DataFunction::radial_profile(DataFunction::polynomial({0.0, 0.0, 1.0}), {1.0, 2.0, 0.0});
    const std::vector<double> y{2.0, 2.0, 1.0};
    EXPECT_NEAR(r(std::span<const double>(y)), 2.0, 1e-15);
}

TEST(DataFunction, CombinationIsLinear) {
    const DataFunction a = DataFunction::polynomial({1.0, 1.0});
    const DataFunction b = DataFunction::gaussian(1.0, 0.0, 1.0);
    const DataFunction c = a + b * 3.0;
    for (double y : {-1.0, 0.0, 0.7}) EXPECT_NEAR(c(y), a(y) + 3.0 * b(y), 1e-15);
    EXPECT_FALSE(c.is_zero());
}

TEST(DataFunction, CombinationSupportIsHull) {
    const DataFunction c = DataFunction::bump(1.0, 0.5) + DataFunction::bump(3.0, 0.5);
    const auto s = c.support();
    ASSERT_TRUE(s);
    EXPECT_DOUBLE_EQ(s->first, 0.5);
    EXPECT_DOUBLE_EQ(s->second, 3.5);
}

TEST(DataFunction, DescribeRoundsTripsLiterals) {
    EXPECT_EQ(DataFunction::zero().describe(), "zero");
    EXPECT_EQ(DataFunction::bump(1, 0.5).describe(), "bump:1,0.5");
    EXPECT_EQ(DataFunction::gaussian(1, 0, 1).describe(), "gauss:1,0,1");
}

TEST(SeriesCoefficients, TruncationAndValidation) {
    SeriesCoefficients c{{1.0, 2.0}, {0.0, 1.0, 3.0}};
    EXPECT_EQ(c.truncation(), 2);
    EXPECT_NO_THROW(c.validate());
    c.a.push_back(std::nan(""));
    EXPECT_THROW(c.validate(), DomainError);
}
