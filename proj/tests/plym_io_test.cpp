#include <polydict/plym_io.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>

using namespace polydict;

TEST(Plym, WritesDocumentedLayout)
{
    // 2x2, 2 lags; lag-major coefficients.
    const PolyMatrix m(2, 2, 2, {1.0, 2.0, 3.0, 4.0, 0.5, -0.25, 1e-300, 7.0});
    EXPECT_EQ(to_plym_string(m), "PLYM1 2 2 2\n"
                                 "1 2\n"
                                 "3 4\n"
                                 "\n"
                                 "0.5 -0.25\n"
                                 "1e-300 7\n");
}

TEST(Plym, RoundTripIsBitExact)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int trial = 0; trial < 100; ++trial) {
        const Index p = dim(rng), q = dim(rng), lags = dim(rng);
        std::vector<double> c(static_cast<std::size_t>(p * q * lags));
        for (auto& v : c) {
            v = u(rng) * std::pow(10.0, dim(rng) - 8);
        }
        c.front() = std::numeric_limits<double>::denorm_min();
        c.back() = -std::numeric_limits<double>::max();
        const PolyMatrix m(p, q, lags, std::move(c));
        EXPECT_EQ(parse_plym(to_plym_string(m)), m);
    }
}

TEST(Plym, RejectsMalformedInput)
{
    EXPECT_THROW(parse_plym(""), ParseError);
    EXPECT_THROW(parse_plym("PLYM2 1 1 1\n0\n"), ParseError);
    EXPECT_THROW(parse_plym("PLYM1 1 1\n0\n"), ParseError);
    EXPECT_THROW(parse_plym("PLYM1 0 1 1\n"), ParseError);
    EXPECT_THROW(parse_plym("PLYM1 1 2 1\n0\n"), ParseError);          // short row
    EXPECT_THROW(parse_plym("PLYM1 1 1 2\n0\n1\n"), ParseError);       // missing blank separator
    EXPECT_THROW(parse_plym("PLYM1 1 1 1\nabc\n"), ParseError);
    EXPECT_THROW(parse_plym("PLYM1 1 1 1\nnan\n"), ParseError);        // non-finite
    EXPECT_THROW(parse_plym("PLYM1 1 1 1\n1\n2\n"), ParseError);       // trailing data
    EXPECT_NO_THROW(parse_plym("PLYM1 1 1 2\n+1.5\n\n-2\n\n"));
}
