#include <polydict/pipeline/noise.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace polydict;
using oracle::random_poly;

TEST(AddNoise, ZeroDbMatchesSignalPower)
{
    std::mt19937_64 rng(1);
    const auto m = random_poly(rng, 4, 6, 5);
    const auto noisy = add_noise(m, {0.0, 42});
    const double ps = mean_power(m.coefficients());
    const double pn = mean_power(sub(noisy, m).coefficients());
    EXPECT_NEAR(pn, ps, 1e-12 * ps);
}

TEST(AddNoise, CleanSentinelIsIdentity)
{
    std::mt19937_64 rng(2);
    const auto m = random_poly(rng, 3, 3, 3);
    EXPECT_EQ(add_noise(m, NoiseSpec{}), m);
    EXPECT_TRUE(NoiseSpec{}.clean());
}

TEST(AddNoise, AchievedSnrIsExact)
{
    std::mt19937_64 rng(3);
    const auto m = random_poly(rng, 2, 3, 4);
    for (double snr : {-10.0, 0.0, 10.0, 20.0, 30.0}) {
        EXPECT_NEAR(measured_snr_db(m, add_noise(m, {snr, 7})), snr, 1e-9);
    }
}

TEST(AddNoise, SeedFixesRealization)
{
    std::mt19937_64 rng(4);
    const auto m = random_poly(rng, 2, 3, 4);
    EXPECT_EQ(add_noise(m, {5.0, 9}), add_noise(m, {5.0, 9}));
    EXPECT_NE(add_noise(m, {5.0, 9}), add_noise(m, {5.0, 10}));
}

TEST(AddNoise, Errors)
{
    EXPECT_THROW(add_noise(PolyMatrix::zeros(2, 2, 2), {0.0, 1}), ZeroSignalError);
    std::mt19937_64 rng(5);
    EXPECT_THROW(add_noise(random_poly(rng, 1, 1, 2), {std::nan(""), 1}), ConfigError);
}

TEST(DeriveSeed, DistinctStreams)
{
    EXPECT_NE(derive_seed(1, {3, 0}), derive_seed(1, {3, 1}));
    EXPECT_NE(derive_seed(1, {3, 0}), derive_seed(2, {3, 0}));
    EXPECT_EQ(derive_seed(1, {3, 0}), derive_seed(1, {3, 0}));
}
