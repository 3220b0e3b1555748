#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ebsum/modal.hpp"
#include "ebsum/suites.hpp"
#include "oracles.hpp"

using namespace ebsum;

namespace {

Pmf from_mass(std::vector<double> mass) {
    Pmf f;
    f.mass = std::move(mass);
    return f;
}

long leading_mode_by_scan(const Pmf& f) {
    const auto all = oracle::argmax_all(f.mass);
    return f.first() + all.back();
}

} // namespace

TEST(Mode, BinomialEightThirdIsTwin) {
    const ModeSummary s = mode_of(pmf_dp(binomial_profile(8, 1.0 / 3.0)));
    EXPECT_TRUE(s.twin);
    EXPECT_EQ(s.m_minus, 2);
    EXPECT_EQ(s.m_plus, 3);
    EXPECT_EQ(s.skewness, 1.0);
}

TEST(Mode, AgreesWithArgmaxScan) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const Pmf f = pmf_dp(random_profile(rng, {12, 4.0, 1.0, true}));
        const ModeSummary s = mode_of(f);
        const auto all = oracle::argmax_all(f.mass);
        EXPECT_EQ(s.m_minus, f.first() + all.front());
        EXPECT_EQ(s.m_plus, f.first() + all.back());
    }
}

TEST(Mode, RejectsBadInput) {
    EXPECT_THROW((void)mode_of(Pmf{}), Error);
    EXPECT_THROW((void)mode_of(from_mass({0.0, 0.0})), Error);
    EXPECT_THROW((void)mode_of(from_mass({0.5, 0.5}), 1e-3), Error);
}

TEST(Mode, PointMassIsDegenerate) {
    const ModeSummary s = mode_of(pmf_dp(Profile{0.0, {1.0, 1.0}, 0.0}));
    EXPECT_TRUE(s.degenerate);
    EXPECT_FALSE(s.twin);
    EXPECT_EQ(s.m_plus, 2);
    EXPECT_EQ(s.skewness, 1.0);
    EXPECT_THROW((void)crossing_height(pmf_dp(Profile{})), Error);
}

TEST(PeakSkewness, PoissonClosedForm) {
    EXPECT_NEAR(peak_skewness(pmf_dp(poisson_profile(1.6))), 0.64 / 1.84, 1e-12);
}

TEST(PeakSkewness, IsTheMinimalShiftingProbability) {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const Pmf f = pmf_dp(random_profile(rng, {10, 3.0, 1.0, false}));
        const ModeSummary s = mode_of(f);
        if (s.twin || s.degenerate) continue;
        const double g = s.skewness;
        ASSERT_GT(g, 0.0);
        ASSERT_LE(g, 1.0);
        if (g + 1e-6 <= 1.0) {
            EXPECT_EQ(leading_mode_by_scan(add_bernoulli(f, g + 1e-6)), s.m_plus + 1);
        }
        EXPECT_EQ(leading_mode_by_scan(add_bernoulli(f, g - 1e-6)), s.m_plus);
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(CrossingHeight, BinomialTwoHalf) {
    EXPECT_NEAR(crossing_height(from_mass({0.25, 0.5, 0.25})), 0.375, 1e-15);
    EXPECT_THROW((void)crossing_height(pmf_dp(binomial_profile(8, 1.0 / 3.0))), Error);
}

TEST(PeakAfterBernoulli, MatchesConvolution) {
    const Pmf b2 = from_mass({0.25, 0.5, 0.25});
    EXPECT_NEAR(peak_after_bernoulli(b2, 0.5), 0.375, 1e-15);
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 50; ++rep) {
        const Pmf f = pmf_dp(random_profile(rng, {10, 3.0, 1.0, false}));
        for (double p = 0.0; p <= 1.0; p += 0.05) {
            const Pmf g = add_bernoulli(f, p);
            const double direct = *std::max_element(g.mass.begin(), g.mass.end());
            EXPECT_NEAR(peak_after_bernoulli(f, p), direct, 1e-14);
        }
    }
    EXPECT_THROW((void)peak_after_bernoulli(b2, 1.5), Error);
}

TEST(Median, SmallExample) {
    const MedianInterval m = median_interval(pmf_dp(Profile{0.0, {0.9, 0.6, 0.3}, 0.0}));
    EXPECT_EQ(m.lo, 2);
    EXPECT_EQ(m.hi, 2);
}

TEST(Median, SymmetricTwoPointHasIntervalMedian) {
    const MedianInterval m = median_interval(from_mass({0.5, 0.5}));
    EXPECT_EQ(m.lo, 0);
    EXPECT_EQ(m.hi, 1);
}

TEST(Median, JogdeoSamuelsAtIntegerMean) {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 300; ++rep) {
        const Profile p = integer_mean_profile(rng);
        const long mu = std::lround(mean(p));
        ASSERT_NEAR(mean(p), static_cast<double>(mu), 1e-12);
        EXPECT_TRUE(median_interval(pmf_dp(p)).contains(mu)) << detail::describe(p);
    }
}

TEST(PeakDerivative, SignAgreesWithFiniteDifference) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    int checked = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> probs(2 + rep % 8);
        for (double& x : probs) x = u(rng);
        const Profile p{rep % 2 ? 0.7 : 0.0, probs, 0.0};
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const PeakDerivative d = peak_derivative_class(p, i);
            if (std::abs(d.exact) < 1e-4) continue;
            EXPECT_NEAR(d.finite_diff, d.exact, 1e-5);
            EXPECT_EQ(d.slope == PeakSlope::increasing, d.exact > 0.0);
            ++checked;
        }
    }
    EXPECT_GT(checked, 200);
}

TEST(PeakDerivative, HeightDerivativeByOracle) {
    const Profile p{0.0, {0.3, 0.6, 0.8}, 0.0};
    for (std::size_t i = 0; i < 3; ++i) {
        auto h = [&](double x) {
            Profile q = p;
            q.probs[i] = x;
            const auto f = oracle::enumerate(q.probs);
            return *std::max_element(f.begin(), f.end());
        };
        EXPECT_NEAR(peak_derivative_class(p, i).exact, oracle::central_difference(h, p.probs[i], 1e-6),
                    1e-7);
    }
}
