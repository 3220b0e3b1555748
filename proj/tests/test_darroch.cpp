#include <gtest/gtest.h>

#include <random>

#include "ebsum/darroch.hpp"
#include "ebsum/suites.hpp"
#include "oracles.hpp"

using namespace ebsum;

TEST(Darroch, FractionalMean) {
    const DarrochVerdict v = darroch_check(Profile{0.0, {0.9, 0.6, 0.3}, 0.0});
    EXPECT_NEAR(v.mu, 1.8, 1e-15);
    EXPECT_EQ(v.m_minus, 2);
    EXPECT_EQ(v.m_plus, 2);
    EXPECT_TRUE(v.pass);
}

TEST(Darroch, ShiftedPoissonException) {
    const DarrochVerdict v = darroch_check(Profile{3.0, {1.0, 1.0}, 0.0});
    EXPECT_EQ(v.classification, DarrochClass::shifted_poisson_exception);
    EXPECT_EQ(v.m_minus, 4);
    EXPECT_EQ(v.m_plus, 5);
    EXPECT_TRUE(v.pass);
}

TEST(Darroch, IntegerMeanSingleMode) {
    const DarrochVerdict v = darroch_check(binomial_profile(4, 0.5));
    EXPECT_EQ(v.classification, DarrochClass::integer_mean_single);
    EXPECT_EQ(v.m_minus, 2);
    EXPECT_EQ(v.m_plus, 2);
    EXPECT_TRUE(v.pass);
}

TEST(Darroch, RejectsUncertifiedTail) {
    EXPECT_THROW((void)darroch_check(Profile{0.0, {0.5}, 1e-3}), Error);
    EXPECT_NO_THROW((void)darroch_check(Profile{0.0, {0.5}, 1e-12}));
}

TEST(Darroch, RandomSuite) {
    const SuiteResult r = darroch_suite(2024, 2000, nullptr);
    EXPECT_EQ(r.cases, 2000u);
    EXPECT_EQ(r.failures, 0u);
}

TEST(Darroch, IntegerSuite) {
    std::size_t exceptions = 0;
    const SuiteResult r = darroch_integer_suite(2024, 300, nullptr, &exceptions);
    EXPECT_EQ(r.failures, 0u);
}

TEST(Darroch, SharperRuleWithoutPoisson) {
    // mu + min p > k gives m_- >= k, checked against enumeration
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int hits = 0;
    for (int rep = 0; rep < 3000; ++rep) {
        std::vector<double> probs(1 + rep % 10);
        for (double& x : probs) x = u(rng);
        double mu = 0.0, lo = 1.0;
        for (double x : probs) {
            mu += x;
            lo = std::min(lo, x);
        }
        const auto top = oracle::argmax_all(oracle::enumerate(probs));
        const auto k = static_cast<long>(std::floor(mu + lo));
        if (mu + lo > static_cast<double>(k) && static_cast<double>(k) > mu) {
            EXPECT_GE(top.front(), k);
            ++hits;
        }
    }
    EXPECT_GT(hits, 0);
}

TEST(FinitaryBounds, ClosedForms) {
    const FinitaryBounds b = finitary_bounds(2, 3);
    EXPECT_NEAR(b.min_mu, 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(b.max_mu, 5.0 / 3.0, 1e-15);
    const FinitaryBounds one = finitary_bounds(1, 1);
    EXPECT_NEAR(one.min_mu, 0.5, 1e-15);
    EXPECT_NEAR(one.max_mu, 0.5, 1e-15);
    EXPECT_EQ(one.argmin.probs, one.argmax.probs);
    const FinitaryBounds three = finitary_bounds(3, 3);
    EXPECT_NEAR(three.min_mu, 2.25, 1e-15);
    EXPECT_NEAR(three.max_mu, 2.5, 1e-15);
    EXPECT_THROW((void)finitary_bounds(4, 3), Error);
    EXPECT_THROW((void)finitary_bounds(0, 3), Error);
}

TEST(FinitaryBounds, ExtremalProfilesBalance) {
    for (long n = 1; n <= 6; ++n)
        for (long k = 1; k <= n; ++k) {
            const FinitaryBounds b = finitary_bounds(k, n);
            EXPECT_LE(b.residual_min, 1e-10);
            EXPECT_LE(b.residual_max, 1e-10);
            EXPECT_NEAR(mean(b.argmin), b.min_mu, 1e-12);
            EXPECT_NEAR(mean(b.argmax), b.max_mu, 1e-12);
        }
}

TEST(FinitaryBounds, RandomSamplesStayInside) {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 2000; ++rep) {
        const long n = 1 + rep % 6;
        const long k = 1 + (rep / 6) % n;
        const Profile p = sample_bifurcation_profile(k, n, rng);
        const auto f = oracle::enumerate(p.probs);
        ASSERT_NEAR(f[static_cast<std::size_t>(k - 1)], f[static_cast<std::size_t>(k)],
                    1e-10 * f[static_cast<std::size_t>(k)]);
        const FinitaryBounds b = finitary_bounds(k, n);
        EXPECT_GE(mean(p), b.min_mu - 1e-12);
        EXPECT_LE(mean(p), b.max_mu + 1e-12);
    }
}

TEST(RegionClassify, AmbiguousBand) {
    const DarrochVerdict v = region_classify(binomial_profile(3, 0.52));
    EXPECT_EQ(v.classification, DarrochClass::ambiguous_band);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.m_plus, 2);
}

TEST(RegionClassify, ExtremalArgmaxIsTwin) {
    const DarrochVerdict v = region_classify(finitary_bounds(2, 3).argmax);
    EXPECT_EQ(v.classification, DarrochClass::twin_lower);
    EXPECT_EQ(v.m_minus, 1);
    EXPECT_EQ(v.m_plus, 2);
    EXPECT_TRUE(v.pass);
}

TEST(RegionClassify, IntegerMean) {
    const DarrochVerdict v = region_classify(binomial_profile(2, 0.5));
    EXPECT_EQ(v.classification, DarrochClass::integer_mean_single);
    EXPECT_EQ(v.m_plus, 1);
    EXPECT_TRUE(v.pass);
    EXPECT_THROW((void)region_classify(Profile{1.0, {0.5}, 0.0}), Error);
}

TEST(RegionClassify, RandomProfilesAgreeWithTable) {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 2000; ++rep) {
        const Profile p = random_profile(rng, {8, 0.0, 1.0, true});
        EXPECT_TRUE(region_classify(p).pass) << detail::describe(p);
    }
}

TEST(MeExtremal, TriangleVertices) {
    const auto v = me_extremal_simplex_exact(2, 3);
    ASSERT_EQ(v.size(), 3u);
    const std::vector<std::vector<Rational>> expect{
        {Rational(1), Rational(1), Rational(0)},
        {Rational(1), Rational(1, 2), Rational(1, 2)},
        {Rational(2, 3), Rational(2, 3), Rational(2, 3)}};
    for (const auto& e : expect) EXPECT_NE(std::find(v.begin(), v.end(), e), v.end());
    const auto w = me_extremal_simplex_exact(1, 2);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_THROW((void)me_extremal_simplex(3, 3), Error);
}

TEST(MeExtremal, VerticesHaveIntegerMean) {
    for (long n = 2; n <= 7; ++n)
        for (long k = 1; k < n; ++k)
            for (const auto& exact : me_extremal_simplex_exact(k, n)) {
                Rational s(0);
                for (const auto& r : exact) s += r;
                EXPECT_EQ(s, Rational(k));
                Profile p;
                for (const auto& r : exact) p.probs.push_back(to_double(r));
                const DarrochVerdict d = darroch_check(p);
                EXPECT_TRUE(d.pass);
                EXPECT_EQ(d.m_plus, k);
            }
}

TEST(ProfileHash, Deterministic) {
    const Profile a{0.5, {0.1, 0.2}, 0.0}, b{0.5, {0.2, 0.1}, 0.0};
    EXPECT_EQ(profile_hash(a), profile_hash(a));
    EXPECT_NE(profile_hash(a), profile_hash(b));
}
