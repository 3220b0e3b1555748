#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ebsum/io.hpp"

using namespace ebsum;

TEST(ProfileJson, RoundTrip) {
    const Profile p{0.25, {0.1, 0.9, 1.0}, 0.0};
    const Profile q = json(p).get<Profile>();
    EXPECT_EQ(p, q);
}

TEST(ProfileJson, MissingFieldsDefault) {
    const Profile p = parse_profile(R"({"probs": [0.5]})");
    EXPECT_EQ(p.lambda, 0.0);
    EXPECT_EQ(p.probs.size(), 1u);
}

TEST(ProfileJson, Malformed) {
    EXPECT_THROW((void)parse_profile("{\"probs\": [0.5"), Error);
    EXPECT_THROW((void)parse_profile(R"({"probs": [1.5]})"), Error);
    EXPECT_THROW((void)parse_profile(R"({"probs": "x"})"), Error);
    EXPECT_THROW((void)parse_profile("binomial:3"), Error);
    EXPECT_THROW((void)parse_profile("poisson:abc"), Error);
    EXPECT_THROW((void)parse_profile("@/nonexistent/file.json"), Error);
}

TEST(ProfileNotation, Generators) {
    EXPECT_EQ(parse_profile("binomial:3:1/4"), binomial_profile(3, 0.25));
    EXPECT_EQ(parse_profile("poisson:1.6"), poisson_profile(1.6));
    EXPECT_EQ(parse_profile("ks:1:3"), karamata_stirling_profile(1.0, 3));
    EXPECT_EQ(parse_profile("cosh:20").probs.size(), 20u);
}

TEST(ProfileNotation, FromFile) {
    const std::string path = ::testing::TempDir() + "ebsum_profile.json";
    {
        std::ofstream out(path);
        out << R"({"lambda": 1.5, "probs": [0.2]})";
    }
    const Profile p = parse_profile("@" + path);
    EXPECT_EQ(p.lambda, 1.5);
    std::remove(path.c_str());
}

TEST(Csv, NumbersRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, 1e-300, 0.028000000000000004}) {
        EXPECT_EQ(std::stod(csv_number(x)), x);
    }
}

TEST(Csv, PmfLayout) {
    std::ostringstream out;
    write_csv(out, pmf_dp(binomial_profile(1, 0.5)));
    EXPECT_EQ(out.str(), "k,mass\n0,0.5\n1,0.5\n");
}

TEST(Csv, CrossModalLayout) {
    CrossModalReport r;
    r.add(CrossModalEntry{2, 5, 6, 2, 2, true});
    std::ostringstream out;
    write_csv(out, r);
    EXPECT_EQ(out.str(), "k,ell_lo,ell_hi,m_lo,m_hi,pass\n2,5,6,2,2,1\n");
}

TEST(FamilyJson, TaggedRoundTrip) {
    const std::vector<FamilySpec> specs{BinomialN{1.0 / 3.0, Rational(1, 3)},
                                        BinomialP{7},
                                        PoissonT{},
                                        PowerSeriesFamily{series::cosh_sqrt()},
                                        PowerSeriesFamily{series::binomial(5)},
                                        ScaledEBS{Profile{0.5, {0.2}, 0.0}},
                                        KaramataStirling{2.0, 100},
                                        StirlingSecond{50}};
    for (const auto& f : specs) {
        const json j = f;
        const FamilySpec g = j.get<FamilySpec>();
        EXPECT_EQ(json(g), j);
    }
    const json unknown{{"family", "nope"}};
    EXPECT_THROW((void)unknown.get<FamilySpec>(), Error);
}

TEST(PlanJson, TaggedFields) {
    TransportPlan p;
    p.kind = PlanKind::two_bernoulli;
    p.alpha1 = p.alpha2 = 0.4;
    const json j = p;
    EXPECT_EQ(j.at("kind"), "two-bernoulli");
    EXPECT_TRUE(j.contains("alpha1"));
    EXPECT_FALSE(j.contains("delta"));
}

TEST(VerdictJson, Classification) {
    const json j = darroch_check(Profile{3.0, {1.0, 1.0}, 0.0});
    EXPECT_EQ(j.at("classification"), "shifted-poisson-exception");
    EXPECT_EQ(j.at("pass"), true);
}
