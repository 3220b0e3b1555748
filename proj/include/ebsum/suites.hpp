#pragma once

// Seeded property suites shared by the CLI `check` command and the test programs.
// Each suite returns a SuiteResult and optionally streams one CSV row per case.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ebsum/darroch.hpp"
#include "ebsum/ebs_core.hpp"
#include "ebsum/families.hpp"
#include "ebsum/io.hpp"
#include "ebsum/modal.hpp"
#include "ebsum/transport.hpp"

namespace ebsum {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> notes; // first few failing cases

    [[nodiscard]] bool ok() const { return failures == 0; }

    void record(bool pass, const std::string& what) {
        ++cases;
        if (pass) return;
        ++failures;
        if (notes.size() < 10) notes.push_back(what);
    }
};

struct RandomProfileOptions {
    std::size_t max_n = 20;
    double max_lambda = 5.0;
    double max_p = 1.0;
    bool allow_units = true; // exact zeros and ones among the probabilities
};

// Mixture of shapes: pure Bernoulli sums, Poisson plus Bernoulli, small/large
// probabilities, and occasional exact 0 or 1 entries.
[[nodiscard]] inline Profile random_profile(std::mt19937_64& rng, const RandomProfileOptions& opt) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> size(0, opt.max_n);
    const int shape = std::uniform_int_distribution<int>(0, 4)(rng);
    Profile p;
    p.lambda = (shape == 0 || unit(rng) < 0.25) ? 0.0 : opt.max_lambda * unit(rng);
    const std::size_t n = size(rng);
    for (std::size_t i = 0; i < n; ++i) {
        double x = unit(rng);
        if (shape == 1) x = x * x * x;           // mostly small
        if (shape == 2) x = 1.0 - x * x * x;     // mostly large
        if (shape == 3 && opt.allow_units && unit(rng) < 0.15) x = unit(rng) < 0.5 ? 0.0 : 1.0;
        p.probs.push_back(std::min(x, opt.max_p));
    }
    return p;
}

namespace detail {

inline std::string describe(const Profile& p) { return json(p).dump(); }

} // namespace detail

// |mu - m_pm| <= 1 together with the leave-max-out and mu + min p refinements.
[[nodiscard]] inline SuiteResult darroch_suite(std::uint64_t seed, std::size_t cases,
                                               std::ostream* csv = nullptr) {
    SuiteResult r{"darroch", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::optional<CsvWriter> w;
    if (csv) w.emplace(*csv, std::vector<std::string>{"seed", "profile_hash", "mu", "m_minus", "m_plus", "pass"});
    for (std::size_t c = 0; c < cases; ++c) {
        const Profile p = random_profile(rng, {20, 5.0, 1.0, true});
        const DarrochVerdict v = darroch_check(p);
        const bool within = std::abs(v.mu - static_cast<double>(v.m_plus)) <= 1.0 &&
                            std::abs(v.mu - static_cast<double>(v.m_minus)) <= 1.0;
        const bool pass = v.pass && within;
        if (w) w->row(seed, profile_hash(p), v.mu, v.m_minus, v.m_plus, pass);
        r.record(pass, detail::describe(p) + " " + v.detail);
    }
    return r;
}

// Profiles moved onto an integer mean by changing one coordinate.
[[nodiscard]] inline Profile integer_mean_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
        Profile p = random_profile(rng, {20, 5.0, 1.0, true});
        const double mu = mean(p);
        const double target = unit(rng) < 0.5 ? std::floor(mu) : std::ceil(mu);
        if (target < 1.0) continue;
        const double gap = target - mu;
        std::vector<std::size_t> movable;
        for (std::size_t i = 0; i < p.probs.size(); ++i)
            if (p.probs[i] + gap >= 0.0 && p.probs[i] + gap <= 1.0) movable.push_back(i);
        const bool lambda_ok = p.lambda > 0.0 && p.lambda + gap > 0.0;
        if (movable.empty() && !lambda_ok) continue;
        const std::size_t pick =
            std::uniform_int_distribution<std::size_t>(0, movable.size() - (lambda_ok ? 0 : 1))(rng);
        if (pick < movable.size())
            p.probs[movable[pick]] += gap;
        else
            p.lambda += gap;
        // Rounding can leave the mean a few ulps away; push the residue into the same slot.
        const double rest = target - mean(p);
        if (pick < movable.size())
            p.probs[movable[pick]] = std::clamp(p.probs[movable[pick]] + rest, 0.0, 1.0);
        else
            p.lambda = std::max(0.0, p.lambda + rest);
        long k = 0;
        if (!detail::near_integer(mean(p), k)) continue;
        return p;
    }
}

[[nodiscard]] inline SuiteResult darroch_integer_suite(std::uint64_t seed, std::size_t cases,
                                                       std::ostream* csv = nullptr,
                                                       std::size_t* exceptions = nullptr) {
    SuiteResult r{"darroch-integer-mean", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::optional<CsvWriter> w;
    if (csv) w.emplace(*csv, std::vector<std::string>{"seed", "profile_hash", "mu", "m_minus", "m_plus", "pass"});
    std::size_t shifted = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        const Profile p = integer_mean_profile(rng);
        const DarrochVerdict v = darroch_check(p);
        if (v.classification == DarrochClass::shifted_poisson_exception) ++shifted;
        const bool pass = v.pass && (v.classification == DarrochClass::integer_mean_single ||
                                     v.classification == DarrochClass::shifted_poisson_exception);
        if (w) w->row(seed, profile_hash(p), v.mu, v.m_minus, v.m_plus, pass);
        r.record(pass, detail::describe(p) + " " + v.detail);
    }
    if (exceptions) *exceptions = shifted;
    return r;
}

// Lemma suite on one profile: ultra log-concavity, the leave-one-out identity and the
// monotone likelihood ratio in every coordinate and in lambda.
struct LemmaCase {
    bool ultra_lc = true;
    bool identity = true;
    bool mlr = true;
    double worst_identity = 0.0;
};

[[nodiscard]] inline LemmaCase lemma_case(const Profile& p) {
    LemmaCase out;
    const Pmf f = pmf_dp(p, 1e-15);
    const long base = f.first();
    for (long k = base + 1; k < f.last(); ++k) {
        const double a = f.at(k - 1), b = f.at(k), c = f.at(k + 1);
        if (a <= 0.0 || b <= 0.0 || c <= 0.0) continue;
        const auto j = static_cast<double>(k - base);
        if (!(j * b * b >= (j + 1.0) * a * c * (1.0 - 1e-10))) out.ultra_lc = false;
    }
    for (double res : identity_vi_residuals(p)) out.worst_identity = std::max(out.worst_identity, res);
    out.identity = out.worst_identity <= 1e-11;

    auto ratios_increase = [&f](const Pmf& g) {
        for (long k = std::min(f.first(), g.first()); k < std::max(f.last(), g.last()); ++k) {
            const double f0 = f.at(k), f1 = f.at(k + 1), g0 = g.at(k), g1 = g.at(k + 1);
            if (f0 <= 1e-300 || f1 <= 1e-300 || g0 <= 1e-300 || g1 <= 1e-300) continue;
            if (!(g1 / g0 > f1 / f0)) return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        if (p.probs[i] + 0.01 > 1.0) continue;
        Profile q = p;
        q.probs[i] += 0.01;
        if (!ratios_increase(pmf_dp(q, 1e-15))) out.mlr = false;
    }
    Profile q = p;
    q.lambda += 0.01;
    if (!ratios_increase(pmf_dp(q, 1e-15))) out.mlr = false;
    return out;
}

inline constexpr RandomProfileOptions engine_profiles{30, 10.0, 1.0, true};

[[nodiscard]] inline SuiteResult lemma_suite(std::uint64_t seed, std::size_t cases,
                                             std::ostream* csv = nullptr) {
    SuiteResult r{"lemma1", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::optional<CsvWriter> w;
    if (csv)
        w.emplace(*csv, std::vector<std::string>{"seed", "profile_hash", "ultra_lc", "identity_residual",
                                                 "mlr", "pass"});
    for (std::size_t c = 0; c < cases; ++c) {
        const Profile p = random_profile(rng, engine_profiles);
        const LemmaCase lc = lemma_case(p);
        const bool pass = lc.ultra_lc && lc.identity && lc.mlr;
        if (w) w->row(seed, profile_hash(p), lc.ultra_lc, lc.worst_identity, lc.mlr, pass);
        r.record(pass, detail::describe(p));
    }
    return r;
}

// Brute-force two-point plans: for each s the smallest delta on a grid of step `step`
// with f(m+1) >= f(m) after the deformation.
[[nodiscard]] inline double grid_two_point_cost(const Pmf& pmf, double step = 1e-4) {
    const long m = mode_of(pmf).m_plus;
    double best = std::numeric_limits<double>::infinity();
    const auto steps = static_cast<long>(std::llround(1.0 / step));
    for (long s = 1; s <= m + 1; ++s)
        for (long j = 1; j <= steps; ++j) {
            const double d = static_cast<double>(j) * step;
            const double g0 = (1.0 - d) * pmf.at(m) + d * pmf.at(m - s);
            const double g1 = (1.0 - d) * pmf.at(m + 1) + d * pmf.at(m + 1 - s);
            if (g1 >= g0) {
                best = std::min(best, static_cast<double>(s) * d);
                break;
            }
        }
    return best;
}

[[nodiscard]] inline SuiteResult transport_grid_suite(std::uint64_t seed, std::size_t cases,
                                                      std::ostream* csv = nullptr) {
    SuiteResult r{"transport-grid", 0, 0, {}};
    std::mt19937_64 rng(seed);
    std::optional<CsvWriter> w;
    if (csv)
        w.emplace(*csv, std::vector<std::string>{"seed", "profile_hash", "mode", "s", "cost", "grid_cost",
                                                 "residual", "pass"});
    while (r.cases < cases) {
        const Profile p = random_profile(rng, {10, 3.0, 0.999, false});
        const Pmf f = pmf_dp(p);
        if (mode_of(f).twin || mode_of(f).degenerate) continue;
        const TransportPlan plan = optimal_two_point(f);
        const double grid = grid_two_point_cost(f);
        const bool pass = grid >= plan.cost - 1e-3 && plan.balance_residual <= 1e-9 &&
                          plan.cost <= peak_skewness(f) + 1e-15;
        if (w) w->row(seed, profile_hash(p), plan.mode, plan.s, plan.cost, grid, plan.balance_residual, pass);
        r.record(pass, detail::describe(p));
    }
    return r;
}

// Transport report for a single PMF.
struct TransportReport {
    AbcCoefficients abc;
    double gamma = 0.0;
    std::vector<double> deltas; // delta(s), s = 1..m+1
    TransportPlan best_two_point;
    std::optional<TransportPlan> two_bernoulli;
    bool consistent = true;
};

[[nodiscard]] inline TransportReport transport_report(const Pmf& pmf) {
    TransportReport t;
    t.abc = abc_coefficients(pmf);
    t.gamma = peak_skewness(pmf);
    for (long s = 1; s <= t.abc.mode + 1; ++s) t.deltas.push_back(delta_for_shift(pmf, s));
    t.best_two_point = optimal_two_point(pmf);
    if (t.abc.a < 0.0) t.two_bernoulli = two_bernoulli_plan(pmf);
    t.consistent = t.best_two_point.cost <= t.gamma + 1e-15 &&
                   t.best_two_point.balance_residual <= 1e-9 &&
                   std::abs(t.deltas.front() - t.gamma) <= 1e-12;
    if (t.two_bernoulli)
        t.consistent = t.consistent && t.two_bernoulli->cost < t.gamma &&
                       t.two_bernoulli->balance_residual <= 1e-9;
    return t;
}

inline void to_json(json& j, const TransportReport& t) {
    j = json{{"mode", t.abc.mode}, {"A", t.abc.a},           {"B", t.abc.b},
             {"C", t.abc.c},       {"gamma", t.gamma},       {"delta", t.deltas},
             {"optimal_two_point", t.best_two_point},        {"consistent", t.consistent}};
    j["two_bernoulli"] = t.two_bernoulli ? json(*t.two_bernoulli) : json("no two-Bernoulli improvement");
}

} // namespace ebsum
