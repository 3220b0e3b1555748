#pragma once

// Mean-mode relations: the extended Darroch rule, the finitary bounds on the
// bifurcation manifolds F_{k,n} = {f(k-1) = f(k)} and the vertices of the
// mean sections M_{k,n} = {mu = k} of the ordered simplex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "ebsum/binomial.hpp"
#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"
#include "ebsum/modal.hpp"

namespace ebsum {

enum class DarrochClass {
    definite_single,
    twin_lower,
    twin_upper,
    ambiguous_band,
    integer_mean_single,
    shifted_poisson_exception,
};

[[nodiscard]] inline const char* to_string(DarrochClass c) {
    switch (c) {
    case DarrochClass::definite_single: return "definite-single";
    case DarrochClass::twin_lower: return "twin-lower";
    case DarrochClass::twin_upper: return "twin-upper";
    case DarrochClass::ambiguous_band: return "ambiguous-band";
    case DarrochClass::integer_mean_single: return "integer-mean-single";
    case DarrochClass::shifted_poisson_exception: return "shifted-poisson-exception";
    }
    return "?";
}

struct DarrochVerdict {
    double mu = 0.0;
    long m_minus = 0;
    long m_plus = 0;
    DarrochClass classification = DarrochClass::definite_single;
    bool pass = false;
    std::string detail;
};

inline constexpr double max_certified_tail = 1e-9;

namespace detail {

inline bool near_integer(double x, long& k) {
    const double r = std::round(x);
    k = static_cast<long>(r);
    return std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x));
}

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

// (k - a, 1^a, 0, ...) with 0 <= a < k: lambda a positive integer, every p in {0, 1}.
inline bool shifted_poisson_shape(const Profile& profile) {
    long lam = 0;
    if (!near_integer(profile.lambda, lam) || lam < 1) return false;
    return std::all_of(profile.probs.begin(), profile.probs.end(),
                       [](double p) { return p <= 1e-12 || p >= 1.0 - 1e-12; });
}

} // namespace detail

[[nodiscard]] inline DarrochVerdict darroch_check(const Profile& profile) {
    profile.validate();
    detail::require(profile.tail_mass < max_certified_tail, Errc::budget_exhausted,
                    "darroch_check: tail_mass too large to certify the mode");
    DarrochVerdict v;
    v.mu = mean(profile);
    const ModeSummary s = mode_of(pmf_dp(profile));
    v.m_minus = s.m_minus;
    v.m_plus = s.m_plus;

    long k = 0;
    if (detail::near_integer(v.mu, k)) {
        if (detail::shifted_poisson_shape(profile)) {
            v.classification = DarrochClass::shifted_poisson_exception;
            v.pass = s.m_minus == k - 1 && s.m_plus == k;
            if (!v.pass) v.detail = "shifted Poisson shape without twin mode {k-1,k}";
        } else {
            v.classification = DarrochClass::integer_mean_single;
            v.pass = s.m_minus == k && s.m_plus == k;
            if (!v.pass) v.detail = "integer mean but mode differs from the mean";
        }
        return v;
    }

    k = static_cast<long>(std::floor(v.mu));
    v.classification = DarrochClass::definite_single;
    v.pass = k <= s.m_minus && s.m_plus <= k + 1;
    if (!v.pass) v.detail = "mode outside [floor(mu), ceil(mu)]";
    if (v.pass && !profile.probs.empty()) {
        const auto it = std::max_element(profile.probs.begin(), profile.probs.end());
        Profile rest = leave_one_out(profile, static_cast<std::size_t>(it - profile.probs.begin()));
        if (mode_of(pmf_dp(rest)).m_plus > k) {
            v.pass = false;
            v.detail = "leave-max-out mode exceeds floor(mu)";
        }
    }
    if (v.pass && !profile.probs.empty() && profile.finitary() && profile.lambda == 0.0) {
        // mu + min p > j  implies  m_minus >= j
        const double shifted = v.mu + *std::min_element(profile.probs.begin(), profile.probs.end());
        const auto j = static_cast<long>(std::ceil(shifted - 1e-12 * std::max(1.0, shifted))) - 1;
        if (s.m_minus < j) {
            v.pass = false;
            v.detail = "mu + min p exceeds an integer above m_minus";
        }
    }
    return v;
}

struct FinitaryBounds {
    double min_mu = 0.0;
    double max_mu = 0.0;
    Profile argmin;
    Profile argmax;
    double residual_min = 0.0; // |f(k-1) - f(k)| / f(k) at argmin
    double residual_max = 0.0;
};

// Extremes of mu over F_{k,n}: k - 1 + 1/(k+1) at (k/(k+1))^k and k - 1/(n-k+2) at
// (1^{k-1}, (1/(n-k+2))^{n-k+1}).
[[nodiscard]] inline FinitaryBounds finitary_bounds(long k, long n) {
    detail::require(k >= 1 && k <= n, Errc::invalid_argument, "finitary_bounds: need 0 < k <= n");
    FinitaryBounds b;
    const auto kd = static_cast<double>(k);
    const auto w = static_cast<double>(n - k + 2);
    b.min_mu = kd - 1.0 + 1.0 / (kd + 1.0);
    b.max_mu = kd - 1.0 / w;
    b.argmin.probs.assign(static_cast<std::size_t>(k), kd / (kd + 1.0));
    b.argmax.probs.assign(static_cast<std::size_t>(k - 1), 1.0);
    b.argmax.probs.insert(b.argmax.probs.end(), static_cast<std::size_t>(n - k + 1), 1.0 / w);
    auto residual = [k](const Profile& p) {
        const Pmf f = pmf_dp(p);
        return std::abs(f.at(k - 1) - f.at(k)) / f.at(k);
    };
    b.residual_min = residual(b.argmin);
    b.residual_max = residual(b.argmax);
    return b;
}

// Region of the finitary table for lambda = 0 and n components.
[[nodiscard]] inline DarrochVerdict region_classify(const Profile& profile) {
    profile.validate();
    detail::require(profile.lambda == 0.0, Errc::invalid_argument,
                    "region_classify: lambda must be zero");
    detail::require(profile.finitary(), Errc::invalid_argument,
                    "region_classify: profile must be finitary");
    const auto n = static_cast<long>(profile.probs.size());
    DarrochVerdict v;
    v.mu = mean(profile);
    const ModeSummary s = mode_of(pmf_dp(profile));
    v.m_minus = s.m_minus;
    v.m_plus = s.m_plus;
    auto modes_within = [&](long lo, long hi) { return lo <= s.m_minus && s.m_plus <= hi; };
    auto lower = [n](long k) { return static_cast<double>(k) - 1.0 / static_cast<double>(n - k + 2); };
    auto upper = [](long k) { return static_cast<double>(k) + 1.0 / static_cast<double>(k + 2); };

    for (long k = 0; k <= n; ++k) {
        if (detail::near(v.mu, lower(k)) && k >= 1) {
            v.classification = DarrochClass::twin_lower;
            auto a = profile.probs;
            auto b = finitary_bounds(k, n).argmax.probs;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            const bool extremal = std::equal(a.begin(), a.end(), b.begin(), detail::near);
            v.pass = extremal ? (s.m_minus == k - 1 && s.m_plus == k) : modes_within(k - 1, k);
            v.detail = s.twin ? "twin" : "single";
            return v;
        }
        if (detail::near(v.mu, upper(k)) && k + 1 <= n) {
            v.classification = DarrochClass::twin_upper;
            const bool extremal = std::all_of(profile.probs.begin(), profile.probs.end(), [&](double p) {
                return p == 0.0 || detail::near(p, static_cast<double>(k + 1) / (k + 2));
            });
            v.pass = extremal ? (s.m_minus == k && s.m_plus == k + 1) : modes_within(k, k + 1);
            v.detail = s.twin ? "twin" : "single";
            return v;
        }
    }
    // Open regions only after every boundary has been ruled out: a mean that rounds
    // just below a boundary must not land in the neighbouring band.
    for (long k = 0; k <= n; ++k) {
        if (lower(k) < v.mu && v.mu < upper(k)) {
            long ki = 0;
            v.classification = detail::near_integer(v.mu, ki) ? DarrochClass::integer_mean_single
                                                              : DarrochClass::definite_single;
            v.pass = s.m_minus == k && s.m_plus == k;
            if (!v.pass) v.detail = "definite region but mode differs";
            return v;
        }
        if (k + 1 <= n && upper(k) < v.mu && v.mu < lower(k + 1)) {
            v.classification = DarrochClass::ambiguous_band;
            v.pass = modes_within(k, k + 1);
            v.detail = s.twin ? "twin" : (s.m_plus == k ? "lower" : "upper");
            return v;
        }
    }
    detail::fail(Errc::contract_violation, "region_classify: mean outside every region");
}

// Vertices of {mu = k} within the ordered simplex 1 >= p_1 >= ... >= p_n >= 0:
// 1^k, then (1^i, c^{j-i}, 0, ...) with c = (k-i)/(j-i) for every i < k < j <= n.
[[nodiscard]] inline std::vector<std::vector<Rational>> me_extremal_simplex_exact(long k, long n) {
    detail::require(k > 0 && k < n, Errc::invalid_argument, "me_extremal_simplex: need 0 < k < n");
    std::vector<std::vector<Rational>> out;
    std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
    std::fill_n(v.begin(), k, Rational(1));
    out.push_back(v);
    for (long i = 0; i < k; ++i)
        for (long j = n; j > k; --j) {
            std::vector<Rational> p(static_cast<std::size_t>(n), Rational(0));
            std::fill_n(p.begin(), i, Rational(1));
            std::fill(p.begin() + i, p.begin() + j, Rational(k - i, j - i));
            out.push_back(std::move(p));
        }
    return out;
}

[[nodiscard]] inline std::vector<Profile> me_extremal_simplex(long k, long n) {
    std::vector<Profile> out;
    for (const auto& exact : me_extremal_simplex_exact(k, n)) {
        Profile p;
        for (const auto& r : exact) p.probs.push_back(to_double(r));
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random sampling

// Random point of F_{k,n}: draw odds, then scale them by z = E_{k-1}(r) / E_k(r), which
// makes f(k) / f(k-1) = z E_k / E_{k-1} exactly one.
[[nodiscard]] inline Profile sample_bifurcation_profile(long k, long n, std::mt19937_64& rng) {
    detail::require(k >= 1 && k <= n, Errc::invalid_argument,
                    "sample_bifurcation_profile: need 0 < k <= n");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<long> active_count(k, n);
    const long active = active_count(rng);
    const double shape = std::exp(4.0 * unit(rng) - 2.0); // spreads the odds over decades
    std::vector<double> odds;
    for (long i = 0; i < active; ++i) odds.push_back(std::pow(unit(rng), shape) + 1e-6);
    const SymmetricTable e = extended_symmetric(0.0, odds, 0);
    const double z = e.e[static_cast<std::size_t>(k - 1)] / e.e[static_cast<std::size_t>(k)];
    Profile p;
    for (double r : odds) p.probs.push_back(z * r / (1.0 + z * r));
    p.probs.resize(static_cast<std::size_t>(n), 0.0);
    return p;
}

// FNV-1a over the bit patterns of lambda and probs.
[[nodiscard]] inline std::uint64_t profile_hash(const Profile& p) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](double x) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &x, sizeof(double));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ULL;
        }
    };
    mix(p.lambda);
    for (double x : p.probs) mix(x);
    return h;
}

} // namespace ebsum
