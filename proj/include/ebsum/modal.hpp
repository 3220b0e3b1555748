#pragma once

// Modal structure of a PMF: leading mode m_plus, lower mode m_minus, peak height,
// peak skewness and the effect of convolving with one more Bernoulli variable.
//
// Everything here is floating point; twin modes are detected with a relative tie
// tolerance. Exact twin detection for binomial/Poisson lives in families.hpp.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"

namespace ebsum {

inline constexpr double default_tie_tol = 1e-9;

struct ModeSummary {
    long m_minus = 0;
    long m_plus = 0;
    double peak = 0.0;
    bool twin = false;
    double skewness = 0.0;
    // Set for one-point distributions, which have no neighbours at the mode; skewness is
    // then reported as 1 although a Bernoulli(p) with p > 1/2 already moves the mode.
    bool degenerate = false;
};

struct MedianInterval {
    long lo = 0;
    long hi = 0;
    [[nodiscard]] bool contains(long k) const noexcept { return lo <= k && k <= hi; }
};

enum class PeakSlope { increasing, decreasing, stationary };

struct PeakDerivative {
    PeakSlope slope = PeakSlope::stationary;
    double exact = 0.0;       // f(k-1; p\p_i) - f(k; p\p_i)
    double finite_diff = 0.0; // central difference of h with step 1e-6
};

namespace detail {

inline bool tied(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(a, b);
}

inline bool one_point(const Pmf& pmf) {
    return std::count_if(pmf.mass.begin(), pmf.mass.end(), [](double v) { return v > 0.0; }) == 1;
}

// (f(m) - f(m+1)) / (2f(m) - f(m-1) - f(m+1)) at a strict leading mode m.
inline double skewness_at(const Pmf& pmf, long m) {
    const double num = pmf.at(m) - pmf.at(m + 1);
    const double den = 2.0 * pmf.at(m) - pmf.at(m - 1) - pmf.at(m + 1);
    return num / den;
}

} // namespace detail

[[nodiscard]] inline ModeSummary mode_of(const Pmf& pmf, double tie_tol = default_tie_tol) {
    detail::require(tie_tol > 0.0 && tie_tol <= 1e-6, Errc::invalid_argument,
                    "mode_of: tie_tol must lie in (0, 1e-6]");
    detail::require(!pmf.mass.empty(), Errc::invalid_argument, "mode_of: empty pmf");
    const auto it = std::max_element(pmf.mass.begin(), pmf.mass.end());
    detail::require(*it > 0.0, Errc::invalid_argument, "mode_of: all-zero pmf");

    // Log-concavity confines near-maximal values to at most two adjacent positions.
    long k = pmf.first() + static_cast<long>(it - pmf.mass.begin());
    ModeSummary s;
    if (detail::tied(pmf.at(k), pmf.at(k + 1), tie_tol)) {
        s.m_minus = k;
        s.m_plus = k + 1;
    } else if (detail::tied(pmf.at(k - 1), pmf.at(k), tie_tol)) {
        s.m_minus = k - 1;
        s.m_plus = k;
    } else {
        s.m_minus = s.m_plus = k;
    }
    s.twin = s.m_minus != s.m_plus;
    s.peak = pmf.at(s.m_plus);
    s.degenerate = detail::one_point(pmf);
    s.skewness = s.twin || s.degenerate ? 1.0 : detail::skewness_at(pmf, s.m_plus);
    return s;
}

// Smallest Bernoulli success probability that moves the leading mode up by one.
[[nodiscard]] inline double peak_skewness(const Pmf& pmf) { return mode_of(pmf).skewness; }

[[nodiscard]] inline double crossing_height(const Pmf& pmf) {
    const ModeSummary s = mode_of(pmf);
    if (s.degenerate) detail::fail(Errc::undefined, "one-point pmf: crossing undefined");
    if (s.twin) detail::fail(Errc::undefined, "flat-top: crossing undefined");
    const long m = s.m_plus;
    const double lo = pmf.at(m - 1), mid = pmf.at(m), hi = pmf.at(m + 1);
    return (mid * mid - lo * hi) / (2.0 * mid - lo - hi);
}

// Peak height of S + B with B ~ Bernoulli(p), read off the three positions around the mode.
[[nodiscard]] inline double peak_after_bernoulli(const Pmf& pmf, double p) {
    detail::require(p >= 0.0 && p <= 1.0, Errc::invalid_argument,
                    "peak_after_bernoulli: p must lie in [0,1]");
    const ModeSummary s = mode_of(pmf);
    if (s.twin) return s.peak;
    const long m = s.m_plus;
    const double lo = pmf.at(m - 1), mid = pmf.at(m), hi = pmf.at(m + 1);
    const double gamma = detail::skewness_at(pmf, m);
    if (p > gamma) return p * mid + (1.0 - p) * hi;
    if (p < gamma) return (1.0 - p) * mid + p * lo;
    return (mid * mid - lo * hi) / (2.0 * mid - lo - hi);
}

[[nodiscard]] inline MedianInterval median_interval(const Pmf& pmf) {
    detail::require(!pmf.mass.empty(), Errc::invalid_argument, "median_interval: empty pmf");
    constexpr double half = 0.5 - 1e-12;
    const double total = pmf.total();
    MedianInterval mi{pmf.first(), pmf.first()};
    double below = 0.0;
    bool have_lo = false;
    for (long k = pmf.first(); k <= pmf.last(); ++k) {
        const double upper = total - below; // P[S >= k] within the stored window
        below += pmf.at(k);
        if (!have_lo && below >= half) {
            mi.lo = k;
            have_lo = true;
        }
        if (upper >= half) mi.hi = k;
    }
    return mi;
}

[[nodiscard]] inline double peak_height(const Profile& profile, double eps = default_eps) {
    const Pmf pmf = pmf_dp(profile, eps);
    return *std::max_element(pmf.mass.begin(), pmf.mass.end());
}

// Sign of the derivative of the peak height in p_i, from the mode of the profile with
// coordinate i removed, cross-checked by a central finite difference.
[[nodiscard]] inline PeakDerivative peak_derivative_class(const Profile& profile, std::size_t i) {
    detail::require(profile.finitary(), Errc::invalid_argument,
                    "peak_derivative_class: profile must be finitary");
    detail::require(i < profile.probs.size(), Errc::invalid_argument,
                    "peak_derivative_class: coordinate index out of range");
    const long k = mode_of(pmf_dp(profile)).m_plus;
    const Pmf rest = pmf_dp(leave_one_out(profile, i));
    const ModeSummary r = mode_of(rest);

    PeakDerivative d;
    d.exact = rest.at(k - 1) - rest.at(k);
    if (!r.twin && r.m_plus == k - 1)
        d.slope = PeakSlope::increasing;
    else if (!r.twin && r.m_plus == k)
        d.slope = PeakSlope::decreasing;
    else if (r.twin && r.m_plus == k)
        d.slope = PeakSlope::stationary;
    else
        detail::fail(Errc::contract_violation, "peak_derivative_class: inconsistent modes");

    constexpr double step = 1e-6;
    const double p = profile.probs[i];
    const double lo = std::max(0.0, p - step), hi = std::min(1.0, p + step);
    Profile a = profile, b = profile;
    a.probs[i] = lo;
    b.probs[i] = hi;
    d.finite_diff = (peak_height(b) - peak_height(a)) / (hi - lo);
    return d;
}

} // namespace ebsum
