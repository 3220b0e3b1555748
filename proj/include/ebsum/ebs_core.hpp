#pragma once

// Extended Bernoulli sums: S = Poisson(lambda) + sum_i Bernoulli(p_i), all independent.
//
// Two PMF engines are provided and are expected to agree:
//   pmf_dp        folds each Bernoulli factor into a truncated Poisson window
//                 (total-probability recursion in one coordinate),
//   pmf_symmetric evaluates f(k) = f(0) * E_k(lambda, r) where r_i = p_i / (1 - p_i)
//                 and E_k are the extended elementary symmetric functions of the odds.
// Both store P[S = shift + j] in mass[j]; success probabilities equal to one are
// factored out into the deterministic shift before anything else happens.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "ebsum/error.hpp"

namespace ebsum {

inline constexpr double default_eps = 1e-12;

struct Profile {
    double lambda = 0.0;
    std::vector<double> probs;
    // Upper bound on the total of success probabilities omitted from an infinite profile.
    double tail_mass = 0.0;

    void validate() const {
        detail::require(std::isfinite(lambda) && lambda >= 0.0, Errc::invalid_argument,
                        "profile: lambda must be finite and nonnegative");
        detail::require(std::isfinite(tail_mass) && tail_mass >= 0.0, Errc::invalid_argument,
                        "profile: tail_mass must be finite and nonnegative");
        for (double p : probs)
            detail::require(p >= 0.0 && p <= 1.0, Errc::invalid_argument,
                            "profile: success probabilities must lie in [0,1]");
    }

    [[nodiscard]] bool finitary() const noexcept { return tail_mass == 0.0; }
    [[nodiscard]] std::size_t size() const noexcept { return probs.size(); }

    friend bool operator==(const Profile&, const Profile&) = default;
};

struct Pmf {
    std::size_t shift = 0;
    std::vector<double> mass;
    double trunc_err = 0.0;

    // P[S = k] for an absolute index k; zero outside the stored window.
    [[nodiscard]] double at(long k) const noexcept {
        const long j = k - static_cast<long>(shift);
        if (j < 0 || j >= static_cast<long>(mass.size())) return 0.0;
        return mass[static_cast<std::size_t>(j)];
    }
    [[nodiscard]] long first() const noexcept { return static_cast<long>(shift); }
    [[nodiscard]] long last() const noexcept {
        return static_cast<long>(shift + mass.size()) - 1;
    }
    [[nodiscard]] double total() const noexcept {
        return std::accumulate(mass.begin(), mass.end(), 0.0);
    }
};

struct SymmetricTable {
    // e[k] = E_k(lambda, r)
    std::vector<double> e;
};

[[nodiscard]] inline double mean(const Profile& profile) {
    return profile.lambda + std::accumulate(profile.probs.begin(), profile.probs.end(), 0.0);
}

// Probabilities this close to one (but not equal) lose all relative accuracy in the odds.
[[nodiscard]] inline bool has_near_unit_probability(const Profile& profile) {
    return std::any_of(profile.probs.begin(), profile.probs.end(),
                       [](double p) { return p < 1.0 && p > 1.0 - 1e-12; });
}

[[nodiscard]] inline Profile leave_one_out(const Profile& profile, std::size_t i) {
    detail::require(i < profile.probs.size(), Errc::invalid_argument,
                    "leave_one_out: coordinate index out of range");
    Profile out = profile;
    out.probs.erase(out.probs.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
}

[[nodiscard]] inline Profile binomial_profile(std::size_t n, double p) {
    return Profile{0.0, std::vector<double>(n, p), 0.0};
}

[[nodiscard]] inline Profile poisson_profile(double t) { return Profile{t, {}, 0.0}; }

struct PoissonWindow {
    std::vector<double> mass; // e^{-lambda} lambda^k / k!, k = 0..K
    double tail = 0.0;         // certified bound on the omitted mass beyond K
};

namespace detail {

inline double log_poisson_term(double lambda, std::size_t k) {
    const auto kd = static_cast<double>(k);
    return -lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0);
}

// Remainder of the exponential series past K, valid once K + 2 > lambda.
inline double poisson_tail_bound(double lambda, std::size_t K) {
    const double next = std::exp(log_poisson_term(lambda, K + 1));
    const double ratio = lambda / static_cast<double>(K + 2);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return next / (1.0 - ratio);
}

inline std::size_t poisson_window_size(double lambda, double eps) {
    if (lambda == 0.0) return 0;
    auto K = static_cast<std::size_t>(
        std::max(std::ceil(lambda + 12.0 * std::sqrt(lambda + 1.0) + 25.0), 40.0));
    while (poisson_tail_bound(lambda, K) >= eps / 2.0) {
        if (K > (std::size_t{1} << 24)) fail(Errc::budget_exhausted, "poisson window too large");
        K *= 2;
    }
    return K;
}

inline void check_eps(double eps) {
    require(eps > 0.0 && std::isfinite(eps), Errc::invalid_argument, "eps must be positive");
}

// Ones go to the shift, zeros are dropped, the rest sorted in decreasing order.
inline std::vector<double> active_probs(const Profile& profile, std::size_t& ones) {
    std::vector<double> active;
    ones = 0;
    for (double p : profile.probs) {
        if (p == 1.0)
            ++ones;
        else if (p > 0.0)
            active.push_back(p);
    }
    std::sort(active.begin(), active.end(), std::greater<>());
    return active;
}

} // namespace detail

[[nodiscard]] inline PoissonWindow poisson_window(double lambda, double eps) {
    detail::check_eps(eps);
    detail::require(std::isfinite(lambda) && lambda >= 0.0, Errc::invalid_argument,
                    "poisson_window: lambda must be nonnegative");
    PoissonWindow w;
    const std::size_t K = detail::poisson_window_size(lambda, eps);
    if (K == 0) {
        w.mass = {1.0};
        return w;
    }
    w.mass.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) w.mass[k] = std::exp(detail::log_poisson_term(lambda, k));
    w.tail = detail::poisson_tail_bound(lambda, K);
    return w;
}

// One-step convolution with Bernoulli(p).
[[nodiscard]] inline Pmf add_bernoulli(Pmf pmf, double p) {
    detail::require(p >= 0.0 && p <= 1.0, Errc::invalid_argument,
                    "add_bernoulli: p must lie in [0,1]");
    if (p == 1.0) {
        ++pmf.shift;
        return pmf;
    }
    if (p == 0.0) return pmf;
    auto& m = pmf.mass;
    m.push_back(0.0);
    for (std::size_t j = m.size() - 1; j > 0; --j) m[j] = (1.0 - p) * m[j] + p * m[j - 1];
    m[0] *= (1.0 - p);
    return pmf;
}

[[nodiscard]] inline Pmf pmf_dp(const Profile& profile, double eps = default_eps) {
    detail::check_eps(eps);
    profile.validate();
    std::size_t ones = 0;
    const auto active = detail::active_probs(profile, ones);
    PoissonWindow w = poisson_window(profile.lambda, eps);
    Pmf pmf{ones, std::move(w.mass), w.tail + profile.tail_mass};
    for (double p : active) pmf = add_bernoulli(std::move(pmf), p);
    return pmf;
}

// E_k(lambda, r) for k up to poisson_terms + odds.size(), seeded by lambda^k / k!.
[[nodiscard]] inline SymmetricTable extended_symmetric(double lambda, std::span<const double> odds,
                                                       std::size_t poisson_terms) {
    SymmetricTable t;
    if (lambda == 0.0) {
        t.e = {1.0};
    } else {
        t.e.resize(poisson_terms + 1);
        t.e[0] = 1.0;
        for (std::size_t k = 1; k <= poisson_terms; ++k)
            t.e[k] = std::exp(static_cast<double>(k) * std::log(lambda) -
                              std::lgamma(static_cast<double>(k) + 1.0));
    }
    for (double r : odds) {
        detail::require(std::isfinite(r) && r >= 0.0, Errc::contract_violation,
                        "extended_symmetric: odds must be finite");
        auto& e = t.e;
        e.push_back(0.0);
        for (std::size_t k = e.size() - 1; k > 0; --k) e[k] += r * e[k - 1];
    }
    return t;
}

[[nodiscard]] inline Pmf pmf_symmetric(const Profile& profile, double eps = default_eps) {
    detail::check_eps(eps);
    profile.validate();
    std::size_t ones = 0;
    const auto active = detail::active_probs(profile, ones);

    std::vector<double> odds;
    odds.reserve(active.size());
    double log_f0 = -profile.lambda;
    for (double p : active) {
        if (!(p < 1.0))
            detail::fail(Errc::contract_violation, "pmf_symmetric: unit probability after shift");
        odds.push_back(p / (1.0 - p));
        log_f0 += std::log1p(-p);
    }
    const std::size_t K = detail::poisson_window_size(profile.lambda, eps);
    const SymmetricTable table = extended_symmetric(profile.lambda, odds, K);
    const double f0 = std::exp(log_f0);

    Pmf pmf;
    pmf.shift = ones;
    pmf.mass.resize(table.e.size());
    std::transform(table.e.begin(), table.e.end(), pmf.mass.begin(),
                   [f0](double e) { return f0 * e; });
    pmf.trunc_err = (K == 0 ? 0.0 : detail::poisson_tail_bound(profile.lambda, K)) +
                    profile.tail_mass;
    return pmf;
}

// |k f(k) - sum_i p_i f(k-1; p \ p_i) - lambda f(k-1)| for k = 0..last+1, each term from
// pmf_dp on the full profile and on every leave-one-out profile.
[[nodiscard]] inline std::vector<double> identity_vi_residuals(const Profile& profile) {
    detail::require(profile.finitary(), Errc::invalid_argument,
                    "identity_vi_residual: profile must be finitary");
    constexpr double eps = 1e-15;
    const Pmf full = pmf_dp(profile, eps);
    const long top = full.last() + 1;
    std::vector<double> rhs(static_cast<std::size_t>(top + 1), 0.0);
    for (long k = 0; k <= top; ++k)
        rhs[static_cast<std::size_t>(k)] = profile.lambda * full.at(k - 1);
    for (std::size_t i = 0; i < profile.probs.size(); ++i) {
        if (profile.probs[i] == 0.0) continue;
        const Pmf rest = pmf_dp(leave_one_out(profile, i), eps);
        for (long k = 0; k <= top; ++k) rhs[static_cast<std::size_t>(k)] += profile.probs[i] * rest.at(k - 1);
    }
    for (long k = 0; k <= top; ++k) {
        auto& r = rhs[static_cast<std::size_t>(k)];
        r = std::abs(static_cast<double>(k) * full.at(k) - r);
    }
    return rhs;
}

[[nodiscard]] inline double identity_vi_residual(const Profile& profile, std::size_t k) {
    const auto all = identity_vi_residuals(profile);
    return k < all.size() ? all[k] : 0.0;
}

} // namespace ebsum
