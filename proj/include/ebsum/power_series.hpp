#pragma once

// Power series distributions f(k; t) = a_k t^k / F(t), F(t) = sum_k a_k t^k, with
// positive coefficients whose adjacent quotients a_{k+1}/a_k decrease strictly to zero
// (or a finite positive polynomial). Coefficients are supplied as log a_k and
// materialised lazily; all sums are carried in log space.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"
#include "ebsum/modal.hpp"

namespace ebsum {

inline constexpr std::size_t max_series_terms = 1'000'000;

struct PowerSeries {
    std::string name;
    // log a_k; -infinity for k past the degree of a polynomial.
    std::function<double(std::size_t)> log_coeff;
    std::optional<std::size_t> degree;

    [[nodiscard]] bool in_support(std::size_t k) const { return !degree || k <= *degree; }
};

namespace series {

[[nodiscard]] inline PowerSeries poisson() {
    return {"poisson", [](std::size_t k) { return -std::lgamma(static_cast<double>(k) + 1.0); },
            std::nullopt};
}

// a_k = 1/(2k)!, F(t) = cosh(sqrt t)
[[nodiscard]] inline PowerSeries cosh_sqrt() {
    return {"cosh-sqrt",
            [](std::size_t k) { return -std::lgamma(2.0 * static_cast<double>(k) + 1.0); },
            std::nullopt};
}

// a_k = C(n, k); t = p/(1-p) recovers Binomial(n, p).
[[nodiscard]] inline PowerSeries binomial(std::size_t n) {
    return {"binomial",
            [n](std::size_t k) {
                if (k > n) return -std::numeric_limits<double>::infinity();
                const auto nd = static_cast<double>(n), kd = static_cast<double>(k);
                return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
            },
            n};
}

// Coefficients given through b_k = a_{k-1} / (k a_k), k >= 1, with a_0 = 1. The first
// entries come from `prefix`, every later b_k equals `tail`.
[[nodiscard]] inline PowerSeries from_b_sequence(std::vector<double> prefix, double tail) {
    for (double b : prefix)
        detail::require(b > 0.0, Errc::invalid_argument, "from_b_sequence: b must be positive");
    detail::require(tail > 0.0, Errc::invalid_argument, "from_b_sequence: b must be positive");
    // log a_k = -log k! - sum_{j<=k} log b_j
    auto coeff = [prefix = std::move(prefix), tail](std::size_t k) {
        double s = -std::lgamma(static_cast<double>(k) + 1.0);
        const std::size_t head = std::min(k, prefix.size());
        for (std::size_t j = 0; j < head; ++j) s -= std::log(prefix[j]);
        return s - static_cast<double>(k - head) * std::log(tail);
    };
    return {"b-sequence", std::move(coeff), std::nullopt};
}

// F(t) = e^{lambda t} prod_i (1 + r_i t) with r_i the odds of the profile:
// a_k = E_k(lambda, r), and t = 1 is the profile itself.
[[nodiscard]] inline PowerSeries from_profile(const Profile& base) {
    base.validate();
    detail::require(base.finitary(), Errc::invalid_argument,
                    "from_profile: base must be finitary");
    std::vector<double> odds;
    for (double p : base.probs) {
        detail::require(p < 1.0, Errc::invalid_argument, "from_profile: unit probability");
        if (p > 0.0) odds.push_back(p / (1.0 - p));
    }
    const SymmetricTable plain = extended_symmetric(0.0, odds, 0);
    std::vector<double> log_e(plain.e.size());
    for (std::size_t j = 0; j < log_e.size(); ++j) log_e[j] = std::log(plain.e[j]);
    const double lambda = base.lambda;
    std::optional<std::size_t> degree;
    if (lambda == 0.0) degree = odds.size();
    // E_k(lambda, r) = sum_j lambda^{k-j}/(k-j)! E_j(0, r)
    auto coeff = [log_e = std::move(log_e), lambda](std::size_t k) {
        const std::size_t n = log_e.size() - 1;
        if (lambda == 0.0)
            return k <= n ? log_e[k] : -std::numeric_limits<double>::infinity();
        double best = -std::numeric_limits<double>::infinity();
        std::vector<double> terms;
        for (std::size_t j = 0; j <= std::min(k, n); ++j) {
            const auto d = static_cast<double>(k - j);
            terms.push_back(d * std::log(lambda) - std::lgamma(d + 1.0) + log_e[j]);
            best = std::max(best, terms.back());
        }
        double s = 0.0;
        for (double t : terms) s += std::exp(t - best);
        return best + std::log(s);
    };
    return {"profile", std::move(coeff), degree};
}

} // namespace series

// Log terms log(a_k t^k) for k = 0..K with a certified bound on the omitted tail.
struct SeriesTerms {
    std::vector<double> log_terms;
    double log_partial = 0.0;  // log of sum over the stored terms
    double tail_ratio = 0.0;   // omitted tail divided by the stored partial sum
};

[[nodiscard]] inline SeriesTerms series_terms(const PowerSeries& spec, double t, double eps) {
    detail::require(t >= 0.0 && std::isfinite(t), Errc::invalid_argument,
                    "power series: t must be finite and nonnegative");
    detail::require(eps > 0.0, Errc::invalid_argument, "power series: eps must be positive");
    SeriesTerms out;
    const double la0 = spec.log_coeff(0);
    detail::require(std::isfinite(la0), Errc::invalid_argument,
                    "power series: nonpositive coefficient a_0");
    if (t == 0.0) {
        out.log_terms = {la0};
        out.log_partial = la0;
        return out;
    }
    const double log_t = std::log(t);
    double top = la0, scaled = 1.0; // partial sum = exp(top) * scaled
    out.log_terms.push_back(la0);
    for (std::size_t k = 0;; ++k) {
        if (k + 1 >= max_series_terms)
            detail::fail(Errc::budget_exhausted, "power series: coefficient cap exceeded");
        if (!spec.in_support(k + 1)) break;
        const double la = spec.log_coeff(k + 1);
        if (!std::isfinite(la))
            detail::fail(Errc::invalid_argument, "power series: nonpositive coefficient");
        const double next = la + static_cast<double>(k + 1) * log_t;
        // Quotients decrease, so the tail past k is at most term_k * r / (1 - r).
        const double r = std::exp(next - out.log_terms.back());
        if (r < 1.0) {
            const double tail = std::exp(out.log_terms.back() - top) * r / (1.0 - r);
            if (tail <= 0.5 * eps * scaled) {
                out.tail_ratio = tail / scaled;
                break;
            }
        }
        out.log_terms.push_back(next);
        if (next > top) {
            scaled = scaled * std::exp(top - next) + 1.0;
            top = next;
        } else {
            scaled += std::exp(next - top);
        }
    }
    out.log_partial = top + std::log(scaled);
    return out;
}

// Checks that the quotients a_{k+1}/a_k strictly decrease on the first `count` terms.
[[nodiscard]] inline bool series_quotients_decrease(const PowerSeries& spec, std::size_t count) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < count && spec.in_support(k + 1); ++k) {
        const double a = spec.log_coeff(k), b = spec.log_coeff(k + 1);
        if (!std::isfinite(a) || !std::isfinite(b)) return false;
        if (!(b - a < prev)) return false;
        prev = b - a;
    }
    return true;
}

[[nodiscard]] inline Pmf psd_pmf(const PowerSeries& spec, double t, double eps = default_eps) {
    const SeriesTerms st = series_terms(spec, t, eps);
    Pmf pmf;
    // Normalising by partial + tail keeps the total at most one.
    const double log_norm = st.log_partial + std::log1p(st.tail_ratio);
    pmf.mass.resize(st.log_terms.size());
    for (std::size_t k = 0; k < pmf.mass.size(); ++k)
        pmf.mass[k] = std::exp(st.log_terms[k] - log_norm);
    pmf.trunc_err = 2.0 * st.tail_ratio;
    return pmf;
}

// mu(t) = t d/dt log F(t) = sum k a_k t^k / F(t)
[[nodiscard]] inline double psd_mean(const PowerSeries& spec, double t) {
    if (t == 0.0) return 0.0;
    const SeriesTerms st = series_terms(spec, t, 1e-17);
    double s = 0.0;
    for (std::size_t k = 1; k < st.log_terms.size(); ++k)
        s += static_cast<double>(k) * std::exp(st.log_terms[k] - st.log_partial);
    return s;
}

// t_k = a_{k-1} / a_k, the unique t with f(k-1; t) = f(k; t).
[[nodiscard]] inline double psd_bifurcation(const PowerSeries& spec, std::size_t k) {
    detail::require(k >= 1, Errc::invalid_argument, "psd_bifurcation: k must be positive");
    detail::require(spec.in_support(k), Errc::invalid_argument,
                    "psd_bifurcation: k beyond the polynomial degree");
    return std::exp(spec.log_coeff(k - 1) - spec.log_coeff(k));
}

// Root of mu(t) = k, the unique maximiser of the likelihood f(k; t).
[[nodiscard]] inline double psd_likelihood_max(const PowerSeries& spec, std::size_t k) {
    if (k == 0) return 0.0;
    if (spec.degree) {
        detail::require(k <= *spec.degree, Errc::invalid_argument,
                        "psd_likelihood_max: k beyond the polynomial degree");
        if (k == *spec.degree) return std::numeric_limits<double>::infinity();
    }
    const auto target = static_cast<double>(k);
    double lo = 0.0, hi = 1.0;
    while (psd_mean(spec, hi) < target) {
        lo = hi;
        hi *= 2.0;
        detail::require(hi < 1e300, Errc::budget_exhausted,
                        "psd_likelihood_max: could not bracket the root");
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (psd_mean(spec, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace ebsum
