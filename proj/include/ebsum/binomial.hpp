#pragma once

// Closed-form modes and likelihood maximisers of the binomial and Poisson families.
// Rational success probabilities are handled in exact integer arithmetic so that
// bifurcation points (twin modes, twin maximisers) are detected without tolerance.

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "ebsum/error.hpp"

namespace ebsum {

using Rational = boost::rational<std::int64_t>;

namespace detail {
// Mixed rational/int comparisons recurse forever under C++20 rewritten operators.
inline const Rational zero{0}, one{1};
} // namespace detail

struct IntInterval {
    long lo = 0;
    long hi = 0;

    [[nodiscard]] bool contains(long k) const noexcept { return lo <= k && k <= hi; }
    [[nodiscard]] bool twin() const noexcept { return hi == lo + 1; }
    friend bool operator==(const IntInterval&, const IntInterval&) = default;
};

[[nodiscard]] inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

// Accepts "a/b", an integer, or a plain decimal such as "0.385" (converted exactly).
[[nodiscard]] inline Rational parse_rational(std::string_view text) {
    auto to_int = [](std::string_view s) {
        detail::require(!s.empty(), Errc::invalid_argument, "parse_rational: empty field");
        std::int64_t v = 0;
        for (char c : s) {
            detail::require(c >= '0' && c <= '9', Errc::invalid_argument,
                            "parse_rational: not a number");
            detail::require(v < (INT64_MAX - 9) / 10, Errc::invalid_argument,
                            "parse_rational: overflow");
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto den = to_int(text.substr(slash + 1));
        detail::require(den != 0, Errc::invalid_argument, "parse_rational: zero denominator");
        return Rational(to_int(text.substr(0, slash)), den);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto frac = text.substr(dot + 1);
        detail::require(frac.size() <= 15, Errc::invalid_argument,
                        "parse_rational: too many decimals");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const auto whole = dot == 0 ? 0 : to_int(text.substr(0, dot));
        return Rational(whole * scale + (frac.empty() ? 0 : to_int(frac)), scale);
    }
    return Rational(to_int(text));
}

// Mode of Binomial(n, p): k <= (n+1)p < k+1, twin exactly when (n+1)p is a positive integer.
[[nodiscard]] inline IntInterval binomial_mode(long n, const Rational& p) {
    detail::require(n >= 0, Errc::invalid_argument, "binomial_mode: n must be nonnegative");
    detail::require(p >= detail::zero && p <= detail::one, Errc::invalid_argument, "binomial_mode: p outside [0,1]");
    if (p == detail::zero) return {0, 0};
    if (p == detail::one) return {n, n};
    const std::int64_t num = (n + 1) * p.numerator();
    const std::int64_t den = p.denominator();
    const long k = static_cast<long>(num / den);
    if (num % den == 0 && k > 0) return {k - 1, k};
    return {k, k};
}

[[nodiscard]] inline IntInterval binomial_mode(long n, double p, double tie_tol = 1e-9) {
    detail::require(n >= 0, Errc::invalid_argument, "binomial_mode: n must be nonnegative");
    detail::require(p >= 0.0 && p <= 1.0, Errc::invalid_argument,
                    "binomial_mode: p outside [0,1]");
    if (p == 0.0) return {0, 0};
    if (p == 1.0) return {n, n};
    const double x = static_cast<double>(n + 1) * p;
    const double r = std::round(x);
    if (r > 0.0 && std::abs(x - r) <= tie_tol * std::max(1.0, x)) {
        const auto k = static_cast<long>(r);
        return {k - 1, k};
    }
    const auto k = static_cast<long>(std::floor(x));
    return {k, k};
}

// Maximisers in n of f(k; n, p): n <= k/p < n+1, twin exactly when k/p is a positive integer.
[[nodiscard]] inline IntInterval likelihood_max_n(long k, const Rational& p) {
    detail::require(k >= 0, Errc::invalid_argument, "likelihood_max_n: k must be nonnegative");
    detail::require(p > detail::zero && p < detail::one, Errc::invalid_argument, "likelihood_max_n: p outside (0,1)");
    if (k == 0) return {0, 0};
    const std::int64_t num = k * p.denominator();
    const std::int64_t den = p.numerator();
    const long n = static_cast<long>(num / den);
    if (num % den == 0) return {n - 1, n};
    return {n, n};
}

[[nodiscard]] inline IntInterval likelihood_max_n(long k, double p, double tie_tol = 1e-9) {
    detail::require(k >= 0, Errc::invalid_argument, "likelihood_max_n: k must be nonnegative");
    detail::require(p > 0.0 && p < 1.0, Errc::invalid_argument,
                    "likelihood_max_n: p outside (0,1)");
    if (k == 0) return {0, 0};
    const double x = static_cast<double>(k) / p;
    const double r = std::round(x);
    if (std::abs(x - r) <= tie_tol * std::max(1.0, x)) {
        const auto n = static_cast<long>(r);
        return {n - 1, n};
    }
    const auto n = static_cast<long>(std::floor(x));
    return {n, n};
}

[[nodiscard]] inline double likelihood_max_p(long k, long n) {
    detail::require(n > 0, Errc::invalid_argument, "likelihood_max_p: n must be positive");
    detail::require(k >= 0 && k <= n, Errc::invalid_argument,
                    "likelihood_max_p: k outside [0,n]");
    return static_cast<double>(k) / static_cast<double>(n);
}

// Poisson bifurcation point t_k = k; also the maximiser of the likelihood f(k; t).
[[nodiscard]] inline double poisson_pivot(long k) {
    detail::require(k >= 1, Errc::invalid_argument, "poisson_pivot: k must be positive");
    return static_cast<double>(k);
}

[[nodiscard]] inline double binomial_pmf(long k, long n, double p) {
    if (k < 0 || k > n) return 0.0;
    if (p == 0.0) return k == 0 ? 1.0 : 0.0;
    if (p == 1.0) return k == n ? 1.0 : 0.0;
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

// Exact sign comparisons between neighbouring binomial probabilities f(k; n, a/b),
// taken through their rational quotients. Each field is -1, 0 or +1 for
// "left < right", "equal", "left > right".
struct BinomialPattern {
    int row_left = 0;  // f(k-1; n) vs f(k; n)
    int row_right = 0; // f(k; n) vs f(k+1; n)
    int col_up = 0;    // f(k; n-1) vs f(k; n)
    int col_down = 0;  // f(k; n) vs f(k; n+1)
};

namespace detail {

inline int cmp(__int128 a, __int128 b) { return a < b ? -1 : (a > b ? 1 : 0); }

} // namespace detail

[[nodiscard]] inline BinomialPattern binomial_pattern(long k, long n, const Rational& p) {
    detail::require(p > detail::zero && p < detail::one, Errc::invalid_argument, "binomial_pattern: p outside (0,1)");
    detail::require(k >= 1 && n >= k, Errc::invalid_argument,
                    "binomial_pattern: need 1 <= k <= n");
    const __int128 a = p.numerator(), b = p.denominator(), q = b - a;
    BinomialPattern pat;
    // f(k;n)/f(k-1;n) = (n-k+1) a / (k q)
    pat.row_left = detail::cmp(__int128(k) * q, __int128(n - k + 1) * a);
    // f(k+1;n)/f(k;n) = (n-k) a / ((k+1) q)
    pat.row_right = detail::cmp(__int128(k + 1) * q, __int128(n - k) * a);
    // f(k;n)/f(k;n-1) = n q / ((n-k) b), with f(k;n-1) = 0 when n-1 < k
    pat.col_up = n == k ? -1 : detail::cmp(__int128(n - k) * b, __int128(n) * q);
    // f(k;n+1)/f(k;n) = (n+1) q / ((n+1-k) b)
    pat.col_down = detail::cmp(__int128(n + 1 - k) * b, __int128(n + 1) * q);
    return pat;
}

[[nodiscard]] inline __int128 binomial_coefficient(long n, long k) {
    detail::require(n >= 0 && k >= 0 && k <= n, Errc::invalid_argument,
                    "binomial_coefficient: need 0 <= k <= n");
    k = std::min(k, n - k);
    __int128 c = 1;
    for (long i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    return c;
}

} // namespace ebsum
