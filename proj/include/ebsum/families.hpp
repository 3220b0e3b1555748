#pragma once

// Parametric families of extended Bernoulli sums and cross-modality scanners.
//
// A family is cross modal when every maximiser t of the likelihood f(k; .) has k among
// the modes of f(. ; t). The scanners compute the maximiser set for each k (from closed
// forms where they exist, otherwise by exhaustive integer scans or bisection on a
// monotone mean) and check membership.

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ebsum/binomial.hpp"
#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"
#include "ebsum/modal.hpp"
#include "ebsum/power_series.hpp"

namespace ebsum {

struct BinomialN {
    double p = 0.5;
    std::optional<Rational> exact; // takes precedence over p when present
};
struct BinomialP {
    long n = 1;
};
struct PoissonT {};
struct PowerSeriesFamily {
    PowerSeries series;
};
struct ScaledEBS {
    Profile base;
};
struct KaramataStirling {
    double t = 1.0;
    long n_max = 200;
};
// Rows of the normalised Stirling triangle of the second kind, indexed by n.
struct StirlingSecond {
    long n_max = 200;
};

using FamilySpec = std::variant<BinomialN, BinomialP, PoissonT, PowerSeriesFamily, ScaledEBS,
                                KaramataStirling, StirlingSecond>;

struct CrossModalEntry {
    long k = 0;
    double ell_lo = 0.0; // likelihood maximisers, as an interval of the parameter
    double ell_hi = 0.0;
    long m_lo = 0; // modes common to every maximiser; empty when m_lo > m_hi
    long m_hi = 0;
    bool pass = false;
};

// One row of the three equivalent power-series criteria for cross modality.
struct PsdCriteria {
    long k = 0;
    double t_k = 0.0, t_next = 0.0, ell = 0.0, mean_at_t_k = 0.0;
    bool bracket = false, bracket_strict = false; // t_k <= ell(k) <= t_{k+1}
    bool mean = false, mean_strict = false;       // k-1 <= mu(t_k) <= k
    bool sup_gap = false;                         // |mu - m_plus| <= 1 on [t_k, t_{k+1})
};

struct CrossModalReport {
    std::vector<CrossModalEntry> entries;
    bool all_pass = true;
    std::vector<PsdCriteria> criteria;
    bool criteria_unanimous = true;

    void add(CrossModalEntry e) {
        all_pass = all_pass && e.pass;
        entries.push_back(e);
    }
};

// ---------------------------------------------------------------------------
// Profiles generated by families

// lambda(t) = lambda t, p_i(t) = t p_i / (1 - p_i + t p_i): the odds scale by t.
[[nodiscard]] inline Profile ebs_scale(const Profile& base, double t) {
    base.validate();
    detail::require(t >= 0.0 && std::isfinite(t), Errc::invalid_argument,
                    "ebs_scale: t must be finite and nonnegative");
    Profile out = base;
    out.lambda = base.lambda * t;
    for (double& p : out.probs) {
        detail::require(p < 1.0, Errc::invalid_argument, "ebs_scale: unit probability in base");
        if (t != 1.0) p = t * p / (1.0 - p + t * p);
    }
    return out;
}

// p_i = t / (t + i - 1), i = 1..n; p_1 = 1.
[[nodiscard]] inline Profile karamata_stirling_profile(double t, long n) {
    detail::require(t > 0.0 && std::isfinite(t), Errc::invalid_argument,
                    "karamata_stirling_profile: t must be positive");
    detail::require(n >= 1, Errc::invalid_argument, "karamata_stirling_profile: n must be >= 1");
    Profile out;
    out.probs.reserve(static_cast<std::size_t>(n));
    for (long i = 1; i <= n; ++i) out.probs.push_back(t / (t + static_cast<double>(i - 1)));
    return out;
}

// [n k] t^k / (t)_n from the unsigned Stirling triangle [n k] = (n-1)[n-1 k] + [n-1 k-1],
// carried unnormalised in extended precision.
[[nodiscard]] inline std::vector<long double> karamata_stirling_triangle(double t, long n) {
    detail::require(t > 0.0, Errc::invalid_argument, "karamata_stirling_triangle: t > 0");
    detail::require(n >= 0 && n <= 1500, Errc::invalid_argument,
                    "karamata_stirling_triangle: n out of range");
    std::vector<long double> row{1.0L};
    for (long m = 1; m <= n; ++m) {
        std::vector<long double> next(static_cast<std::size_t>(m + 1), 0.0L);
        for (long k = 1; k <= m; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const long double keep = ku < row.size() ? row[ku] : 0.0L;
            next[ku] = static_cast<long double>(m - 1) * keep + row[ku - 1];
        }
        row = std::move(next);
    }
    const long double lt = std::log(static_cast<long double>(t));
    long double log_rising = 0.0L;
    for (long i = 0; i < n; ++i) log_rising += std::log(static_cast<long double>(t) + i);
    std::vector<long double> out(row.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        out[k] = row[k] == 0.0L ? 0.0L
                                : std::exp(std::log(row[k]) + static_cast<long double>(k) * lt -
                                           log_rising);
    return out;
}

// F(t) = cosh(sqrt t) as an extended Bernoulli sum: odds r_i = 4 t / ((2i-1)^2 pi^2).
// The first `terms` factors are kept exactly; the rest are replaced by a Poisson
// variable of the same mean, at total-variation cost at most 2 sum_{i>terms} p_i^2,
// which is recorded (bounded by an integral) in tail_mass.
[[nodiscard]] inline Profile cosh_sqrt_profile(std::size_t terms, double t = 1.0) {
    detail::require(t > 0.0, Errc::invalid_argument, "cosh_sqrt_profile: t must be positive");
    const double pi2 = boost::math::constants::pi_sqr<double>();
    Profile out;
    double kept = 0.0;
    for (std::size_t i = 1; i <= terms; ++i) {
        const double odd = 2.0 * static_cast<double>(i) - 1.0;
        const double r = 4.0 * t / (odd * odd * pi2);
        out.probs.push_back(r / (1.0 + r));
        kept += out.probs.back();
    }
    const double s = std::sqrt(t);
    out.lambda = std::max(0.0, 0.5 * s * std::tanh(s) - kept);
    // sum_{i>N} r_i^2 <= (16 t^2 / pi^4) / (6 (2N-1)^3)
    const double edge = 2.0 * static_cast<double>(terms) - 1.0;
    out.tail_mass = 2.0 * 16.0 * t * t / (pi2 * pi2) / (6.0 * edge * edge * edge);
    return out;
}

// Karamata-Stirling asymptotic mode location t (log n - psi(t)).
[[nodiscard]] double karamata_stirling_u(long n, double t);

// ---------------------------------------------------------------------------
// Cross-modality scans

namespace detail {

inline CrossModalEntry entry_from(long k, double lo, double hi, IntInterval m_common) {
    CrossModalEntry e{k, lo, hi, m_common.lo, m_common.hi, false};
    e.pass = m_common.lo <= m_common.hi && m_common.contains(k);
    return e;
}

inline IntInterval intersect(IntInterval a, IntInterval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline IntInterval modes_of(const Pmf& pmf) {
    const ModeSummary s = mode_of(pmf);
    return {s.m_minus, s.m_plus};
}

// Checks the exact row/column pattern around a binomial-n cross mode (k, n).
inline bool binomial_pattern_ok(long k, long n, const Rational& p) {
    if (k == 0) return n == 0;
    if (n < k) return false;
    const BinomialPattern pat = binomial_pattern(k, n, p);
    const std::int64_t a = p.numerator(), b = p.denominator();
    const bool row_mode = pat.row_left <= 0 && pat.row_right >= 0;
    const bool col_max = pat.col_up <= 0 && pat.col_down >= 0;
    if (!row_mode || !col_max) return false;
    const __int128 kb = __int128(k) * b, lowsum = __int128(n) * a, highsum = __int128(n + 1) * a;
    if (lowsum < kb && kb < highsum) // np < k < (n+1)p: all four strict
        return pat.row_left < 0 && pat.row_right > 0 && pat.col_up < 0 && pat.col_down > 0;
    if (kb == highsum) // k = (n+1)p: twin mode, twin maximiser
        return pat.row_left == 0 && pat.row_right > 0 && pat.col_up < 0 && pat.col_down == 0;
    if (kb == lowsum) // k = np: mirror case at the upper maximiser
        return pat.row_left < 0 && pat.row_right > 0 && pat.col_up == 0 && pat.col_down > 0;
    return false;
}

inline CrossModalReport scan_binomial_n(const BinomialN& fam, long k_lo, long k_hi) {
    CrossModalReport rep;
    for (long k = k_lo; k <= k_hi; ++k) {
        if (fam.exact) {
            const Rational& p = *fam.exact;
            const IntInterval ell = likelihood_max_n(k, p);
            IntInterval common{0, std::numeric_limits<long>::max()};
            bool pattern = true;
            for (long n = ell.lo; n <= ell.hi; ++n) {
                common = intersect(common, binomial_mode(n, p));
                pattern = pattern && binomial_pattern_ok(k, n, p);
            }
            auto e = entry_from(k, static_cast<double>(ell.lo), static_cast<double>(ell.hi),
                                common);
            e.pass = e.pass && pattern;
            rep.add(e);
        } else {
            const double p = fam.p;
            detail::require(p > 0.0 && p < 1.0, Errc::invalid_argument,
                            "binomial-n scan: p outside (0,1)");
            // Integer scan over [0, ceil(k/p) + 50] instead of the closed form.
            const long n_max = static_cast<long>(std::ceil(static_cast<double>(k) / p)) + 50;
            double best = -1.0;
            std::vector<double> lik(static_cast<std::size_t>(n_max + 1));
            for (long n = 0; n <= n_max; ++n) {
                lik[static_cast<std::size_t>(n)] = binomial_pmf(k, n, p);
                best = std::max(best, lik[static_cast<std::size_t>(n)]);
            }
            long lo = -1, hi = -1;
            for (long n = 0; n <= n_max; ++n)
                if (tied(lik[static_cast<std::size_t>(n)], best, default_tie_tol)) {
                    if (lo < 0) lo = n;
                    hi = n;
                }
            if (hi == n_max) fail(Errc::budget_exhausted, "binomial-n scan: argmax not bracketed");
            IntInterval common{0, std::numeric_limits<long>::max()};
            for (long n = lo; n <= hi; ++n) common = intersect(common, binomial_mode(n, p));
            rep.add(entry_from(k, static_cast<double>(lo), static_cast<double>(hi), common));
        }
    }
    return rep;
}

inline CrossModalReport scan_binomial_p(const BinomialP& fam, long k_lo, long k_hi) {
    require(fam.n >= 1, Errc::invalid_argument, "binomial-p scan: n must be positive");
    CrossModalReport rep;
    for (long k = std::max(0L, k_lo); k <= std::min(k_hi, fam.n); ++k) {
        const double ell = likelihood_max_p(k, fam.n);
        rep.add(entry_from(k, ell, ell, binomial_mode(fam.n, Rational(k, fam.n))));
    }
    return rep;
}

inline CrossModalReport scan_poisson(long k_lo, long k_hi) {
    CrossModalReport rep;
    for (long k = std::max(0L, k_lo); k <= k_hi; ++k) {
        const IntInterval m = k == 0 ? IntInterval{0, 0} : IntInterval{k - 1, k};
        const double ell = k == 0 ? 0.0 : poisson_pivot(k);
        rep.add(entry_from(k, ell, ell, m));
    }
    return rep;
}

// Likelihood over an integer-indexed sequence of PMFs: rows[n] is the PMF at parameter n.
inline CrossModalReport scan_rows(const std::vector<std::vector<long double>>& rows, long k_lo,
                                  long k_hi, const char* what) {
    CrossModalReport rep;
    const long n_max = static_cast<long>(rows.size()) - 1;
    auto at = [&](long n, long k) -> long double {
        const auto& r = rows[static_cast<std::size_t>(n)];
        return k >= 0 && k < static_cast<long>(r.size()) ? r[static_cast<std::size_t>(k)] : 0.0L;
    };
    auto row_modes = [&](long n) {
        const auto& r = rows[static_cast<std::size_t>(n)];
        const auto it = std::max_element(r.begin(), r.end());
        const long j = static_cast<long>(it - r.begin());
        auto close = [](long double a, long double b) {
            return std::abs(a - b) <= 1e-9L * std::max(a, b);
        };
        if (close(at(n, j + 1), *it)) return IntInterval{j, j + 1};
        if (close(at(n, j - 1), *it)) return IntInterval{j - 1, j};
        return IntInterval{j, j};
    };
    for (long k = k_lo; k <= k_hi; ++k) {
        long double best = 0.0L;
        for (long n = 0; n <= n_max; ++n) best = std::max(best, at(n, k));
        require(best > 0.0L, Errc::budget_exhausted, what);
        long lo = -1, hi = -1;
        for (long n = 0; n <= n_max; ++n)
            if (std::abs(at(n, k) - best) <= 1e-9L * best) {
                if (lo < 0) lo = n;
                hi = n;
            }
        if (hi == n_max) fail(Errc::budget_exhausted, what);
        IntInterval common{0, std::numeric_limits<long>::max()};
        for (long n = lo; n <= hi; ++n) common = intersect(common, row_modes(n));
        rep.add(entry_from(k, static_cast<double>(lo), static_cast<double>(hi), common));
    }
    return rep;
}

inline std::vector<std::vector<long double>> karamata_stirling_rows(double t, long n_max) {
    std::vector<std::vector<long double>> rows{{1.0L}};
    Pmf pmf{0, {1.0}, 0.0};
    for (long n = 1; n <= n_max; ++n) {
        pmf = add_bernoulli(std::move(pmf), t / (t + static_cast<double>(n - 1)));
        std::vector<long double> row(pmf.shift + pmf.mass.size(), 0.0L);
        for (std::size_t j = 0; j < pmf.mass.size(); ++j) row[pmf.shift + j] = pmf.mass[j];
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<long double>> stirling_second_rows(long n_max) {
    std::vector<std::vector<long double>> rows{{1.0L}};
    std::vector<long double> s{1.0L};
    for (long n = 1; n <= n_max; ++n) {
        std::vector<long double> next(static_cast<std::size_t>(n + 1), 0.0L);
        for (long k = 1; k <= n; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            next[ku] = static_cast<long double>(k) * (ku < s.size() ? s[ku] : 0.0L) + s[ku - 1];
        }
        s = next;
        long double bell = 0.0L;
        for (long double v : s) bell += v;
        for (long double& v : next) v /= bell;
        rows.push_back(std::move(next));
    }
    return rows;
}

// Mean-matching families: ell(k) is the root of mu(t) = k and the PMF at ell(k) decides.
template <class Mean, class PmfAt>
CrossModalReport scan_mean_matching(Mean&& mu, PmfAt&& pmf_at, std::optional<long> degree,
                                    long k_lo, long k_hi) {
    CrossModalReport rep;
    for (long k = std::max(0L, k_lo); k <= k_hi; ++k) {
        if (k == 0) {
            rep.add(entry_from(0, 0.0, 0.0, modes_of(pmf_at(0.0))));
            continue;
        }
        if (degree && k >= *degree) {
            require(k == *degree, Errc::invalid_argument, "scan: k beyond the polynomial degree");
            const double inf = std::numeric_limits<double>::infinity();
            rep.add(entry_from(k, inf, inf, IntInterval{k, k}));
            continue;
        }
        const auto target = static_cast<double>(k);
        double lo = 0.0, hi = 1.0;
        while (mu(hi) < target) {
            lo = hi;
            hi *= 2.0;
            require(hi < 1e300, Errc::budget_exhausted, "scan: could not bracket the maximiser");
        }
        while (hi - lo > 1e-12 * hi) {
            const double mid = 0.5 * (lo + hi);
            (mu(mid) < target ? lo : hi) = mid;
        }
        const double ell = 0.5 * (lo + hi);
        rep.add(entry_from(k, ell, ell, modes_of(pmf_at(ell))));
    }
    return rep;
}

} // namespace detail

// The three equivalent criteria for a log-concave power series family, for k <= k_max.
[[nodiscard]] inline CrossModalReport psd_cross_modal_check(const PowerSeries& spec, long k_max) {
    detail::require(k_max >= 1, Errc::invalid_argument, "psd_cross_modal_check: k_max >= 1");
    if (spec.degree)
        detail::require(static_cast<std::size_t>(k_max) < *spec.degree, Errc::invalid_argument,
                        "psd_cross_modal_check: k_max must be below the polynomial degree");
    CrossModalReport rep = detail::scan_mean_matching(
        [&](double t) { return psd_mean(spec, t); }, [&](double t) { return psd_pmf(spec, t); },
        std::nullopt, 0, k_max);

    constexpr double slack = 1e-9;
    auto gap_ok = [&](double t) {
        return std::abs(psd_mean(spec, t) -
                        static_cast<double>(mode_of(psd_pmf(spec, t)).m_plus)) <= 1.0 + slack;
    };
    bool all_i = true, all_ii = true, all_iii = true;
    for (long k = 0; k <= k_max; ++k) {
        PsdCriteria c;
        c.k = k;
        c.t_k = k == 0 ? 0.0 : psd_bifurcation(spec, static_cast<std::size_t>(k));
        c.t_next = psd_bifurcation(spec, static_cast<std::size_t>(k + 1));
        // Sampled on a uniform grid plus the left end and just before the right end.
        c.sup_gap = true;
        for (int j = 0; j < 16 && c.sup_gap; ++j)
            c.sup_gap = gap_ok(c.t_k + (c.t_next - c.t_k) * j / 16.0);
        c.sup_gap = c.sup_gap && gap_ok(c.t_next * (1.0 - 1e-9));
        all_iii = all_iii && c.sup_gap;
        if (k == 0) continue; // criteria (i) and (ii) start at k = 1
        c.ell = psd_likelihood_max(spec, static_cast<std::size_t>(k));
        c.mean_at_t_k = psd_mean(spec, c.t_k);
        const auto kd = static_cast<double>(k);
        c.bracket = c.t_k * (1 - slack) <= c.ell && c.ell <= c.t_next * (1 + slack);
        c.bracket_strict = c.t_k < c.ell && c.ell < c.t_next;
        c.mean = kd - 1.0 - slack <= c.mean_at_t_k && c.mean_at_t_k <= kd + slack;
        c.mean_strict = kd - 1.0 < c.mean_at_t_k && c.mean_at_t_k < kd;
        all_i = all_i && c.bracket;
        all_ii = all_ii && c.mean;
        rep.criteria.push_back(c);
    }
    rep.criteria_unanimous = (all_i == all_ii) && (all_ii == all_iii) && (all_i == rep.all_pass);
    return rep;
}

[[nodiscard]] inline CrossModalReport cross_modality_scan(const FamilySpec& family, long k_lo,
                                                          long k_hi) {
    detail::require(k_lo >= 0 && k_lo <= k_hi, Errc::invalid_argument,
                    "cross_modality_scan: bad k range");
    return std::visit(
        [&](const auto& fam) -> CrossModalReport {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BinomialN>) {
                return detail::scan_binomial_n(fam, k_lo, k_hi);
            } else if constexpr (std::is_same_v<T, BinomialP>) {
                return detail::scan_binomial_p(fam, k_lo, k_hi);
            } else if constexpr (std::is_same_v<T, PoissonT>) {
                return detail::scan_poisson(k_lo, k_hi);
            } else if constexpr (std::is_same_v<T, PowerSeriesFamily>) {
                std::optional<long> degree;
                if (fam.series.degree) degree = static_cast<long>(*fam.series.degree);
                return detail::scan_mean_matching(
                    [&](double t) { return psd_mean(fam.series, t); },
                    [&](double t) { return psd_pmf(fam.series, t); }, degree, k_lo, k_hi);
            } else if constexpr (std::is_same_v<T, ScaledEBS>) {
                const Profile& base = fam.base;
                std::optional<long> degree;
                if (base.lambda == 0.0)
                    degree = static_cast<long>(std::count_if(
                        base.probs.begin(), base.probs.end(), [](double p) { return p > 0.0; }));
                return detail::scan_mean_matching(
                    [&](double t) { return mean(ebs_scale(base, t)); },
                    [&](double t) { return pmf_dp(ebs_scale(base, t)); }, degree, k_lo, k_hi);
            } else if constexpr (std::is_same_v<T, KaramataStirling>) {
                detail::require(fam.t > 0.0 && fam.n_max >= 1, Errc::invalid_argument,
                                "karamata-stirling scan: need t > 0 and n_max >= 1");
                return detail::scan_rows(detail::karamata_stirling_rows(fam.t, fam.n_max), k_lo,
                                         k_hi, "karamata-stirling scan: n budget exhausted");
            } else {
                detail::require(fam.n_max >= 1 && fam.n_max <= 1000, Errc::invalid_argument,
                                "stirling-2 scan: n_max out of range");
                return detail::scan_rows(detail::stirling_second_rows(fam.n_max), k_lo, k_hi,
                                         "stirling-2 scan: n budget exhausted");
            }
        },
        family);
}

// ---------------------------------------------------------------------------
// Directed sequences

enum class StepKind { raise_probability, add_component, poisson_increment };

struct DirectedReport {
    bool legal = true;
    std::optional<std::size_t> illegal_step; // index of the first offending transition
    std::vector<StepKind> steps;
    CrossModalReport cross_modal;

    [[nodiscard]] bool ok() const { return legal && cross_modal.all_pass; }
};

namespace detail {

inline StepKind classify_step(const Profile& from, const Profile& to) {
    constexpr double tol = 1e-15;
    const auto& a = from.probs;
    const auto& b = to.probs;
    auto same = [](double x, double y) { return std::abs(x - y) <= 1e-15; };
    if (b.size() == a.size() + 1 && same(from.lambda, to.lambda) &&
        std::equal(a.begin(), a.end(), b.begin(), same))
        return StepKind::add_component;
    if (b.size() == a.size()) {
        if (to.lambda > from.lambda + tol && std::equal(a.begin(), a.end(), b.begin(), same))
            return StepKind::poisson_increment;
        if (same(from.lambda, to.lambda)) {
            std::size_t raised = 0, other = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (b[i] > a[i] + tol)
                    ++raised;
                else if (!same(a[i], b[i]))
                    ++other;
            }
            if (raised == 1 && other == 0) return StepKind::raise_probability;
        }
    }
    fail(Errc::invalid_argument, "directed_sequence_check: step is not one of the operations");
}

} // namespace detail

// Legality of each step (raise one p_i, append a component, or raise lambda by at most the
// peak skewness of the predecessor) and cross modality of the resulting finite family.
[[nodiscard]] inline DirectedReport directed_sequence_check(std::vector<Profile> seq) {
    detail::require(!seq.empty(), Errc::invalid_argument, "directed_sequence_check: empty");
    for (const auto& p : seq) {
        p.validate();
        detail::require(p.finitary(), Errc::invalid_argument,
                        "directed_sequence_check: profiles must be finitary");
    }
    if (!(seq.front().lambda == 0.0 && seq.front().probs.empty())) seq.insert(seq.begin(), Profile{});

    DirectedReport rep;
    std::vector<Pmf> pmfs;
    for (const auto& p : seq) pmfs.push_back(pmf_dp(p));
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const StepKind kind = detail::classify_step(seq[i], seq[i + 1]);
        rep.steps.push_back(kind);
        if (kind == StepKind::poisson_increment) {
            const double inc = seq[i + 1].lambda - seq[i].lambda;
            if (inc > peak_skewness(pmfs[i]) + 1e-12 && rep.legal) {
                rep.legal = false;
                rep.illegal_step = i;
            }
        }
    }

    std::vector<std::vector<long double>> rows;
    long top = 0;
    for (const auto& pmf : pmfs) {
        std::vector<long double> row(pmf.shift + pmf.mass.size(), 0.0L);
        for (std::size_t j = 0; j < pmf.mass.size(); ++j) row[pmf.shift + j] = pmf.mass[j];
        rows.push_back(std::move(row));
        top = std::max(top, mode_of(pmf).m_plus);
    }
    // Unlike scan_rows, a maximiser at the last element is fine for a finite chain.
    for (long k = 0; k <= top; ++k) {
        long double best = 0.0L;
        for (const auto& r : rows)
            best = std::max(best, k < static_cast<long>(r.size()) ? r[static_cast<std::size_t>(k)]
                                                                  : 0.0L);
        long lo = -1, hi = -1;
        IntInterval common{0, std::numeric_limits<long>::max()};
        for (std::size_t n = 0; n < rows.size(); ++n) {
            const auto& r = rows[n];
            const long double v = k < static_cast<long>(r.size()) ? r[static_cast<std::size_t>(k)]
                                                                  : 0.0L;
            if (std::abs(v - best) <= 1e-9L * best) {
                if (lo < 0) lo = static_cast<long>(n);
                hi = static_cast<long>(n);
                common = detail::intersect(common, detail::modes_of(pmfs[n]));
            }
        }
        rep.cross_modal.add(
            detail::entry_from(k, static_cast<double>(lo), static_cast<double>(hi), common));
    }
    return rep;
}

} // namespace ebsum

#include <boost/math/special_functions/digamma.hpp>

namespace ebsum {

inline double karamata_stirling_u(long n, double t) {
    return t * (std::log(static_cast<double>(n)) - boost::math::digamma(t));
}

} // namespace ebsum
