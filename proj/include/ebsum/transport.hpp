#pragma once

// Mode transport: the cheapest independent nonnegative Z (in mean) such that S + Z
// balances f(m) = f(m+1) at the leading mode m of S, after which any further mass
// moves the leading mode to m + 1.
//
// Signs. With forward differences Df(k) = f(k+1) - f(k) the library uses
//   C = f(m) - f(m+1) = -Df(m)            > 0 at a strict mode,
//   B = f(m+1) - 2f(m) + f(m-1) = D2f(m-1) < 0,
//   A = -D3f(m-2),
// so that adding Bernoulli(a1) and Bernoulli(a2) gives the balance
//   C + (a1 + a2) B + a1 a2 A = 0,
// the peak skewness is -C/B, and A < 0 is the condition for two Bernoulli terms to
// beat one. A two-point Z with P[Z = s] = delta balances at
//   delta(s) = C / (C + Df(m-s)).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"
#include "ebsum/modal.hpp"

namespace ebsum {

struct AbcCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    long mode = 0;
};

enum class PlanKind { two_point, one_bernoulli, two_bernoulli, poisson };

[[nodiscard]] inline const char* to_string(PlanKind k) {
    switch (k) {
    case PlanKind::two_point: return "two-point";
    case PlanKind::one_bernoulli: return "one-bernoulli";
    case PlanKind::two_bernoulli: return "two-bernoulli";
    case PlanKind::poisson: return "poisson";
    }
    return "?";
}

struct TransportPlan {
    PlanKind kind = PlanKind::two_point;
    long s = 0;          // two-point
    double delta = 0.0;  // two-point
    double gamma = 0.0;  // one-bernoulli
    double alpha1 = 0.0; // two-bernoulli
    double alpha2 = 0.0;
    double rate = 0.0;   // poisson
    double cost = 0.0;
    long mode = 0;       // leading mode of the input
    double balance_residual = 0.0;
    bool already_balanced = false;
};

[[nodiscard]] inline AbcCoefficients abc_coefficients(const Pmf& pmf) {
    const ModeSummary s = mode_of(pmf);
    if (s.twin) detail::fail(Errc::undefined, "abc_coefficients: twin mode is already balanced");
    const long m = s.m_plus;
    const double f2 = pmf.at(m - 2), f1 = pmf.at(m - 1), f0 = pmf.at(m), g = pmf.at(m + 1);
    AbcCoefficients r;
    r.mode = m;
    r.c = f0 - g;
    r.b = g - 2.0 * f0 + f1;
    r.a = -(g - 3.0 * f0 + 3.0 * f1 - f2);
    return r;
}

// Law of S + Z for the plan's Z.
[[nodiscard]] inline Pmf apply_plan(const Pmf& pmf, const TransportPlan& plan) {
    switch (plan.kind) {
    case PlanKind::one_bernoulli: return add_bernoulli(pmf, plan.gamma);
    case PlanKind::two_bernoulli: return add_bernoulli(add_bernoulli(pmf, plan.alpha1), plan.alpha2);
    case PlanKind::two_point: {
        Pmf out = pmf;
        const auto s = static_cast<std::size_t>(plan.s);
        out.mass.resize(pmf.mass.size() + s, 0.0);
        for (std::size_t j = 0; j < out.mass.size(); ++j)
            out.mass[j] = (1.0 - plan.delta) * (j < pmf.mass.size() ? pmf.mass[j] : 0.0) +
                          plan.delta * (j >= s ? pmf.mass[j - s] : 0.0);
        return out;
    }
    case PlanKind::poisson: {
        const PoissonWindow w = poisson_window(plan.rate, 1e-15);
        Pmf out;
        out.shift = pmf.shift;
        out.trunc_err = pmf.trunc_err + w.tail;
        out.mass.assign(pmf.mass.size() + w.mass.size() - 1, 0.0);
        for (std::size_t i = 0; i < pmf.mass.size(); ++i)
            for (std::size_t j = 0; j < w.mass.size(); ++j) out.mass[i + j] += pmf.mass[i] * w.mass[j];
        return out;
    }
    }
    detail::fail(Errc::contract_violation, "apply_plan: unknown plan kind");
}

namespace detail {

inline double balance_residual(const Pmf& deformed, long m) {
    const double a = deformed.at(m), b = deformed.at(m + 1);
    return std::abs(a - b) / std::max(a, b);
}

inline TransportPlan balanced_plan(PlanKind kind, long m) {
    TransportPlan p;
    p.kind = kind;
    p.mode = m;
    p.already_balanced = true;
    return p;
}

inline TransportPlan finish(const Pmf& pmf, TransportPlan plan) {
    plan.balance_residual = balance_residual(apply_plan(pmf, plan), plan.mode);
    return plan;
}

} // namespace detail

[[nodiscard]] inline double delta_for_shift(const Pmf& pmf, long s) {
    const ModeSummary ms = mode_of(pmf);
    if (ms.twin) return 0.0;
    const long m = ms.m_plus;
    detail::require(s >= 1 && s <= m + 1, Errc::invalid_argument,
                    "delta_for_shift: s must lie in [1, m+1]");
    const double c = pmf.at(m) - pmf.at(m + 1);
    const double rise = pmf.at(m - s + 1) - pmf.at(m - s);
    return c / (c + rise);
}

[[nodiscard]] inline TransportPlan two_point_plan(const Pmf& pmf, long s) {
    const ModeSummary ms = mode_of(pmf);
    if (ms.twin) return detail::balanced_plan(PlanKind::two_point, ms.m_plus);
    TransportPlan p;
    p.kind = PlanKind::two_point;
    p.mode = ms.m_plus;
    p.s = s;
    p.delta = delta_for_shift(pmf, s);
    p.cost = static_cast<double>(s) * p.delta;
    return detail::finish(pmf, p);
}

// Minimises s delta(s) over s = 1..m+1; ties go to the smaller s.
[[nodiscard]] inline TransportPlan optimal_two_point(const Pmf& pmf) {
    const ModeSummary ms = mode_of(pmf);
    if (ms.twin) return detail::balanced_plan(PlanKind::two_point, ms.m_plus);
    TransportPlan best = two_point_plan(pmf, 1);
    for (long s = 2; s <= ms.m_plus + 1; ++s) {
        TransportPlan p = two_point_plan(pmf, s);
        if (p.cost < best.cost) best = p;
    }
    return best;
}

[[nodiscard]] inline TransportPlan one_bernoulli_plan(const Pmf& pmf) {
    const ModeSummary ms = mode_of(pmf);
    if (ms.twin) return detail::balanced_plan(PlanKind::one_bernoulli, ms.m_plus);
    TransportPlan p;
    p.kind = PlanKind::one_bernoulli;
    p.mode = ms.m_plus;
    p.gamma = delta_for_shift(pmf, 1);
    p.cost = p.gamma;
    return detail::finish(pmf, p);
}

// Equal-parameter solution of C + 2 B a + A a^2 = 0, in the cancellation-free form
// a = C / (-B + sqrt(B^2 - A C)).
[[nodiscard]] inline TransportPlan two_bernoulli_plan(const Pmf& pmf) {
    const ModeSummary ms = mode_of(pmf);
    if (ms.twin) return detail::balanced_plan(PlanKind::two_bernoulli, ms.m_plus);
    const AbcCoefficients k = abc_coefficients(pmf);
    if (!(k.a < 0.0)) detail::fail(Errc::unsupported, "no two-Bernoulli improvement (A >= 0)");
    const double alpha = k.c / (-k.b + std::sqrt(k.b * k.b - k.a * k.c));
    detail::require(alpha > 0.0 && alpha < 1.0, Errc::contract_violation,
                    "two_bernoulli_plan: alpha outside (0,1)");
    TransportPlan p;
    p.kind = PlanKind::two_bernoulli;
    p.mode = k.mode;
    p.alpha1 = p.alpha2 = alpha;
    p.cost = 2.0 * alpha;
    p = detail::finish(pmf, p);
    // Same residual from the expansion f - (a1 + a2) Df + a1 a2 D2f, no convolution.
    const double expanded = k.c + 2.0 * alpha * k.b + alpha * alpha * k.a;
    detail::require(std::abs(expanded) <= 1e-9 * pmf.at(k.mode), Errc::contract_violation,
                    "two_bernoulli_plan: expansion and convolution disagree");
    return p;
}

// Poisson(t) with m = floor(t): the Bernoulli that balances it has
// gamma = ((m+1)t - t^2) / (2(m+1)t - t^2 - m(m+1)), cheaper than raising the rate to m+1.
[[nodiscard]] inline TransportPlan poisson_break(double t) {
    detail::require(t > 0.0 && std::isfinite(t), Errc::invalid_argument,
                    "poisson_break: t must be positive");
    const double md = std::floor(t);
    const auto m = static_cast<long>(md);
    if (t == md) return detail::balanced_plan(PlanKind::one_bernoulli, m);
    TransportPlan p;
    p.kind = PlanKind::one_bernoulli;
    p.mode = m;
    p.gamma = ((md + 1.0) * t - t * t) / (2.0 * (md + 1.0) * t - t * t - md * (md + 1.0));
    p.cost = p.gamma;
    detail::require(p.gamma < md + 1.0 - t, Errc::contract_violation,
                    "poisson_break: Bernoulli is not cheaper than the rate increase");
    return detail::finish(pmf_dp(poisson_profile(t)), p);
}

// Raising the Poisson rate from t to floor(t) + 1.
[[nodiscard]] inline TransportPlan poisson_rate_plan(double t) {
    detail::require(t > 0.0 && std::isfinite(t), Errc::invalid_argument,
                    "poisson_rate_plan: t must be positive");
    const double md = std::floor(t);
    const auto m = static_cast<long>(md);
    if (t == md) return detail::balanced_plan(PlanKind::poisson, m);
    TransportPlan p;
    p.kind = PlanKind::poisson;
    p.mode = m;
    p.rate = md + 1.0 - t;
    p.cost = p.rate;
    return detail::finish(pmf_dp(poisson_profile(t)), p);
}

} // namespace ebsum
