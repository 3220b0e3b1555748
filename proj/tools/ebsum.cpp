// ebsum: command-line front end for extended Bernoulli sums.
//
// Exit codes: 0 pass, 1 property failure, 2 parse error, 3 budget exhausted, 4 unsupported.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ebsum/binomial.hpp"
#include "ebsum/darroch.hpp"
#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"
#include "ebsum/families.hpp"
#include "ebsum/io.hpp"
#include "ebsum/modal.hpp"
#include "ebsum/power_series.hpp"
#include "ebsum/suites.hpp"
#include "ebsum/transport.hpp"

namespace {

using namespace ebsum;

enum Exit { ok = 0, property_failure = 1, parse_error = 2, budget = 3, unsupported = 4 };

struct Config {
    std::string profile;
    std::string family;
    std::string p;
    long n = 0;
    double t = 1.0;
    long kmin = 0;
    long kmax = 10;
    long nmax = 200;
    std::string tgrid;
    double eps = default_eps;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t cases = 0;
    long k = 0;
    std::string format = "csv";
    std::string out;
    std::string suite;
};

struct Grid {
    double lo, hi, step;
};

Grid parse_grid(const std::string& text) {
    const auto parts = detail::split(text, ':');
    detail::require(parts.size() == 3, Errc::invalid_argument, "--tgrid expects lo:hi:step");
    Grid g{detail::parse_number(parts[0]), detail::parse_number(parts[1]),
           detail::parse_number(parts[2])};
    detail::require(g.step > 0.0 && g.lo <= g.hi && g.lo >= 0.0, Errc::invalid_argument,
                    "--tgrid: need 0 <= lo <= hi and step > 0");
    detail::require((g.hi - g.lo) / g.step <= 1e6, Errc::invalid_argument, "--tgrid: too many points");
    return g;
}

std::vector<double> grid_points(const Grid& g) {
    std::vector<double> pts;
    const auto count = static_cast<long>(std::floor((g.hi - g.lo) / g.step + 1e-9));
    for (long i = 0; i <= count; ++i) pts.push_back(g.lo + static_cast<double>(i) * g.step);
    return pts;
}

FamilySpec parse_family(const Config& c) {
    const std::string& f = c.family;
    if (f == "binomial-n") {
        detail::require(!c.p.empty(), Errc::invalid_argument, "binomial-n needs --p");
        BinomialN b;
        if (c.p.find('/') != std::string::npos || c.p.find('.') != std::string::npos ||
            c.p.find_first_not_of("0123456789") == std::string::npos) {
            b.exact = parse_rational(c.p);
            b.p = to_double(*b.exact);
        } else {
            b.p = detail::parse_number(c.p);
        }
        return b;
    }
    if (f == "binomial-p") {
        detail::require(c.n >= 1, Errc::invalid_argument, "binomial-p needs --n >= 1");
        return BinomialP{c.n};
    }
    if (f == "poisson") return PoissonT{};
    if (f == "cosh-sqrt") return PowerSeriesFamily{series::cosh_sqrt()};
    if (f == "psd-poisson") return PowerSeriesFamily{series::poisson()};
    if (f == "scaled") {
        detail::require(!c.profile.empty(), Errc::invalid_argument, "scaled needs --profile");
        return ScaledEBS{parse_profile(c.profile)};
    }
    if (f == "ks") return KaramataStirling{c.t, c.nmax};
    if (f == "stirling2") return StirlingSecond{c.nmax};
    if (f.empty()) detail::fail(Errc::invalid_argument, "--family is required");
    detail::fail(Errc::unsupported, "unknown family '" + f + "'");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            detail::require(file_->good(), Errc::invalid_argument, "--out: cannot open file");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// Objects print as JSON, or as a one-row CSV of their scalar fields.
void emit_object(std::ostream& out, const json& j, const std::string& format) {
    if (format == "json") {
        out << j.dump(2) << '\n';
        return;
    }
    std::vector<std::string> keys, values;
    for (const auto& [key, v] : j.items()) {
        if (v.is_structured()) continue;
        keys.push_back(key);
        if (v.is_number_float())
            values.push_back(csv_number(v.get<double>()));
        else if (v.is_boolean())
            values.push_back(v.get<bool>() ? "1" : "0");
        else if (v.is_string())
            values.push_back(v.get<std::string>());
        else
            values.push_back(v.dump());
    }
    CsvWriter w(out, keys);
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) line += (i ? "," : "") + values[i];
    out << line << '\n';
}

int cmd_pmf(const Config& c) {
    const Pmf pmf = pmf_dp(parse_profile(c.profile), c.eps);
    Output o(c.out);
    if (c.format == "json")
        o.stream() << json(pmf).dump(2) << '\n';
    else {
        write_csv(o.stream(), pmf);
        o.stream() << "# trunc_err," << csv_number(pmf.trunc_err) << '\n';
    }
    return ok;
}

int cmd_mode(const Config& c) {
    const Profile profile = parse_profile(c.profile);
    const Pmf pmf = pmf_dp(profile, c.eps);
    const ModeSummary s = mode_of(pmf);
    const MedianInterval med = median_interval(pmf);
    json j = s;
    j["mean"] = mean(profile);
    j["median_lo"] = med.lo;
    j["median_hi"] = med.hi;
    if (!s.twin && !s.degenerate) j["crossing_height"] = crossing_height(pmf);
    Output o(c.out);
    emit_object(o.stream(), j, c.format);
    return ok;
}

int cmd_ridge(const Config& c) {
    const FamilySpec fam = parse_family(c);
    Output o(c.out);
    CsvWriter w(o.stream(), {"param", "m_minus", "m_plus", "peak", "mean", "ell_lo", "ell_hi"});
    if (const auto* b = std::get_if<BinomialN>(&fam)) {
        detail::require(b->exact.has_value(), Errc::invalid_argument,
                        "ridge binomial-n expects a rational --p");
        for (long n = 0; n <= c.nmax; ++n) {
            const IntInterval m = binomial_mode(n, *b->exact);
            const IntInterval ell = likelihood_max_n(m.hi, *b->exact);
            w.row(n, m.lo, m.hi, binomial_pmf(m.hi, n, b->p), static_cast<double>(n) * b->p, ell.lo, ell.hi);
        }
        return ok;
    }
    detail::require(!c.tgrid.empty(), Errc::invalid_argument, "ridge needs --tgrid for this family");
    for (double t : grid_points(parse_grid(c.tgrid))) {
        Pmf pmf;
        double mu = 0.0, ell = 0.0;
        ModeSummary s;
        if (std::holds_alternative<PoissonT>(fam)) {
            pmf = pmf_dp(poisson_profile(t), c.eps);
            mu = t;
            s = mode_of(pmf);
            ell = static_cast<double>(s.m_plus);
        } else if (const auto* ps = std::get_if<PowerSeriesFamily>(&fam)) {
            pmf = psd_pmf(ps->series, t, c.eps);
            mu = psd_mean(ps->series, t);
            s = mode_of(pmf);
            ell = psd_likelihood_max(ps->series, static_cast<std::size_t>(s.m_plus));
        } else {
            detail::fail(Errc::unsupported, "ridge: family not supported");
        }
        w.row(t, s.m_minus, s.m_plus, s.peak, mu, ell, ell);
    }
    return ok;
}

int cmd_scan(const Config& c) {
    const CrossModalReport r = cross_modality_scan(parse_family(c), c.kmin, c.kmax);
    Output o(c.out);
    if (c.format == "json")
        o.stream() << json(r).dump(2) << '\n';
    else
        write_csv(o.stream(), r);
    return r.all_pass ? ok : property_failure;
}

int report_suite(const SuiteResult& r) {
    std::cerr << r.name << ": " << r.cases << " cases, " << r.failures << " failures\n";
    for (const auto& n : r.notes) std::cerr << "  failing case: " << n << '\n';
    return r.ok() ? ok : property_failure;
}

int cmd_check(const Config& c) {
    Output o(c.out);
    auto need_seed = [&c] {
        detail::require(c.seed_given, Errc::invalid_argument, "randomized suites need --seed");
    };
    if (c.suite == "darroch") {
        need_seed();
        const std::size_t cases = c.cases ? c.cases : 10000;
        return report_suite(darroch_suite(c.seed, cases, &o.stream()));
    }
    if (c.suite == "lemma1") {
        need_seed();
        return report_suite(lemma_suite(c.seed, c.cases ? c.cases : 500, &o.stream()));
    }
    if (c.suite == "crossmodal") {
        const FamilySpec fam = parse_family(c);
        const CrossModalReport r = cross_modality_scan(fam, c.kmin, c.kmax);
        write_csv(o.stream(), r);
        SuiteResult s{"crossmodal", 0, 0, {}};
        for (const auto& e : r.entries) s.record(e.pass, "k=" + std::to_string(e.k));
        if (const auto* ps = std::get_if<PowerSeriesFamily>(&fam)) {
            const CrossModalReport pc = psd_cross_modal_check(ps->series, c.kmax);
            s.record(pc.criteria_unanimous, "three criteria disagree");
        }
        return report_suite(s);
    }
    if (c.suite == "transport") {
        if (c.profile.empty()) {
            need_seed();
            return report_suite(transport_grid_suite(c.seed, c.cases ? c.cases : 20, &o.stream()));
        }
        const TransportReport t = transport_report(pmf_dp(parse_profile(c.profile), c.eps));
        json j = t;
        j["two_bernoulli_advantage"] = t.two_bernoulli.has_value();
        o.stream() << j.dump(2) << '\n';
        return t.consistent ? ok : property_failure;
    }
    detail::fail(Errc::unsupported, "unknown suite '" + c.suite + "'");
}

int cmd_transport(const Config& c) {
    const TransportReport t = transport_report(pmf_dp(parse_profile(c.profile), c.eps));
    Output o(c.out);
    emit_object(o.stream(), json(t), c.format);
    return t.consistent ? ok : property_failure;
}

int cmd_bounds(const Config& c) {
    Output o(c.out);
    if (!c.profile.empty()) {
        const Profile p = parse_profile(c.profile);
        json j{{"darroch", darroch_check(p)}};
        bool pass = j["darroch"]["pass"].get<bool>();
        if (p.lambda == 0.0 && p.finitary()) {
            const DarrochVerdict r = region_classify(p);
            j["region"] = r;
            pass = pass && r.pass;
        }
        o.stream() << j.dump(2) << '\n';
        return pass ? ok : property_failure;
    }
    const FinitaryBounds b = finitary_bounds(c.k, c.n);
    json j{{"k", c.k},
           {"n", c.n},
           {"min_mu", b.min_mu},
           {"max_mu", b.max_mu},
           {"argmin", b.argmin},
           {"argmax", b.argmax},
           {"residual_min", b.residual_min},
           {"residual_max", b.residual_max}};
    if (c.k < c.n) j["mean_section_vertices"] = me_extremal_simplex(c.k, c.n);
    emit_object(o.stream(), j, c.format);
    return b.residual_min <= 1e-10 && b.residual_max <= 1e-10 ? ok : property_failure;
}

int exit_for(const Error& e) {
    switch (e.code()) {
    case Errc::invalid_argument: return parse_error;
    case Errc::budget_exhausted: return budget;
    case Errc::unsupported: return unsupported;
    case Errc::undefined:
    case Errc::contract_violation: return property_failure;
    }
    return property_failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extended Bernoulli sums: PMFs, modes, cross modality, Darroch rule, mode transport"};
    app.require_subcommand(1);
    Config c;
    if (const char* env = std::getenv("EBSUM_EPS")) {
        try {
            c.eps = detail::parse_number(env);
        } catch (const Error& e) {
            std::cerr << "EBSUM_EPS: " << e.what() << '\n';
            return parse_error;
        }
    }

    auto common = [&c](CLI::App* sub) {
        sub->add_option("--eps", c.eps, "truncation budget (default 1e-12, env EBSUM_EPS)");
        sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", c.out, "output file (default stdout)");
    };
    auto profile_opt = [&c](CLI::App* sub) {
        return sub->add_option("--profile", c.profile,
                               "inline JSON, @file, binomial:n:p, poisson:t, ks:t:n or cosh:terms");
    };
    auto family_opts = [&c](CLI::App* sub) {
        sub->add_option("--family", c.family,
                        "binomial-n, binomial-p, poisson, cosh-sqrt, psd-poisson, scaled, ks, stirling2");
        sub->add_option("--p", c.p, "success probability (a/b for exact arithmetic)");
        sub->add_option("--n", c.n, "number of trials");
        sub->add_option("--t", c.t, "family parameter t");
        sub->add_option("--kmin", c.kmin, "first k");
        sub->add_option("--kmax", c.kmax, "last k");
        sub->add_option("--nmax", c.nmax, "largest n");
        sub->add_option("--tgrid", c.tgrid, "lo:hi:step");
    };

    auto* pmf = app.add_subcommand("pmf", "probability function of a profile");
    common(pmf);
    profile_opt(pmf)->required();
    auto* mode = app.add_subcommand("mode", "modes, peak, skewness and median");
    common(mode);
    profile_opt(mode)->required();
    auto* ridge = app.add_subcommand("ridge", "modal ridge of a family");
    common(ridge);
    family_opts(ridge);
    auto* scan = app.add_subcommand("scan", "cross-modality scan of a family");
    common(scan);
    family_opts(scan);
    profile_opt(scan);
    auto* check = app.add_subcommand("check", "property suites: darroch, crossmodal, transport, lemma1");
    common(check);
    family_opts(check);
    profile_opt(check);
    check->add_option("suite", c.suite, "suite name")->required();
    check->add_option("--seed", c.seed, "seed for randomized suites")->each([&c](const std::string&) {
        c.seed_given = true;
    });
    check->add_option("--cases", c.cases, "number of random cases");
    auto* transport = app.add_subcommand("transport", "cheapest deformations that move the mode");
    common(transport);
    profile_opt(transport)->required();
    auto* bounds = app.add_subcommand("bounds", "finitary mean bounds, or Darroch verdict of a profile");
    common(bounds);
    profile_opt(bounds);
    bounds->add_option("--k", c.k, "mode index");
    bounds->add_option("--n", c.n, "number of components");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : parse_error;
    }

    try {
        if (*pmf) return cmd_pmf(c);
        if (*mode) return cmd_mode(c);
        if (*ridge) return cmd_ridge(c);
        if (*scan) return cmd_scan(c);
        if (*check) return cmd_check(c);
        if (*transport) return cmd_transport(c);
        if (*bounds) return cmd_bounds(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_for(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse_error;
    }
    return parse_error;
}
