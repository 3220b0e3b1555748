#pragma once

// JSON and CSV serialisation, plus the compact profile notation used by the CLI:
//   {"lambda": 0, "probs": [...], "tail_mass": 0}   inline JSON
//   @path                                             JSON file
//   binomial:n:p   poisson:t   ks:t:n   cosh:terms    generated profiles

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ebsum/darroch.hpp"
#include "ebsum/ebs_core.hpp"
#include "ebsum/error.hpp"
#include "ebsum/families.hpp"
#include "ebsum/modal.hpp"
#include "ebsum/transport.hpp"

namespace ebsum {

using json = nlohmann::json;

inline void to_json(json& j, const Profile& p) {
    j = json{{"lambda", p.lambda}, {"probs", p.probs}, {"tail_mass", p.tail_mass}};
}

inline void from_json(const json& j, Profile& p) {
    detail::require(j.is_object(), Errc::invalid_argument, "profile: expected a JSON object");
    p = Profile{};
    if (j.contains("lambda")) j.at("lambda").get_to(p.lambda);
    if (j.contains("probs")) j.at("probs").get_to(p.probs);
    if (j.contains("tail_mass")) j.at("tail_mass").get_to(p.tail_mass);
    p.validate();
}

inline void to_json(json& j, const Pmf& p) {
    j = json{{"shift", p.shift}, {"mass", p.mass}, {"trunc_err", p.trunc_err}};
}

inline void from_json(const json& j, Pmf& p) {
    j.at("shift").get_to(p.shift);
    j.at("mass").get_to(p.mass);
    p.trunc_err = j.value("trunc_err", 0.0);
}

inline void to_json(json& j, const ModeSummary& s) {
    j = json{{"m_minus", s.m_minus}, {"m_plus", s.m_plus}, {"peak", s.peak},
             {"twin", s.twin},       {"skewness", s.skewness}};
    if (s.degenerate) j["degenerate"] = true;
}

inline void to_json(json& j, const CrossModalEntry& e) {
    j = json{{"k", e.k},       {"ell_lo", e.ell_lo}, {"ell_hi", e.ell_hi},
             {"m_lo", e.m_lo}, {"m_hi", e.m_hi},     {"pass", e.pass}};
}

inline void to_json(json& j, const PsdCriteria& c) {
    j = json{{"k", c.k},
             {"t_k", c.t_k},
             {"t_next", c.t_next},
             {"ell", c.ell},
             {"mean_at_t_k", c.mean_at_t_k},
             {"bracket", c.bracket},
             {"bracket_strict", c.bracket_strict},
             {"mean", c.mean},
             {"mean_strict", c.mean_strict},
             {"sup_gap", c.sup_gap}};
}

inline void to_json(json& j, const CrossModalReport& r) {
    j = json{{"entries", r.entries}, {"all_pass", r.all_pass}};
    if (!r.criteria.empty()) {
        j["criteria"] = r.criteria;
        j["criteria_unanimous"] = r.criteria_unanimous;
    }
}

inline void to_json(json& j, const DarrochVerdict& v) {
    j = json{{"mu", v.mu},
             {"m_minus", v.m_minus},
             {"m_plus", v.m_plus},
             {"classification", to_string(v.classification)},
             {"pass", v.pass}};
    if (!v.detail.empty()) j["detail"] = v.detail;
}

inline void to_json(json& j, const TransportPlan& p) {
    j = json{{"kind", to_string(p.kind)},
             {"cost", p.cost},
             {"mode", p.mode},
             {"balance_residual", p.balance_residual},
             {"already_balanced", p.already_balanced}};
    switch (p.kind) {
    case PlanKind::two_point:
        j["s"] = p.s;
        j["delta"] = p.delta;
        break;
    case PlanKind::one_bernoulli: j["gamma"] = p.gamma; break;
    case PlanKind::two_bernoulli:
        j["alpha1"] = p.alpha1;
        j["alpha2"] = p.alpha2;
        break;
    case PlanKind::poisson: j["rate"] = p.rate; break;
    }
}

inline std::string rational_text(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline void to_json(json& j, const FamilySpec& f) {
    std::visit(
        [&j](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BinomialN>) {
                j = json{{"family", "binomial-n"}, {"p", fam.p}};
                if (fam.exact) j["p_exact"] = rational_text(*fam.exact);
            } else if constexpr (std::is_same_v<T, BinomialP>) {
                j = json{{"family", "binomial-p"}, {"n", fam.n}};
            } else if constexpr (std::is_same_v<T, PoissonT>) {
                j = json{{"family", "poisson"}};
            } else if constexpr (std::is_same_v<T, PowerSeriesFamily>) {
                j = json{{"family", "power-series"}, {"series", fam.series.name}};
                if (fam.series.degree) j["degree"] = *fam.series.degree;
            } else if constexpr (std::is_same_v<T, ScaledEBS>) {
                j = json{{"family", "scaled-ebs"}, {"base", fam.base}};
            } else if constexpr (std::is_same_v<T, KaramataStirling>) {
                j = json{{"family", "karamata-stirling"}, {"t", fam.t}, {"n_max", fam.n_max}};
            } else {
                j = json{{"family", "stirling-2"}, {"n_max", fam.n_max}};
            }
        },
        f);
}

inline void from_json(const json& j, FamilySpec& f) {
    const std::string name = j.at("family").get<std::string>();
    if (name == "binomial-n") {
        BinomialN b;
        if (j.contains("p_exact")) {
            b.exact = parse_rational(j.at("p_exact").get<std::string>());
            b.p = to_double(*b.exact);
        } else {
            b.p = j.at("p").get<double>();
        }
        f = b;
    } else if (name == "binomial-p") {
        f = BinomialP{j.at("n").get<long>()};
    } else if (name == "poisson") {
        f = PoissonT{};
    } else if (name == "power-series") {
        const std::string s = j.at("series").get<std::string>();
        if (s == "poisson")
            f = PowerSeriesFamily{series::poisson()};
        else if (s == "cosh-sqrt")
            f = PowerSeriesFamily{series::cosh_sqrt()};
        else if (s == "binomial")
            f = PowerSeriesFamily{series::binomial(j.at("degree").get<std::size_t>())};
        else
            detail::fail(Errc::unsupported, "family: unknown power series '" + s + "'");
    } else if (name == "scaled-ebs") {
        f = ScaledEBS{j.at("base").get<Profile>()};
    } else if (name == "karamata-stirling") {
        f = KaramataStirling{j.at("t").get<double>(), j.value("n_max", 200L)};
    } else if (name == "stirling-2") {
        f = StirlingSecond{j.value("n_max", 200L)};
    } else {
        detail::fail(Errc::unsupported, "family: unknown family '" + name + "'");
    }
}

// ---------------------------------------------------------------------------
// Profile notation

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

inline double parse_number(std::string_view s) {
    const std::string text(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        if (text.find('/') != std::string::npos) return to_double(parse_rational(text));
        v = std::stod(text, &used);
    } catch (const std::logic_error&) {
        fail(Errc::invalid_argument, "not a number: '" + text + "'");
    }
    require(used == text.size(), Errc::invalid_argument, "trailing characters in number");
    return v;
}

inline long parse_integer(std::string_view s) {
    const double v = parse_number(s);
    require(v == std::floor(v) && std::abs(v) < 1e15, Errc::invalid_argument,
            "expected an integer");
    return static_cast<long>(v);
}

} // namespace detail

[[nodiscard]] inline Profile parse_profile(std::string_view text) {
    if (!text.empty() && text.front() == '@') {
        std::ifstream in{std::string(text.substr(1))};
        detail::require(in.good(), Errc::invalid_argument, "profile: cannot open file");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_profile(buf.str());
    }
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            detail::fail(Errc::invalid_argument, std::string("profile: malformed JSON: ") + e.what());
        }
        try {
            return j.get<Profile>();
        } catch (const json::exception& e) {
            detail::fail(Errc::invalid_argument, std::string("profile: ") + e.what());
        }
    }
    const auto parts = detail::split(text, ':');
    const std::string_view kind = parts.front();
    if (kind == "binomial" && parts.size() == 3)
        return binomial_profile(static_cast<std::size_t>(detail::parse_integer(parts[1])),
                                detail::parse_number(parts[2]));
    if (kind == "poisson" && parts.size() == 2) return poisson_profile(detail::parse_number(parts[1]));
    if (kind == "ks" && parts.size() == 3)
        return karamata_stirling_profile(detail::parse_number(parts[1]),
                                         detail::parse_integer(parts[2]));
    if (kind == "cosh" && parts.size() == 2)
        return cosh_sqrt_profile(static_cast<std::size_t>(detail::parse_integer(parts[1])));
    detail::fail(Errc::invalid_argument, "profile: unrecognised notation '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// CSV

[[nodiscard]] inline std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
        write(header);
    }

    template <class... Ts>
    void row(const Ts&... fields) {
        std::vector<std::string> cells{cell(fields)...};
        write(cells);
    }

private:
    static std::string cell(double x) { return csv_number(x); }
    static std::string cell(bool b) { return b ? "1" : "0"; }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
        requires std::is_integral_v<T>
    static std::string cell(T v) { return std::to_string(v); }

    void write(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

    std::ostream& out_;
};

inline void write_csv(std::ostream& out, const Pmf& pmf) {
    CsvWriter w(out, {"k", "mass"});
    for (long k = pmf.first(); k <= pmf.last(); ++k) w.row(k, pmf.at(k));
}

inline void write_csv(std::ostream& out, const CrossModalReport& r) {
    CsvWriter w(out, {"k", "ell_lo", "ell_hi", "m_lo", "m_hi", "pass"});
    for (const auto& e : r.entries) w.row(e.k, e.ell_lo, e.ell_hi, e.m_lo, e.m_hi, e.pass);
}

} // namespace ebsum
