#include "qline/report.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qline::report {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

const char* verdict_name(smoothness::Verdict v) {
    switch (v) {
        case smoothness::Verdict::Smooth: return "smooth";
        case smoothness::Verdict::NotSmooth: return "not_smooth";
        default: return "inconclusive";
    }
}

const char* verdict_name(certify::CertVerdict v) {
    switch (v) {
        case certify::CertVerdict::Certified: return "certified";
        case certify::CertVerdict::Refuted: return "refuted";
        default: return "inconclusive";
    }
}

}  // namespace

std::optional<RunConfig> parse_config_text(const std::string& text, ConfigError* error) {
    static const std::set<std::string> known = {
        "c1", "c2", "c3", "c4", "c5", "c6", "d1",     "d2",     "d3",
        "seed", "tol_b", "tol_mu", "tol_r", "tol_eq", "tol_line"};
    std::map<std::string, double> values;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string entry = trim(raw);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            if (error) error->message = "line " + std::to_string(lineno) + ": expected key = value";
            return std::nullopt;
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string val = trim(entry.substr(eq + 1));
        if (!known.count(key)) {
            if (error) error->message = "unknown key '" + key + "'";
            return std::nullopt;
        }
        if (values.count(key)) {
            if (error) error->message = "duplicate key '" + key + "'";
            return std::nullopt;
        }
        try {
            std::size_t used = 0;
            values[key] = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            if (error) error->message = "key '" + key + "': cannot parse value '" + val + "'";
            return std::nullopt;
        }
    }

    RunConfig cfg;
    const char* cs[] = {"c1", "c2", "c3", "c4", "c5", "c6"};
    const char* ds[] = {"d1", "d2", "d3"};
    for (int i = 0; i < 6; ++i) {
        if (!values.count(cs[i])) {
            if (error) error->message = std::string("missing key '") + cs[i] + "'";
            return std::nullopt;
        }
        cfg.params.c[i] = values[cs[i]];
    }
    for (int j = 0; j < 3; ++j) {
        if (!values.count(ds[j])) {
            if (error) error->message = std::string("missing key '") + ds[j] + "'";
            return std::nullopt;
        }
        cfg.params.d[j] = values[ds[j]];
    }
    if (values.count("seed")) cfg.seed = static_cast<std::uint64_t>(values["seed"]);
    auto positive = [&](const char* key, double* slot) -> bool {
        if (!values.count(key)) return true;
        if (!(values[key] > 0.0)) {
            if (error) error->message = std::string("key '") + key + "' must be positive";
            return false;
        }
        *slot = values[key];
        return true;
    };
    if (!positive("tol_b", &cfg.tolerances.tau_b)) return std::nullopt;
    if (!positive("tol_mu", &cfg.tolerances.tau_mu)) return std::nullopt;
    if (!positive("tol_r", &cfg.tolerances.tau_r)) return std::nullopt;
    if (!positive("tol_eq", &cfg.tolerances.tau_eq)) return std::nullopt;
    if (!positive("tol_line", &cfg.tolerances.line_residual)) return std::nullopt;
    return cfg;
}

std::optional<RunConfig> load_config_file(const std::string& path, ConfigError* error) {
    std::ifstream in(path);
    if (!in) {
        if (error) error->message = "cannot open config file '" + path + "'";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), error);
}

Json to_json(const numerics::Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

numerics::Complex complex_from_json(const Json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

Json to_json(const quadrics::QuadricParams& p) {
    return Json{{"c", p.c}, {"d", p.d}};
}

quadrics::QuadricParams params_from_json(const Json& j) {
    quadrics::QuadricParams p;
    for (int i = 0; i < 6; ++i) p.c[i] = j.at("c").at(i).get<double>();
    for (int i = 0; i < 3; ++i) p.d[i] = j.at("d").at(i).get<double>();
    return p;
}

Json to_json(const smoothness::BSolution& s) {
    return Json{{"b", to_json(s.b)}, {"a", to_json(s.a)},
                {"equation_residuals", s.equation_residuals}};
}

Json to_json(const smoothness::SmoothnessReport& rep) {
    Json j;
    j["real"] = Json{{"verdict", verdict_name(rep.real_smooth)},
                     {"condition_a", rep.real_condition_a},
                     {"possibly_empty", rep.real_possibly_empty},
                     {"reason", rep.real_reason}};
    j["complex"] = Json{{"verdict", verdict_name(rep.complex_smooth)},
                        {"condition_a", rep.complex_condition_a},
                        {"reason", rep.complex_reason}};
    j["witnesses"] = Json::array();
    for (const auto& w : rep.witnesses) j["witnesses"].push_back(to_json(w));
    j["degenerate_points"] = Json::array();
    for (const auto& x : rep.degenerate_points) {
        Json pt = Json::array();
        for (const auto& xi : x) pt.push_back(to_json(xi));
        j["degenerate_points"].push_back(pt);
    }
    j["projective_charts"] = Json::array();
    for (const auto& chart : rep.projective) {
        Json cj{{"chart", chart.chart},
                {"verdict", chart.sampled_smooth ? "sampled_smooth" : "singular_witness_found"},
                {"points_sampled", chart.points_sampled},
                {"min_rank_ratio", chart.min_rank_ratio}};
        j["projective_charts"].push_back(cj);
    }
    return j;
}

Json to_json(const line::ComplexLine& l, const quadrics::QuadricParams& params) {
    Json j;
    j["a"] = Json::array();
    j["b"] = Json::array();
    for (int k = 0; k < 3; ++k) {
        j["a"].push_back(to_json(l.a[k]));
        j["b"].push_back(to_json(l.b[k]));
    }
    j["lambda"] = to_json(l.lambda);
    j["mu"] = to_json(l.mu);
    j["branch"] = l.branch;
    j["scale_s"] = to_json(l.scale_s);
    const auto res = line::line_residuals(params, l);
    j["residuals"] = Json::array();
    for (const auto& r : res) j["residuals"].push_back(to_json(r));
    j["max_residual_scaled"] = l.max_line_residual;
    j["mu_equation"] = Json{{"radical_form_residual", l.radical_equation_residual},
                            {"determinant_form_residual", l.determinant_equation_residual}};
    j["flags"] = Json{{"mu_not_pm_lambda", l.mu_not_pm_lambda},
                      {"all_b_nonzero", l.all_b_nonzero},
                      {"all_a_real", l.all_a_real}};
    return j;
}

line::ComplexLine line_from_json(const Json& j) {
    line::ComplexLine l;
    for (int k = 0; k < 3; ++k) {
        l.a[k] = complex_from_json(j.at("a").at(k));
        l.b[k] = complex_from_json(j.at("b").at(k));
    }
    l.lambda = complex_from_json(j.at("lambda"));
    l.mu = complex_from_json(j.at("mu"));
    for (int k = 0; k < 3; ++k) l.branch[k] = j.at("branch").at(k).get<int>();
    l.scale_s = complex_from_json(j.at("scale_s"));
    l.max_line_residual = j.at("max_residual_scaled").get<double>();
    l.radical_equation_residual = j.at("mu_equation").at("radical_form_residual").get<double>();
    l.determinant_equation_residual =
        j.at("mu_equation").at("determinant_form_residual").get<double>();
    l.mu_not_pm_lambda = j.at("flags").at("mu_not_pm_lambda").get<bool>();
    l.all_b_nonzero = j.at("flags").at("all_b_nonzero").get<bool>();
    l.all_a_real = j.at("flags").at("all_a_real").get<bool>();
    return l;
}

Json to_json(const line::StageReport& stages) {
    return Json{{"lambda_solved", stages.lambda_solved},
                {"mu_candidates", stages.mu_candidates},
                {"b_assembled", stages.b_assembled},
                {"a_recovered", stages.a_recovered},
                {"residual_passed", stages.residual_passed},
                {"note", stages.note}};
}

Json to_json(const certify::RealnessCertificate& cert) {
    return Json{{"hypotheses", cert.hypotheses},
                {"oracle_min", cert.oracle_min},
                {"oracle_argmin", to_json(cert.oracle_argmin)},
                {"verdict", verdict_name(cert.verdict)},
                {"note", cert.note}};
}

Json to_json(const scan::SearchSpec& spec) {
    Json ranges = Json::array();
    for (const auto& r : spec.c_ranges) ranges.push_back(Json::array({r.lo, r.hi}));
    Json dranges = Json::array();
    for (const auto& r : spec.d_ranges) dranges.push_back(Json::array({r.lo, r.hi}));
    const char* strategy = spec.strategy == scan::SearchStrategy::Grid ? "grid"
                           : spec.strategy == scan::SearchStrategy::UniformRandom
                               ? "uniform-random"
                               : "coordinate-refine";
    const char* integ = spec.integrability == scan::IntegrabilityFilter::Either ? "either"
                        : spec.integrability == scan::IntegrabilityFilter::IntegrableOnly
                            ? "integrable"
                            : "non-integrable";
    return Json{{"c_ranges", ranges},
                {"d_ranges", dranges},
                {"strategy", strategy},
                {"budget", spec.budget},
                {"seed", spec.seed},
                {"require_real_smooth", spec.require_real_smooth},
                {"require_complex_smooth", spec.require_complex_smooth},
                {"integrability", integ},
                {"max_results", spec.max_results}};
}

Json to_json(const scan::SearchResult& result, const scan::SearchSpec& spec,
             const quadrics::QuadricParams*) {
    Json j;
    j["spec"] = to_json(spec);
    j["found"] = Json::array();
    for (const auto& inst : result.found) {
        Json e;
        e["params"] = to_json(inst.params);
        e["integrability_indicator"] = inst.integrability;
        e["line"] = to_json(inst.line, inst.params);
        e["certificate"] = to_json(inst.certificate);
        j["found"].push_back(e);
    }
    j["stats"] = Json{{"evaluated", result.evaluated}, {"rejections", result.rejections}};
    j["budget_exhausted"] = result.budget_exhausted;
    return j;
}

Json to_json(const scan::IntersectionReport& rep) {
    Json j;
    j["coverage"] = rep.coverage;
    j["heuristic"] = rep.heuristic;
    j["any_real_point_on_intersecting_line"] = rep.any_real_point_on_intersecting_line;
    j["samples"] = Json::array();
    for (const auto& s : rep.samples) {
        Json sj;
        sj["t"] = to_json(s.t);
        Json pt = Json::array();
        for (const auto& x : s.point) pt.push_back(to_json(x));
        sj["point"] = pt;
        sj["directions"] = Json::array();
        for (std::size_t i = 0; i < s.directions.size(); ++i) {
            const auto& dir = s.directions[i];
            Json dj;
            Json vv = Json::array();
            for (const auto& x : dir.v) vv.push_back(to_json(x));
            dj["v"] = vv;
            dj["membership_residual"] = dir.membership_residual;
            dj["is_base_direction"] = dir.is_base_direction;
            if (i < s.certificates.size()) dj["certificate"] = to_json(s.certificates[i]);
            sj["directions"].push_back(dj);
        }
        j["samples"].push_back(sj);
    }
    return j;
}

Json document(const std::string& command, Json payload) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = command;
    j.update(payload);
    return j;
}

}  // namespace qline::report
