// qline: smoothness analysis, explicit complex lines and realness
// certificates for the intersection of three quadrics in six variables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qline/report.hpp"

namespace {

using qline::Tolerances;
using qline::certify::CertVerdict;
using qline::quadrics::QuadricParams;
using qline::report::Json;
using qline::report::RunConfig;

constexpr int kExitSmooth = 0;
constexpr int kExitNotSmooth = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;

struct CommonArgs {
    std::string config_path;
    std::vector<double> c_inline;
    std::vector<double> d_inline;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string json_path;
    double tol_b = -1, tol_mu = -1, tol_r = -1, tol_eq = -1, tol_line = -1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path, "config file with c1..c6, d1..d3 keys");
    cmd->add_option("--c", args->c_inline, "the six coefficients of f3 (repeat or comma list)")
        ->delimiter(',');
    cmd->add_option("--d", args->d_inline, "the three level values (repeat or comma list)")
        ->delimiter(',');
    cmd->add_option("--seed", args->seed, "seed for every sampling step")
        ->each([args](const std::string&) { args->seed_set = true; });
    cmd->add_option("--json", args->json_path, "write the machine-readable report here");
    cmd->add_option("--tol-b", args->tol_b, "b-system residual tolerance");
    cmd->add_option("--tol-mu", args->tol_mu, "mu-equation residual tolerance");
    cmd->add_option("--tol-r", args->tol_r, "realness oracle threshold");
    cmd->add_option("--tol-eq", args->tol_eq, "equality test tolerance");
    cmd->add_option("--tol-line", args->tol_line, "line membership tolerance");
}

// merges config file and inline flags; inline values win
std::optional<RunConfig> resolve_config(const CommonArgs& args, std::string* error) {
    RunConfig cfg;
    bool have_params = false;
    if (!args.config_path.empty()) {
        qline::report::ConfigError cerr;
        auto loaded = qline::report::load_config_file(args.config_path, &cerr);
        if (!loaded) {
            *error = cerr.message;
            return std::nullopt;
        }
        cfg = *loaded;
        have_params = true;
    }
    if (!args.c_inline.empty() || !args.d_inline.empty()) {
        if (args.c_inline.size() != 6 || args.d_inline.size() != 3) {
            *error = "inline parameters need exactly six --c values and three --d values";
            return std::nullopt;
        }
        for (int i = 0; i < 6; ++i) cfg.params.c[i] = args.c_inline[i];
        for (int i = 0; i < 3; ++i) cfg.params.d[i] = args.d_inline[i];
        have_params = true;
    }
    if (!have_params) {
        *error = "no parameters: pass --config or --c/--d";
        return std::nullopt;
    }
    if (args.seed_set) cfg.seed = args.seed;
    auto apply = [&](double v, double* slot) -> bool {
        if (v < 0) return true;
        if (v == 0.0) {
            *error = "tolerances must be positive";
            return false;
        }
        *slot = v;
        return true;
    };
    if (!apply(args.tol_b, &cfg.tolerances.tau_b)) return std::nullopt;
    if (!apply(args.tol_mu, &cfg.tolerances.tau_mu)) return std::nullopt;
    if (!apply(args.tol_r, &cfg.tolerances.tau_r)) return std::nullopt;
    if (!apply(args.tol_eq, &cfg.tolerances.tau_eq)) return std::nullopt;
    if (!apply(args.tol_line, &cfg.tolerances.line_residual)) return std::nullopt;
    return cfg;
}

void write_report(const CommonArgs& args, const Json& doc) {
    if (args.json_path.empty()) return;
    std::ofstream out(args.json_path, std::ios::binary);
    out << doc.dump(2) << "\n";
}

std::string fmt_complex(const qline::numerics::Complex& z) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", z.real(), z.imag());
    return buf;
}

int run_check(const CommonArgs& args, const RunConfig& cfg) {
    const auto rep = qline::smoothness::full_report(cfg.params, cfg.seed, cfg.tolerances);
    Json doc = qline::report::document("check", Json{{"params", qline::report::to_json(cfg.params)},
                                                     {"report", qline::report::to_json(rep)}});

    auto name = [](qline::smoothness::Verdict v) {
        return v == qline::smoothness::Verdict::Smooth       ? "smooth"
               : v == qline::smoothness::Verdict::NotSmooth ? "not smooth"
                                                             : "inconclusive";
    };
    std::printf("real:       %s (%s)\n", name(rep.real_smooth), rep.real_reason.c_str());
    std::printf("complex:    %s (%s)\n", name(rep.complex_smooth), rep.complex_reason.c_str());
    int smooth_charts = 0;
    for (const auto& chart : rep.projective)
        if (chart.sampled_smooth) ++smooth_charts;
    std::printf("projective: %d/7 charts sampled smooth\n", smooth_charts);
    for (const auto& w : rep.witnesses)
        std::printf("  witness b = %s, a = %s\n", fmt_complex(w.b).c_str(),
                    fmt_complex(w.a).c_str());

    int exit_code = kExitSmooth;
    if (rep.real_smooth == qline::smoothness::Verdict::Inconclusive ||
        rep.complex_smooth == qline::smoothness::Verdict::Inconclusive)
        exit_code = kExitInconclusive;
    else if (rep.real_smooth != qline::smoothness::Verdict::Smooth ||
             rep.complex_smooth != qline::smoothness::Verdict::Smooth)
        exit_code = kExitNotSmooth;
    doc["exit_code"] = exit_code;
    write_report(args, doc);
    return exit_code;
}

Json lines_payload(const RunConfig& cfg, const qline::line::ConstructResult& built) {
    Json lines = Json::array();
    for (const auto& l : built.lines) lines.push_back(qline::report::to_json(l, cfg.params));
    return Json{{"params", qline::report::to_json(cfg.params)},
                {"lines", lines},
                {"stage_report", qline::report::to_json(built.stages)}};
}

int run_line(const CommonArgs& args, const RunConfig& cfg) {
    const auto smooth = qline::smoothness::complex_smoothness(cfg.params, cfg.tolerances);
    if (smooth.complex_smooth != qline::smoothness::Verdict::Smooth)
        std::printf("warning: the complex intersection is not smooth (%s)\n",
                    smooth.complex_reason.c_str());
    const auto built = qline::line::construct_line(cfg.params, cfg.tolerances);
    std::printf("%zu line(s) found\n", built.lines.size());
    for (const auto& l : built.lines) {
        std::printf("  lambda = %s  mu = %s  branch = (%+d,%+d,%+d)  max residual = %.3e\n",
                    fmt_complex(l.lambda).c_str(), fmt_complex(l.mu).c_str(), l.branch[0],
                    l.branch[1], l.branch[2], l.max_line_residual);
        std::printf("    mu-equation residuals: radical form %.3e, determinant form %.3e\n",
                    l.radical_equation_residual, l.determinant_equation_residual);
    }
    if (built.lines.empty()) std::printf("stage report: %s\n", built.stages.note.c_str());

    Json doc = qline::report::document("line", lines_payload(cfg, built));
    const int exit_code = built.lines.empty() ? kExitNotSmooth : kExitSmooth;
    doc["exit_code"] = exit_code;
    write_report(args, doc);
    return exit_code;
}

int run_certify(const CommonArgs& args, const RunConfig& cfg) {
    const auto built = qline::line::construct_line(cfg.params, cfg.tolerances);
    Json certs = Json::array();
    int certified = 0;
    for (const auto& l : built.lines) {
        const auto cert = qline::certify::certify_no_real_points(cfg.params, l, cfg.tolerances);
        if (cert.verdict == CertVerdict::Certified) ++certified;
        Json e;
        e["line"] = qline::report::to_json(l, cfg.params);
        e["certificate"] = qline::report::to_json(cert);
        certs.push_back(e);
        std::printf("line mu = %s: %s (oracle_min = %.6e at t = %s)\n",
                    fmt_complex(l.mu).c_str(),
                    cert.verdict == CertVerdict::Certified  ? "certified"
                    : cert.verdict == CertVerdict::Refuted ? "refuted"
                                                            : "inconclusive",
                    cert.oracle_min, fmt_complex(cert.oracle_argmin).c_str());
    }
    if (built.lines.empty())
        std::printf("no line constructed: %s\n", built.stages.note.c_str());

    Json doc = qline::report::document(
        "certify", Json{{"params", qline::report::to_json(cfg.params)},
                        {"certificates", certs},
                        {"stage_report", qline::report::to_json(built.stages)}});
    const int exit_code = certified > 0 ? kExitSmooth : kExitNotSmooth;
    doc["exit_code"] = exit_code;
    write_report(args, doc);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis of the intersection of three quadrics in R^6 / C^6: "
                 "smoothness, explicit complex lines, realness certificates"};
    app.require_subcommand(1);

    CommonArgs check_args, line_args, certify_args, scan_args, intersect_args;

    auto* cmd_check = app.add_subcommand("check", "decide real and complex smoothness");
    add_common(cmd_check, &check_args);

    auto* cmd_line = app.add_subcommand("line", "construct all lines of the symmetric ansatz");
    add_common(cmd_line, &line_args);

    auto* cmd_certify = app.add_subcommand("certify", "certify absence of real points per line");
    add_common(cmd_certify, &certify_args);

    auto* cmd_scan = app.add_subcommand("scan", "search parameter space for certified instances");
    add_common(cmd_scan, &scan_args);
    std::uint64_t budget = 1000, max_results = 25;
    std::string strategy = "uniform-random", integrability = "either";
    int threads = 1;
    std::vector<std::string> range_overrides;
    cmd_scan->add_option("--budget", budget, "max candidate evaluations");
    cmd_scan->add_option("--max-results", max_results, "stop after this many instances");
    cmd_scan->add_option("--strategy", strategy,
                         "grid | uniform-random | coordinate-refine");
    cmd_scan->add_option("--integrability", integrability,
                         "either | integrable | non-integrable");
    cmd_scan->add_option("--threads", threads, "parallel evaluations (default 1)");
    cmd_scan->add_option("--range", range_overrides,
                         "range override, e.g. --range c1=-2:2 or --range d1=3:5");
    bool skip_real_smooth = false, skip_complex_smooth = false;
    cmd_scan->add_flag("--skip-real-smooth", skip_real_smooth,
                       "do not require real smoothness");
    cmd_scan->add_flag("--skip-complex-smooth", skip_complex_smooth,
                       "do not require complex smoothness");

    auto* cmd_intersect =
        app.add_subcommand("intersect", "sample lines meeting the constructed line");
    add_common(cmd_intersect, &intersect_args);
    int n_base_points = 64;
    cmd_intersect->add_option("--bases", n_base_points, "number of base points on the line");

    CLI11_PARSE(app, argc, argv);

    auto with_config = [&](const CommonArgs& args, auto&& fn) -> int {
        std::string error;
        auto cfg = resolve_config(args, &error);
        if (!cfg) {
            std::fprintf(stderr, "config error: %s\n", error.c_str());
            return kExitUsage;
        }
        try {
            return fn(*cfg);
        } catch (const std::exception& ex) {
            std::fprintf(stderr, "error: %s\n", ex.what());
            return kExitNotSmooth;
        }
    };

    if (cmd_check->parsed())
        return with_config(check_args, [&](const RunConfig& cfg) { return run_check(check_args, cfg); });
    if (cmd_line->parsed())
        return with_config(line_args, [&](const RunConfig& cfg) { return run_line(line_args, cfg); });
    if (cmd_certify->parsed())
        return with_config(certify_args,
                           [&](const RunConfig& cfg) { return run_certify(certify_args, cfg); });

    if (cmd_scan->parsed()) {
        qline::scan::SearchSpec spec;
        spec.budget = budget;
        spec.max_results = max_results;
        spec.threads = threads;
        spec.seed = scan_args.seed;
        spec.require_real_smooth = !skip_real_smooth;
        spec.require_complex_smooth = !skip_complex_smooth;
        if (strategy == "grid") spec.strategy = qline::scan::SearchStrategy::Grid;
        else if (strategy == "coordinate-refine")
            spec.strategy = qline::scan::SearchStrategy::CoordinateRefine;
        else if (strategy == "uniform-random")
            spec.strategy = qline::scan::SearchStrategy::UniformRandom;
        else {
            std::fprintf(stderr, "config error: unknown strategy '%s'\n", strategy.c_str());
            return kExitUsage;
        }
        if (integrability == "integrable")
            spec.integrability = qline::scan::IntegrabilityFilter::IntegrableOnly;
        else if (integrability == "non-integrable")
            spec.integrability = qline::scan::IntegrabilityFilter::NonIntegrableOnly;
        else if (integrability != "either") {
            std::fprintf(stderr, "config error: unknown integrability filter '%s'\n",
                         integrability.c_str());
            return kExitUsage;
        }
        for (const auto& ov : range_overrides) {
            const auto eq = ov.find('=');
            const auto colon = ov.find(':', eq == std::string::npos ? 0 : eq);
            if (eq == std::string::npos || colon == std::string::npos) {
                std::fprintf(stderr, "config error: bad --range '%s'\n", ov.c_str());
                return kExitUsage;
            }
            const std::string key = ov.substr(0, eq);
            double lo, hi;
            try {
                lo = std::stod(ov.substr(eq + 1, colon - eq - 1));
                hi = std::stod(ov.substr(colon + 1));
            } catch (const std::exception&) {
                std::fprintf(stderr, "config error: bad --range '%s'\n", ov.c_str());
                return kExitUsage;
            }
            if (key.size() == 2 && key[0] == 'c' && key[1] >= '1' && key[1] <= '6')
                spec.c_ranges[key[1] - '1'] = {lo, hi};
            else if (key.size() == 2 && key[0] == 'd' && key[1] >= '1' && key[1] <= '3')
                spec.d_ranges[key[1] - '1'] = {lo, hi};
            else {
                std::fprintf(stderr, "config error: bad --range key '%s'\n", key.c_str());
                return kExitUsage;
            }
        }

        Tolerances tol;
        // tolerance flags apply to scan as well
        CommonArgs& a = scan_args;
        if (a.tol_b > 0) tol.tau_b = a.tol_b;
        if (a.tol_mu > 0) tol.tau_mu = a.tol_mu;
        if (a.tol_r > 0) tol.tau_r = a.tol_r;
        if (a.tol_eq > 0) tol.tau_eq = a.tol_eq;
        if (a.tol_line > 0) tol.line_residual = a.tol_line;

        const auto result = qline::scan::parameter_search(spec, tol);
        std::printf("evaluated %llu candidates, found %zu certified instance(s)\n",
                    static_cast<unsigned long long>(result.evaluated), result.found.size());
        for (const auto& [stage, count] : result.rejections)
            std::printf("  rejected at %s: %llu\n", stage.c_str(),
                        static_cast<unsigned long long>(count));
        for (const auto& inst : result.found) {
            std::printf("  c = (%g, %g, %g, %g, %g, %g)  d = (%g, %g, %g)  oracle_min = %.3e\n",
                        inst.params.c[0], inst.params.c[1], inst.params.c[2], inst.params.c[3],
                        inst.params.c[4], inst.params.c[5], inst.params.d[0], inst.params.d[1],
                        inst.params.d[2], inst.certificate.oracle_min);
        }
        Json doc = qline::report::document("scan", qline::report::to_json(result, spec));
        if (result.budget_exhausted)
            std::printf("budget exhausted without a certified instance\n");
        const int exit_code = result.found.empty() ? kExitNotSmooth : kExitSmooth;
        doc["exit_code"] = exit_code;
        write_report(scan_args, doc);
        return exit_code;
    }

    if (cmd_intersect->parsed()) {
        return with_config(intersect_args, [&](const RunConfig& cfg) {
            const auto built = qline::line::construct_line(cfg.params, cfg.tolerances);
            const qline::line::ComplexLine* chosen = nullptr;
            qline::certify::RealnessCertificate chosen_cert;
            for (const auto& l : built.lines) {
                const auto cert =
                    qline::certify::certify_no_real_points(cfg.params, l, cfg.tolerances);
                if (cert.verdict == CertVerdict::Certified) {
                    chosen = &l;
                    chosen_cert = cert;
                    break;
                }
            }
            if (chosen == nullptr) {
                std::printf("no certified line to intersect (%s)\n", built.stages.note.c_str());
                return kExitNotSmooth;
            }
            const auto rep = qline::scan::scan_intersecting_lines(
                cfg.params, *chosen, n_base_points, cfg.seed, cfg.tolerances);
            int total_dirs = 0;
            for (const auto& s : rep.samples) total_dirs += static_cast<int>(s.directions.size());
            std::printf("sampled %d base points, %d direction(s) found\n", rep.coverage,
                        total_dirs);
            std::printf("real point on an intersecting line: %s\n",
                        rep.any_real_point_on_intersecting_line ? "FOUND (see report)" : "none");
            Json doc = qline::report::document(
                "intersect", Json{{"params", qline::report::to_json(cfg.params)},
                                  {"base_line", qline::report::to_json(*chosen, cfg.params)},
                                  {"base_certificate", qline::report::to_json(chosen_cert)},
                                  {"report", qline::report::to_json(rep)}});
            doc["exit_code"] = kExitSmooth;
            write_report(intersect_args, doc);
            return kExitSmooth;
        });
    }
    return kExitUsage;
}
