#include <doctest.h>

#include <cmath>

#include "qline/report.hpp"
#include "qline/rng.hpp"
#include "qline/scan.hpp"

using namespace qline;
using numerics::Complex;
using quadrics::QuadricParams;

TEST_CASE("integrability_indicator: closed forms on structured families") {
    Rng rng(191);
    for (int trial = 0; trial < 1000; ++trial) {
        QuadricParams p;

        // all equal: every bracket vanishes
        const double k = rng.uniform(-3.0, 3.0);
        for (int i = 0; i < 6; ++i) p.c[i] = k;
        CHECK(std::abs(scan::integrability_indicator(p)) <=
              1e-12 * scan::integrability_scale(p));

        // palindromic (p,q,r,r,q,p): the nonzero brackets cancel pairwise
        const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0),
                     c = rng.uniform(-3.0, 3.0);
        p.c = {a, b, c, c, b, a};
        CHECK(std::abs(scan::integrability_indicator(p)) <=
              1e-12 * scan::integrability_scale(p));

        // equal pair products c1 c4 = c2 c5 = c3 c6: the weights factor out
        const double s = rng.uniform(0.5, 2.0);
        p.c = {a, b, c, s / a, s / b, s / c};
        if (std::abs(a) > 0.2 && std::abs(b) > 0.2 && std::abs(c) > 0.2)
            CHECK(std::abs(scan::integrability_indicator(p)) <=
                  1e-11 * scan::integrability_scale(p));

        // repeated half (p,q,r,p,q,r) evaluates to 2(p-q)(q-r)(p-r): nonzero
        // for distinct entries (the brackets telescope but the weights differ)
        p.c = {a, b, c, a, b, c};
        const double expected = 2.0 * (a - b) * (b - c) * (a - c);
        CHECK(std::abs(scan::integrability_indicator(p) - expected) <=
              1e-11 * scan::integrability_scale(p));
    }

    QuadricParams probe;
    probe.c = {1, 2, 3, 1, 2, 3};
    CHECK(scan::integrability_indicator(probe) == doctest::Approx(-4.0));
}

TEST_CASE("integrability_indicator: re-association oracle and the half-swap symmetry") {
    Rng rng(193);
    for (int trial = 0; trial < 10000; ++trial) {
        QuadricParams p;
        for (int i = 0; i < 6; ++i) p.c[i] = rng.uniform(-4.0, 4.0);
        const auto& c = p.c;
        // independent ordering of the same expression
        const double alt = c[2] * c[5] * (c[0] + c[3]) - c[2] * c[5] * (c[1] + c[4]) +
                           c[1] * c[4] * (c[2] + c[5]) - c[1] * c[4] * (c[0] + c[3]) +
                           c[0] * c[3] * (c[1] + c[4]) - c[0] * c[3] * (c[2] + c[5]);
        const double scale = scan::integrability_scale(p);
        CHECK(std::abs(scan::integrability_indicator(p) - alt) <= 1e-12 * scale);

        QuadricParams swapped = p;
        for (int i = 0; i < 3; ++i) std::swap(swapped.c[i], swapped.c[i + 3]);
        CHECK(std::abs(scan::integrability_indicator(p) -
                       scan::integrability_indicator(swapped)) <= 1e-12 * scale);
    }
}

TEST_CASE("parameter_search: collapsed equal-coefficient ranges reject at smoothness") {
    scan::SearchSpec spec;
    for (auto& r : spec.c_ranges) r = {1.5, 1.5};  // c pinned all equal
    spec.budget = 20;
    spec.max_results = 5;
    spec.seed = 7;
    const auto result = scan::parameter_search(spec);
    CHECK(result.found.empty());
    CHECK(result.budget_exhausted);
    std::uint64_t smoothness_rejections = 0;
    for (const auto& [stage, count] : result.rejections)
        if (stage == "real_b_witness" || stage == "condition_a" ||
            stage == "complex_b_witness")
            smoothness_rejections += count;
    CHECK(smoothness_rejections == result.evaluated);
}

TEST_CASE("parameter_search: budget contract") {
    scan::SearchSpec spec;
    spec.budget = 1;
    spec.max_results = 5;
    const auto result = scan::parameter_search(spec);
    CHECK(result.evaluated <= 1);
}

TEST_CASE("parameter_search: found instances re-validate under fresh checks") {
    scan::SearchSpec spec;
    spec.budget = 200;
    spec.max_results = 6;
    spec.seed = 2024;
    const auto result = scan::parameter_search(spec);
    REQUIRE(result.found.size() == 6);
    for (const auto& inst : result.found) {
        CHECK(smoothness::real_smoothness(inst.params).real_smooth ==
              smoothness::Verdict::Smooth);
        CHECK(smoothness::complex_smoothness(inst.params).complex_smooth ==
              smoothness::Verdict::Smooth);
        CHECK(line::line_residual_scaled(inst.params, inst.line) <= 1e-8);
        const auto cert = certify::certify_no_real_points(inst.params, inst.line);
        CHECK(cert.verdict == certify::CertVerdict::Certified);
    }
}

TEST_CASE("parameter_search: deterministic reports, threads merge identically") {
    scan::SearchSpec spec;
    spec.budget = 60;
    spec.max_results = 3;
    spec.seed = 99;
    const auto r1 = scan::parameter_search(spec);
    const auto r2 = scan::parameter_search(spec);
    const auto j1 = report::to_json(r1, spec).dump();
    const auto j2 = report::to_json(r2, spec).dump();
    CHECK(j1 == j2);

    spec.threads = 4;
    const auto r4 = scan::parameter_search(spec);
    CHECK(report::to_json(r4, spec).dump() == j1);
}

TEST_CASE("parameter_search: grid and coordinate-refine strategies run deterministically") {
    for (auto strategy : {scan::SearchStrategy::Grid, scan::SearchStrategy::CoordinateRefine}) {
        scan::SearchSpec spec;
        spec.strategy = strategy;
        spec.budget = 40;
        spec.max_results = 2;
        spec.seed = 5;
        const auto r1 = scan::parameter_search(spec);
        const auto r2 = scan::parameter_search(spec);
        CHECK(report::to_json(r1, spec).dump() == report::to_json(r2, spec).dump());
        CHECK(r1.evaluated <= spec.budget);
    }
}

TEST_CASE("parameter_search: non-integrable filter keeps the indicator away from zero") {
    scan::SearchSpec spec;
    spec.budget = 120;
    spec.max_results = 4;
    spec.seed = 31;
    spec.integrability = scan::IntegrabilityFilter::NonIntegrableOnly;
    const auto result = scan::parameter_search(spec);
    for (const auto& inst : result.found)
        CHECK(std::abs(inst.integrability) >= 1e-6 * scan::integrability_scale(inst.params));
}

namespace {

scan::FoundInstance first_certified_instance(std::uint64_t seed) {
    scan::SearchSpec spec;
    spec.budget = 100;
    spec.max_results = 1;
    spec.seed = seed;
    const auto result = scan::parameter_search(spec);
    REQUIRE_FALSE(result.found.empty());
    return result.found.front();
}

}  // namespace

TEST_CASE("directions_through_point: the base direction is recovered and labeled") {
    const auto inst = first_certified_instance(404);
    const auto base_dir = inst.line.b_full();
    for (const Complex t : {Complex(0.3, -0.2), Complex(-1.1, 0.8)}) {
        const auto p = inst.line.point_at(t);
        REQUIRE(quadrics::membership_residual(inst.params, p) <= 1e-8);
        scan::DirectionOptions opts;
        opts.seed = 11;
        opts.multistarts = 100;
        opts.hint = &base_dir;
        const auto dirs = scan::directions_through_point(inst.params, p, opts);
        REQUIRE_FALSE(dirs.empty());
        bool base_found = false;
        for (const auto& dir : dirs) {
            CHECK(dir.membership_residual <= 1e-7);
            if (dir.is_base_direction) base_found = true;
        }
        CHECK(base_found);
    }
}

TEST_CASE("directions_through_point: doubling the multistart budget keeps earlier finds") {
    const auto inst = first_certified_instance(405);
    const auto p = inst.line.point_at(Complex(0.4, 0.1));
    scan::DirectionOptions opts;
    opts.seed = 17;
    opts.multistarts = 60;
    const auto small = scan::directions_through_point(inst.params, p, opts);
    opts.multistarts = 120;
    const auto big = scan::directions_through_point(inst.params, p, opts);
    CHECK(big.size() >= small.size());
    for (const auto& dir : small) {
        bool still_there = false;
        for (const auto& dir2 : big) {
            double dot = 0.0, n1 = 0.0, n2 = 0.0;
            Complex inner(0.0);
            for (int i = 0; i < 6; ++i) {
                inner += std::conj(dir.v[i]) * dir2.v[i];
                n1 += std::norm(dir.v[i]);
                n2 += std::norm(dir2.v[i]);
            }
            dot = std::norm(inner) / (n1 * n2);
            if (1.0 - dot <= 1e-10) still_there = true;
        }
        CHECK(still_there);
    }
}

TEST_CASE("scan_intersecting_lines: report well-formedness on a certified instance") {
    const auto inst = first_certified_instance(406);
    const auto report = scan::scan_intersecting_lines(inst.params, inst.line, 6, 123);
    CHECK(report.coverage == 6);
    CHECK(report.heuristic);
    REQUIRE(report.samples.size() == 6);
    for (const auto& sample : report.samples) {
        CHECK(quadrics::membership_residual(inst.params, sample.point) <= 1e-7);
        REQUIRE(sample.certificates.size() == sample.directions.size());
        bool base_present = false;
        for (std::size_t i = 0; i < sample.directions.size(); ++i) {
            CHECK(sample.directions[i].membership_residual <= 1e-7);
            if (sample.directions[i].is_base_direction) {
                base_present = true;
                // the base line re-certifies at every sampled point
                CHECK(sample.certificates[i].verdict == certify::CertVerdict::Certified);
            }
        }
        CHECK(base_present);
    }
    if (report.any_real_point_on_intersecting_line)
        MESSAGE("real point found on an intersecting line; reported, not suppressed");
}

TEST_CASE("scan_intersecting_lines: zero base points give an empty report") {
    const auto inst = first_certified_instance(407);
    const auto report = scan::scan_intersecting_lines(inst.params, inst.line, 0, 1);
    CHECK(report.coverage == 0);
    CHECK(report.samples.empty());
    CHECK_FALSE(report.any_real_point_on_intersecting_line);
}
