#include "qline/scan.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>

#include "qline/rng.hpp"

namespace qline::scan {

double integrability_indicator(const QuadricParams& p) {
    const auto& c = p.c;
    return c[0] * c[3] * (c[1] + c[4] - c[2] - c[5]) +
           c[1] * c[4] * (c[2] + c[5] - c[0] - c[3]) +
           c[2] * c[5] * (c[0] + c[3] - c[1] - c[4]);
}

double integrability_scale(const QuadricParams& p) {
    double cmax = 0.0;
    for (double ci : p.c) cmax = std::max(cmax, std::abs(ci));
    return std::max(1.0, cmax * cmax * cmax);
}

namespace {

struct Evaluation {
    std::string rejection;  // empty when accepted
    std::optional<FoundInstance> instance;
};

QuadricParams draw_params(const SearchSpec& spec, std::uint64_t index) {
    QuadricParams p;
    switch (spec.strategy) {
        case SearchStrategy::UniformRandom: {
            Rng rng = Rng::substream(spec.seed, index);
            for (int i = 0; i < 6; ++i)
                p.c[i] = rng.uniform(spec.c_ranges[i].lo, spec.c_ranges[i].hi);
            for (int j = 0; j < 3; ++j)
                p.d[j] = rng.uniform(spec.d_ranges[j].lo, spec.d_ranges[j].hi);
            break;
        }
        case SearchStrategy::Grid: {
            // mixed-radix lattice over all nine parameters
            const std::uint64_t per_dim = std::max<std::uint64_t>(
                2, static_cast<std::uint64_t>(std::floor(std::pow(
                       static_cast<double>(std::max<std::uint64_t>(spec.budget, 1)), 1.0 / 9.0))));
            std::uint64_t rest = index;
            auto next_coord = [&](const Range& r) {
                const std::uint64_t k = rest % per_dim;
                rest /= per_dim;
                return r.lo + (r.hi - r.lo) * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(per_dim);
            };
            for (int i = 0; i < 6; ++i) p.c[i] = next_coord(spec.c_ranges[i]);
            for (int j = 0; j < 3; ++j) p.d[j] = next_coord(spec.d_ranges[j]);
            break;
        }
        case SearchStrategy::CoordinateRefine: {
            // random anchor with one coordinate swept per step
            const std::uint64_t anchor = index / 18;
            const int coord = static_cast<int>((index / 2) % 9);
            Rng rng = Rng::substream(spec.seed, anchor * 131 + 17);
            for (int i = 0; i < 6; ++i)
                p.c[i] = rng.uniform(spec.c_ranges[i].lo, spec.c_ranges[i].hi);
            for (int j = 0; j < 3; ++j)
                p.d[j] = rng.uniform(spec.d_ranges[j].lo, spec.d_ranges[j].hi);
            Rng sweep = Rng::substream(spec.seed, index);
            if (coord < 6)
                p.c[coord] = sweep.uniform(spec.c_ranges[coord].lo, spec.c_ranges[coord].hi);
            else
                p.d[coord - 6] =
                    sweep.uniform(spec.d_ranges[coord - 6].lo, spec.d_ranges[coord - 6].hi);
            break;
        }
    }
    return p;
}

Evaluation evaluate_candidate(const SearchSpec& spec, std::uint64_t index,
                              const Tolerances& tol) {
    Evaluation ev;
    const QuadricParams p = draw_params(spec, index);

    if (p.d[0] == 0.0) {
        ev.rejection = "d1_zero";
        return ev;
    }
    if (spec.require_real_smooth) {
        const auto rep = smoothness::real_smoothness(p, tol);
        if (rep.real_smooth != smoothness::Verdict::Smooth) {
            ev.rejection = rep.real_condition_a ? "real_b_witness" : "condition_a";
            return ev;
        }
    }
    if (spec.require_complex_smooth) {
        const auto rep = smoothness::complex_smoothness(p, tol);
        if (rep.complex_smooth != smoothness::Verdict::Smooth) {
            ev.rejection = "complex_b_witness";
            return ev;
        }
    }
    const double indicator = integrability_indicator(p);
    const double iscale = integrability_scale(p);
    if (spec.integrability == IntegrabilityFilter::NonIntegrableOnly &&
        std::abs(indicator) < 1e-6 * iscale) {
        ev.rejection = "integrable_locus";
        return ev;
    }
    if (spec.integrability == IntegrabilityFilter::IntegrableOnly &&
        std::abs(indicator) > 1e-12 * iscale) {
        ev.rejection = "non_integrable";
        return ev;
    }
    if (p.d[1] == 0.0) {
        ev.rejection = "d2_zero";
        return ev;
    }

    const auto built = line::construct_line(p, tol);
    if (built.lines.empty()) {
        ev.rejection = "no_line";
        return ev;
    }

    // prefer lines satisfying every hypothesis; take the first certified one
    for (const auto& l : built.lines) {
        const auto cert = certify::certify_no_real_points(p, l, tol);
        if (cert.verdict == certify::CertVerdict::Certified) {
            ev.instance = FoundInstance{p, l, cert, indicator};
            return ev;
        }
    }
    ev.rejection = "not_certified";
    return ev;
}

}  // namespace

SearchResult parameter_search(const SearchSpec& spec, const Tolerances& tol) {
    SearchResult out;
    const int threads = std::max(1, spec.threads);
    std::uint64_t index = 0;

    while (index < spec.budget && out.found.size() < spec.max_results) {
        const std::uint64_t chunk =
            std::min<std::uint64_t>(spec.budget - index, static_cast<std::uint64_t>(threads) * 8);
        std::vector<Evaluation> evals(chunk);
        if (threads == 1) {
            for (std::uint64_t k = 0; k < chunk; ++k)
                evals[k] = evaluate_candidate(spec, index + k, tol);
        } else {
            std::vector<std::future<Evaluation>> futures;
            futures.reserve(chunk);
            for (std::uint64_t k = 0; k < chunk; ++k)
                futures.push_back(std::async(std::launch::async, evaluate_candidate, spec,
                                             index + k, tol));
            for (std::uint64_t k = 0; k < chunk; ++k) evals[k] = futures[k].get();
        }
        for (std::uint64_t k = 0; k < chunk; ++k) {
            ++out.evaluated;
            if (evals[k].instance) {
                if (out.found.size() < spec.max_results)
                    out.found.push_back(*evals[k].instance);
            } else {
                ++out.rejections[evals[k].rejection];
            }
            if (out.found.size() >= spec.max_results) break;
        }
        index += chunk;
    }
    out.budget_exhausted = out.found.empty();
    return out;
}

namespace {

using Vec6 = Eigen::Matrix<Complex, 6, 1>;

Vec6 to_vec(const Point6& p) {
    Vec6 v;
    for (int i = 0; i < 6; ++i) v(i) = p[i];
    return v;
}

Point6 to_point(const Vec6& v) {
    Point6 p;
    for (int i = 0; i < 6; ++i) p[i] = v(i);
    return p;
}

// worst of the six line-membership values at v, scaled
double direction_residual(const QuadricParams& params, const Point6& p, const Point6& v) {
    const auto quad = quadrics::evaluate(params, v);
    const auto cross = quadrics::polarize(params, p, v);
    double vmax = 0.0, pmax = 0.0;
    for (int i = 0; i < 6; ++i) {
        vmax = std::max(vmax, std::abs(v[i]));
        pmax = std::max(pmax, std::abs(p[i]));
    }
    double cmax = 1.0;
    for (double ci : params.c) cmax = std::max(cmax, std::abs(ci));
    const double scale = std::max(cmax * std::max(vmax * vmax, pmax * vmax), 1e-30);
    double worst = 0.0;
    for (int j = 0; j < 3; ++j)
        worst = std::max({worst, std::abs(quad[j]), std::abs(cross[j])});
    return worst / scale;
}

// projective (Fubini-Study) distance between directions
double projective_distance(const Point6& u, const Point6& v) {
    Complex inner(0.0);
    double nu = 0.0, nv = 0.0;
    for (int i = 0; i < 6; ++i) {
        inner += std::conj(u[i]) * v[i];
        nu += std::norm(u[i]);
        nv += std::norm(v[i]);
    }
    if (nu == 0.0 || nv == 0.0) return 1.0;
    const double cos2 = std::min(1.0, std::norm(inner) / (nu * nv));
    return std::sqrt(std::max(0.0, 1.0 - cos2));
}

void normalize_direction(Point6& v) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < 6; ++i)
        if (std::abs(v[i]) > best) {
            best = std::abs(v[i]);
            arg = i;
        }
    if (best == 0.0) return;
    const Complex pivot = v[arg];
    for (int i = 0; i < 6; ++i) v[i] /= pivot;
}

}  // namespace

std::vector<Direction> directions_through_point(const QuadricParams& params, const Point6& p,
                                                const DirectionOptions& opts,
                                                const Tolerances& tol) {
    std::vector<Direction> out;
    Rng rng = Rng::substream(opts.seed, 0x9d1e);

    // fixed random chart <r, v> = 1 and five random combinations of the six
    // membership equations make the Newton system square
    Vec6 chart;
    for (int i = 0; i < 6; ++i) chart(i) = rng.complex_normal();
    Eigen::Matrix<Complex, 5, 6> mix;
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 6; ++c) mix(r, c) = rng.complex_normal();

    auto equations = [&](const Vec6& v, Eigen::Matrix<Complex, 6, 1>& f,
                         Eigen::Matrix<Complex, 6, 6>& jac) {
        const Point6 vp = to_point(v);
        const auto quad = quadrics::evaluate(params, vp);
        const auto cross = quadrics::polarize(params, p, vp);
        Eigen::Matrix<Complex, 6, 1> full;
        full << quad[0], quad[1], quad[2], cross[0], cross[1], cross[2];

        // gradients: d quad_j / dv = jacobian rows at v; d cross_j / dv is
        // linear with the same polarization structure
        Eigen::Matrix<Complex, 6, 6> jfull;
        const auto jv = quadrics::jacobian(params, vp);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 6; ++i) jfull(j, i) = jv(j, i);
        for (int i = 0; i < 6; ++i) {
            jfull(3, i) = p[i];
            jfull(5, i) = params.c[i] * p[i];
        }
        for (int i = 0; i < 3; ++i) {
            jfull(4, i) = 0.5 * p[i + 3];
            jfull(4, i + 3) = 0.5 * p[i];
        }

        f.template head<5>() = mix * full;
        f(5) = chart.cwiseProduct(v).sum() - Complex(1.0);  // analytic, no conjugation
        jac.template topRows<5>() = mix * jfull;
        jac.row(5) = chart.transpose();
    };

    auto try_start = [&](Vec6 v) {
        const Complex on_chart = chart.cwiseProduct(v).sum();
        if (std::abs(on_chart) < 1e-8) return;
        v /= on_chart;
        Eigen::Matrix<Complex, 6, 1> f;
        Eigen::Matrix<Complex, 6, 6> jac;
        equations(v, f, jac);
        double fn = f.norm();
        for (int it = 0; it < 60 && fn > 1e-13; ++it) {
            const Eigen::Matrix<Complex, 6, 1> step = jac.partialPivLu().solve(-f);
            if (!step.allFinite()) return;
            double damp = 1.0;
            bool moved = false;
            for (int half = 0; half < 10; ++half) {
                const Vec6 v_next = v + damp * step;
                Eigen::Matrix<Complex, 6, 1> f_next;
                Eigen::Matrix<Complex, 6, 6> jac_next;
                equations(v_next, f_next, jac_next);
                if (f_next.norm() < fn) {
                    v = v_next;
                    f = f_next;
                    jac = jac_next;
                    fn = f.norm();
                    moved = true;
                    break;
                }
                damp *= 0.5;
            }
            if (!moved) break;
        }
        Point6 dir = to_point(v);
        normalize_direction(dir);
        const double res = direction_residual(params, p, dir);
        if (res > tol.direction_residual) return;
        for (auto& seen : out)
            if (projective_distance(seen.v, dir) <= tol.direction_dedupe) return;
        Direction d;
        d.v = dir;
        d.membership_residual = res;
        out.push_back(d);
    };

    if (opts.hint) try_start(to_vec(*opts.hint));
    for (int k = 0; k < opts.multistarts; ++k) {
        Vec6 v;
        for (int i = 0; i < 6; ++i) v(i) = rng.complex_normal();
        try_start(v);
    }

    if (opts.hint) {
        for (auto& d : out)
            if (projective_distance(d.v, *opts.hint) <= tol.direction_dedupe)
                d.is_base_direction = true;
    }
    std::stable_sort(out.begin(), out.end(), [](const Direction& x, const Direction& y) {
        return x.is_base_direction > y.is_base_direction;
    });
    return out;
}

IntersectionReport scan_intersecting_lines(const QuadricParams& params, const ComplexLine& l,
                                           int n_base_points, std::uint64_t seed,
                                           const Tolerances& tol) {
    IntersectionReport report;
    double amax = 0.0, bmax = 0.0;
    for (const auto& x : l.a_full()) amax = std::max(amax, std::abs(x));
    for (const auto& x : l.b_full()) bmax = std::max(bmax, std::abs(x));
    const double radius = 4.0 * (1.0 + amax / std::max(bmax, 1e-30));
    const Point6 base_dir = l.b_full();

    for (int i = 0; i < n_base_points; ++i) {
        // Halton points of the unit disk, scaled to the adaptive window
        const double r = radius * std::sqrt(halton(i + 1, 2));
        const double phi = 2.0 * 3.14159265358979323846 * halton(i + 1, 3);
        const Complex t(r * std::cos(phi), r * std::sin(phi));

        IntersectionSample sample;
        sample.t = t;
        sample.point = l.point_at(t);

        DirectionOptions opts;
        opts.seed = seed + static_cast<std::uint64_t>(i) * 97;
        opts.hint = &base_dir;
        sample.directions = directions_through_point(params, sample.point, opts, tol);

        for (const auto& dir : sample.directions) {
            RealnessCertificate cert;
            const auto oracle = certify::min_imaginary_norm(sample.point, dir.v);
            cert.oracle_min = oracle.value;
            cert.oracle_argmin = oracle.argmin;
            double pmax = 0.0;
            for (const auto& x : sample.point) pmax = std::max(pmax, std::abs(x));
            const double threshold = tol.tau_r * (1.0 + pmax * pmax);
            if (oracle.value <= threshold / 10.0) {
                cert.verdict = certify::CertVerdict::Refuted;
                if (!dir.is_base_direction) report.any_real_point_on_intersecting_line = true;
            } else if (oracle.value >= threshold) {
                cert.verdict = certify::CertVerdict::Certified;
                cert.note = "oracle only: the hypothesis checks do not apply to "
                            "off-ansatz lines";
            } else {
                cert.verdict = certify::CertVerdict::Inconclusive;
                cert.note = "oracle minimum in the ambiguous band";
            }
            sample.certificates.push_back(cert);
        }
        report.samples.push_back(std::move(sample));
    }
    report.coverage = n_base_points;
    return report;
}

}  // namespace qline::scan
