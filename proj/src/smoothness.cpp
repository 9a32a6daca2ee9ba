#include "qline/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qline/rng.hpp"

namespace qline::smoothness {

namespace {

double params_scale(const QuadricParams& params) {
    double cmax = 0.0, dmax = 0.0;
    for (double ci : params.c) cmax = std::max(cmax, std::abs(ci));
    for (double dj : params.d) dmax = std::max(dmax, std::abs(dj));
    return std::max({1.0, cmax * cmax, dmax * dmax});
}

Complex a_of_b(const QuadricParams& params, Complex b) {
    return (params.d[2] - 2.0 * b * params.d[1]) / params.d[0];
}

std::array<double, 3> scaled_equation_residuals(const QuadricParams& params, Complex b,
                                                double scale) {
    const Complex a = a_of_b(params, b);
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i)
        r[i] = std::abs((params.c[i] - a) * (params.c[i + 3] - a) - b * b) / scale;
    return r;
}

}  // namespace

bool check_condition_a(const std::array<double, 3>& d, Field field) {
    if (field == Field::Real) return d[0] > 2.0 * std::abs(d[1]);
    return d[0] != 2.0 * std::abs(d[1]);
}

BSystemResult solve_b_system(const QuadricParams& params, Field field, const Tolerances& tol) {
    if (params.d[0] == 0.0) throw std::invalid_argument("solve_b_system requires d1 != 0");
    const double scale = params_scale(params);

    // substituting a(b) turns each equation into a quadratic in b:
    //   (beta^2 - 1) b^2 + beta (c_i + c_{i+3} - 2 alpha) b + (c_i - alpha)(c_{i+3} - alpha)
    const double alpha = params.d[2] / params.d[0];
    const double beta = 2.0 * params.d[1] / params.d[0];
    std::array<std::array<double, 3>, 3> q{};  // q[i] = {const, linear, quadratic}
    for (int i = 0; i < 3; ++i) {
        q[i] = {(params.c[i] - alpha) * (params.c[i + 3] - alpha),
                beta * (params.c[i] + params.c[i + 3] - 2.0 * alpha), beta * beta - 1.0};
    }

    const double coeff_floor = 1e-14 * scale;
    auto identically_zero = [&](int i) {
        return std::abs(q[i][0]) <= coeff_floor && std::abs(q[i][1]) <= coeff_floor &&
               std::abs(q[i][2]) <= coeff_floor;
    };

    BSystemResult out;
    if (identically_zero(0) && identically_zero(1) && identically_zero(2)) {
        out.degenerate_system = true;  // every b solves the system
        return out;
    }

    // roots of the first non-degenerate equation, then tested in all three
    int pivot = 0;
    while (identically_zero(pivot)) ++pivot;
    std::vector<Complex> candidates;
    const auto& qp = q[pivot];
    if (std::abs(qp[2]) > coeff_floor) {
        auto [r1, r2] = numerics::solve_quadratic(Complex(qp[1] / qp[2]), Complex(qp[0] / qp[2]));
        candidates = {r1, r2};
    } else if (std::abs(qp[1]) > coeff_floor) {
        candidates = {Complex(-qp[0] / qp[1])};
    }

    for (const Complex& b : candidates) {
        const auto res = scaled_equation_residuals(params, b, scale);
        if (res[0] > tol.tau_b || res[1] > tol.tau_b || res[2] > tol.tau_b) continue;
        if (field == Field::Real && std::abs(b.imag()) > tol.tau_b * std::max(1.0, std::abs(b)))
            continue;
        Complex bb = (field == Field::Real) ? Complex(b.real(), 0.0) : b;
        bool duplicate = false;
        for (const auto& seen : out.roots)
            if (std::abs(seen.b - bb) <= 1e-8 * std::max(1.0, std::abs(bb))) duplicate = true;
        if (duplicate) continue;
        out.roots.push_back({bb, a_of_b(params, bb), scaled_equation_residuals(params, bb, scale)});
    }
    return out;
}

InequalityVerdict check_inequalities(const BSolution& sol, const QuadricParams& params,
                                     const Tolerances& tol) {
    const double b = sol.b.real();
    if (std::abs(sol.b.imag()) > tol.tau_b * std::max(1.0, std::abs(sol.b)))
        throw std::invalid_argument("check_inequalities requires a real root");
    if (b == 0.0 || params.d[1] == 0.0 || params.d[0] == 0.0)
        return InequalityVerdict::UndefinedForm;
    const double a = sol.a.real();
    for (int k = 0; k < 3; ++k) {
        const double r = (params.c[k] - a) / b;
        if (r / params.d[1] >= (1.0 + r * r) / params.d[0]) return InequalityVerdict::Holds;
    }
    return InequalityVerdict::Fails;
}

SmoothnessReport real_smoothness(const QuadricParams& params, const Tolerances& tol) {
    SmoothnessReport rep;
    rep.real_condition_a = check_condition_a(params.d, Field::Real);
    if (!rep.real_condition_a) {
        rep.real_smooth = Verdict::NotSmooth;
        rep.real_reason = (params.d[0] < 2.0 * std::abs(params.d[1]))
                              ? "condition (a) fails: d1 < 2|d2|, the real locus is empty"
                              : "condition (a) fails: d1 = 2|d2| (boundary)";
        return rep;
    }
    if (params.d[0] == 0.0) {
        rep.real_smooth = Verdict::Inconclusive;
        rep.real_reason = "d1 = 0: the b-system substitution a(b) is undefined";
        return rep;
    }

    const auto sys = solve_b_system(params, Field::Real, tol);
    if (sys.degenerate_system) {
        // every b is a common root; look for one that satisfies an inequality
        for (double b : {1.0, -1.0, 0.5, -0.5, 2.0, -2.0, 4.0, -4.0}) {
            BSolution sol{Complex(b), a_of_b(params, Complex(b)), {}};
            if (check_inequalities(sol, params, tol) == InequalityVerdict::Holds) {
                rep.real_smooth = Verdict::NotSmooth;
                rep.real_reason = "degenerate b-system: every b solves it";
                rep.witnesses.push_back(sol);
                return rep;
            }
        }
        rep.real_smooth = Verdict::Inconclusive;
        rep.real_reason = "degenerate b-system, no inequality witness located";
        return rep;
    }

    bool inconclusive = false;
    for (const auto& sol : sys.roots) {
        switch (check_inequalities(sol, params, tol)) {
            case InequalityVerdict::Holds: {
                rep.real_smooth = Verdict::NotSmooth;
                rep.real_reason = "common b-root satisfies an inequality";
                rep.witnesses.push_back(sol);
                if (std::abs(sol.b) > tol.tau_b) {
                    auto dp = degenerate_point(params, sol, tol);
                    if (dp.status == DegenerateStatus::Found)
                        rep.degenerate_points.push_back(dp.x);
                }
                break;
            }
            case InequalityVerdict::UndefinedForm:
                inconclusive = true;
                rep.witnesses.push_back(sol);
                break;
            case InequalityVerdict::Fails:
                break;
        }
        if (rep.real_smooth == Verdict::NotSmooth) return rep;
    }
    if (inconclusive) {
        rep.real_smooth = Verdict::Inconclusive;
        rep.real_reason = "inequalities undefined at b = 0 or d2 = 0; not covered";
        return rep;
    }
    rep.real_smooth = Verdict::Smooth;
    rep.real_reason = sys.roots.empty() ? "condition (a) holds and the b-system has no real root"
                                        : "no common b-root satisfies any inequality";
    rep.real_possibly_empty = true;  // nonemptiness is not decided by the criterion
    return rep;
}

SmoothnessReport complex_smoothness(const QuadricParams& params, const Tolerances& tol) {
    SmoothnessReport rep;
    rep.complex_condition_a = check_condition_a(params.d, Field::Complex);
    if (!rep.complex_condition_a) {
        rep.complex_smooth = Verdict::NotSmooth;
        rep.complex_reason = "condition (a) fails: d1 = 2|d2|";
        return rep;
    }
    if (params.d[0] == 0.0) {
        rep.complex_smooth = Verdict::Inconclusive;
        rep.complex_reason = "d1 = 0: the b-system substitution a(b) is undefined";
        return rep;
    }
    const auto sys = solve_b_system(params, Field::Complex, tol);
    if (sys.degenerate_system) {
        rep.complex_smooth = Verdict::NotSmooth;
        rep.complex_reason = "degenerate b-system: every b solves it";
        return rep;
    }
    if (!sys.roots.empty()) {
        rep.complex_smooth = Verdict::NotSmooth;
        rep.complex_reason = "the b-system has a complex common root";
        rep.witnesses = sys.roots;
        return rep;
    }
    rep.complex_smooth = Verdict::Smooth;
    rep.complex_reason = "condition (a) holds and the b-system has no complex root";
    return rep;
}

namespace {

// Feasible point of {u >= 0 : rows * u = rhs} where rows has rank <= 2 and
// the solution set is an affine subspace of dimension 3 - rank. Prefers an
// interior point (largest minimal coordinate). Returns nullopt when empty.
std::optional<Eigen::Vector3d> nonnegative_affine_point(const Eigen::Matrix<double, 2, 3>& rows,
                                                        const Eigen::Vector2d& rhs,
                                                        double consistency_tol,
                                                        bool* inconsistent) {
    *inconsistent = false;
    Eigen::JacobiSVD<Eigen::Matrix<double, 2, 3>> svd(rows,
                                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double rank_tol = 1e-12 * std::max(1.0, smax);
    int rank = 0;
    for (int i = 0; i < 2; ++i)
        if (sv(i) > rank_tol) ++rank;

    Eigen::Vector2d y = svd.matrixU().transpose() * rhs;
    Eigen::Vector3d u0 = Eigen::Vector3d::Zero();
    for (int i = 0; i < rank; ++i) u0 += (y(i) / sv(i)) * svd.matrixV().col(i);
    if ((rows * u0 - rhs).norm() > consistency_tol) {
        *inconsistent = true;
        return std::nullopt;
    }

    if (rank >= 3) {
        if ((u0.array() >= 0.0).all()) return u0;
        return std::nullopt;
    }

    // null-space directions
    std::vector<Eigen::Vector3d> null_dirs;
    for (int i = rank; i < 3; ++i) null_dirs.push_back(svd.matrixV().col(i));

    if (null_dirs.size() == 1) {
        const Eigen::Vector3d n = null_dirs[0];
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) {
            if (std::abs(n(i)) < 1e-14) {
                if (u0(i) < -1e-13) return std::nullopt;
            } else if (n(i) > 0.0) {
                lo = std::max(lo, -u0(i) / n(i));
            } else {
                hi = std::min(hi, -u0(i) / n(i));
            }
        }
        if (lo > hi) return std::nullopt;
        double t;
        if (std::isfinite(lo) && std::isfinite(hi)) {
            t = 0.5 * (lo + hi);
        } else if (std::isfinite(lo)) {
            t = lo + 1.0;
        } else if (std::isfinite(hi)) {
            t = hi - 1.0;
        } else {
            t = 0.0;
        }
        Eigen::Vector3d u = u0 + t * n;
        u = u.cwiseMax(0.0);
        return u;
    }

    // two null directions: the constraints cut a polygon in the (s, t) plane;
    // probe the projection of u0 plus the pairwise constraint-line vertices
    const Eigen::Vector3d n1 = null_dirs[0], n2 = null_dirs[1];
    std::vector<Eigen::Vector2d> probes = {{0.0, 0.0}};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Eigen::Matrix2d m;
            m << n1(i), n2(i), n1(j), n2(j);
            if (std::abs(m.determinant()) < 1e-14) continue;
            probes.push_back(m.inverse() * Eigen::Vector2d(-u0(i), -u0(j)));
        }
    Eigen::Vector3d best;
    double best_min = -std::numeric_limits<double>::infinity();
    for (const auto& st0 : probes)
        for (double r : {0.0, 0.5, 1.0, 2.0})
            for (const auto& dir : std::vector<Eigen::Vector2d>{
                     {0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}}) {
                const Eigen::Vector2d st = st0 + r * dir;
                const Eigen::Vector3d u = u0 + st(0) * n1 + st(1) * n2;
                const double m = u.minCoeff();
                if (m > best_min) {
                    best_min = m;
                    best = u;
                }
            }
    if (best_min < -1e-12) return std::nullopt;
    return best.cwiseMax(0.0).eval();
}

}  // namespace

DegeneratePointResult degenerate_point(const QuadricParams& params, const BSolution& sol,
                                       const Tolerances& tol) {
    if (std::abs(sol.b.imag()) > tol.tau_b * std::max(1.0, std::abs(sol.b)) ||
        std::abs(sol.b) <= tol.tau_b)
        throw std::invalid_argument("degenerate_point requires a real common root with b != 0");
    const double b = sol.b.real();
    const double a = sol.a.real();

    DegeneratePointResult out;
    std::array<double, 3> s{};
    for (int i = 0; i < 3; ++i) s[i] = (params.c[i] - a) / b;

    // level constraints on u = (x1^2, x2^2, x3^2); the f3 row is dependent
    Eigen::Matrix<double, 2, 3> rows;
    Eigen::Vector2d rhs(params.d[0], params.d[1]);
    for (int i = 0; i < 3; ++i) {
        rows(0, i) = 1.0 + s[i] * s[i];
        rows(1, i) = s[i];
    }
    const double scale = std::max({1.0, std::abs(params.d[0]), std::abs(params.d[1])});
    bool inconsistent = false;
    auto u = nonnegative_affine_point(rows, rhs, 1e-9 * scale, &inconsistent);
    if (inconsistent) {
        out.status = DegenerateStatus::SingularSystem;
        return out;
    }
    if (!u) {
        out.status = DegenerateStatus::NoRealPoint;
        return out;
    }

    Point6 x{};
    for (int i = 0; i < 3; ++i) {
        x[i] = Complex(std::sqrt(std::max(0.0, (*u)(i))), 0.0);
        x[i + 3] = s[i] * x[i];
    }
    out.status = DegenerateStatus::Found;
    out.x = x;
    out.rank_ratio = jacobian_rank_ratio(params, x);
    out.residual = quadrics::membership_residual(params, x);
    return out;
}

double jacobian_rank_ratio(const QuadricParams& params, const Point6& x) {
    const auto sv = numerics::singular_values(quadrics::jacobian(params, x));
    if (sv.empty() || sv[0] == 0.0) return 0.0;
    return sv[2] / sv[0];
}

ProjectionResult newton_project(const QuadricParams& params, const Point6& start, Field field,
                                const Tolerances& tol, int max_iterations) {
    ProjectionResult out;
    out.x = start;
    for (int it = 0; it < max_iterations; ++it) {
        out.residual = quadrics::membership_residual(params, out.x);
        if (out.residual <= tol.newton_residual) {
            out.converged = true;
            return out;
        }
        const auto res = quadrics::residuals(params, out.x);
        Eigen::Vector3cd f;
        f << res[0], res[1], res[2];
        Eigen::Matrix<Complex, 3, 6> j = quadrics::jacobian(params, out.x);
        // minimal-norm Gauss-Newton step J delta = -f
        Eigen::Matrix3cd jjh = j * j.adjoint();
        Eigen::Vector3cd y = jjh.fullPivLu().solve(-f);
        if (!y.allFinite()) return out;
        Eigen::Matrix<Complex, 6, 1> delta = j.adjoint() * y;
        for (int i = 0; i < 6; ++i) {
            Complex step = delta(i);
            if (field == Field::Real) step = Complex(step.real(), 0.0);
            out.x[i] += step;
        }
    }
    out.residual = quadrics::membership_residual(params, out.x);
    out.converged = out.residual <= tol.newton_residual;
    return out;
}

namespace {

// Gauss-Newton solve of the homogenized system inside chart X_k = 1,
// unknowns (X0, the five remaining affine coordinates).
struct ChartPoint {
    bool converged = false;
    Complex x0{};
    Point6 x{};
    double rank_ratio = 1.0;
};

ChartPoint sample_chart_point(const QuadricParams& params, int chart, Rng& rng,
                              const Tolerances& tol) {
    ChartPoint out;
    Complex x0 = rng.complex_normal();
    Point6 x{};
    for (int i = 0; i < 6; ++i) x[i] = rng.complex_normal();
    x[chart - 1] = Complex(1.0, 0.0);

    double scale = 1.0;
    for (double ci : params.c) scale = std::max(scale, std::abs(ci));
    for (double dj : params.d) scale = std::max(scale, std::abs(dj));

    for (int it = 0; it < 80; ++it) {
        const auto f = quadrics::evaluate_homogeneous(params, x0, x);
        double worst = 0.0;
        for (const auto& fj : f) worst = std::max(worst, std::abs(fj));
        double xmax = std::abs(x0);
        for (const auto& xi : x) xmax = std::max(xmax, std::abs(xi));
        const double denom = std::max(scale, xmax * xmax);
        if (worst / denom <= tol.newton_residual) {
            out.converged = true;
            break;
        }
        const auto jh = quadrics::jacobian_homogeneous(params, x0, x);
        // drop the column of the chart coordinate (held at 1)
        Eigen::Matrix<Complex, 3, 6> j;
        int col = 0;
        for (int i = 0; i < 7; ++i) {
            if (i == chart) continue;
            j.col(col++) = jh.col(i);
        }
        Eigen::Vector3cd fv;
        fv << f[0], f[1], f[2];
        Eigen::Matrix3cd jjh = j * j.adjoint();
        Eigen::Vector3cd y = jjh.fullPivLu().solve(-fv);
        if (!y.allFinite()) return out;
        Eigen::Matrix<Complex, 6, 1> delta = j.adjoint() * y;
        int slot = 0;
        if (chart != 0) x0 += delta(slot++);
        for (int i = 0; i < 6; ++i) {
            if (i == chart - 1) continue;
            x[i] += delta(slot++);
        }
    }
    if (!out.converged) return out;
    out.x0 = x0;
    out.x = x;
    const auto jh = quadrics::jacobian_homogeneous(params, x0, x);
    Eigen::Matrix<Complex, 3, 6> j;
    int col = 0;
    for (int i = 0; i < 7; ++i) {
        if (i == chart) continue;
        j.col(col++) = jh.col(i);
    }
    const auto sv = numerics::singular_values(j);
    out.rank_ratio = (sv[0] == 0.0) ? 0.0 : sv[2] / sv[0];
    return out;
}

}  // namespace

std::vector<ChartVerdict> projective_smoothness(const QuadricParams& params, std::uint64_t seed,
                                                int samples_per_chart, const Tolerances& tol) {
    std::vector<ChartVerdict> charts;
    charts.reserve(7);

    ChartVerdict affine;
    affine.chart = 0;
    const auto rep = complex_smoothness(params, tol);
    affine.sampled_smooth = rep.complex_smooth == Verdict::Smooth;
    charts.push_back(affine);

    for (int chart = 1; chart <= 6; ++chart) {
        ChartVerdict cv;
        cv.chart = chart;
        Rng rng = Rng::substream(seed, 7000 + chart);
        for (int k = 0; k < samples_per_chart; ++k) {
            const auto pt = sample_chart_point(params, chart, rng, tol);
            if (!pt.converged) continue;
            ++cv.points_sampled;
            cv.min_rank_ratio = std::min(cv.min_rank_ratio, pt.rank_ratio);
            if (pt.rank_ratio <= tol.rank_singular) {
                cv.sampled_smooth = false;
                cv.witness = pt.x;
                cv.witness_x0 = pt.x0;
                break;
            }
        }
        charts.push_back(cv);
    }
    return charts;
}

SmoothnessReport full_report(const QuadricParams& params, std::uint64_t seed,
                             const Tolerances& tol) {
    SmoothnessReport rep = real_smoothness(params, tol);
    const SmoothnessReport crep = complex_smoothness(params, tol);
    rep.complex_smooth = crep.complex_smooth;
    rep.complex_reason = crep.complex_reason;
    rep.complex_condition_a = crep.complex_condition_a;
    for (const auto& w : crep.witnesses) {
        bool seen = false;
        for (const auto& have : rep.witnesses)
            if (std::abs(have.b - w.b) <= 1e-12) seen = true;
        if (!seen) rep.witnesses.push_back(w);
    }
    rep.projective = projective_smoothness(params, seed, 32, tol);
    return rep;
}

}  // namespace qline::smoothness
