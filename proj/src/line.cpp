#include "qline/line.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qline::line {

namespace {

struct Coefficients {
    std::array<Complex, 3> e, g;    // radicand data
    std::array<Complex, 3> eps;     // c_k + lambda^2 c_{k+3}
    std::array<Complex, 3> nu;      // (d2/lambda) eps_k - d3
    std::array<Complex, 3> omega;   // e_k + lambda^2 g_k
};

Coefficients setup(const QuadricParams& p, const std::array<double, 3>& d, Complex lambda) {
    Coefficients s;
    s.e = {Complex(p.c[1] - p.c[2]), Complex(p.c[2] - p.c[0]), Complex(p.c[0] - p.c[1])};
    s.g = {Complex(p.c[4] - p.c[5]), Complex(p.c[5] - p.c[3]), Complex(p.c[3] - p.c[4])};
    for (int k = 0; k < 3; ++k) {
        s.eps[k] = p.c[k] + lambda * lambda * p.c[k + 3];
        s.nu[k] = (d[1] / lambda) * s.eps[k] - d[2];
        s.omega[k] = s.e[k] + lambda * lambda * s.g[k];
    }
    return s;
}

std::array<Complex, 3> w_of_mu(const Coefficients& s, Complex lambda, Complex mu) {
    return {s.e[0] + lambda * mu * s.g[0], s.e[1] + lambda * mu * s.g[1],
            s.e[2] + lambda * mu * s.g[2]};
}

}  // namespace

std::pair<Complex, Complex> solve_lambda(const std::array<double, 3>& d) {
    if (d[1] == 0.0)
        throw std::invalid_argument("solve_lambda: d2 = 0, the line ansatz is undefined");
    const Complex ratio(d[0] / d[1]);
    return numerics::solve_quadratic(-ratio, Complex(1.0));
}

std::array<Complex, 3> radicands(const QuadricParams& params, Complex mu) {
    const Complex m2 = mu * mu;
    return {(params.c[1] - params.c[2]) + m2 * (params.c[4] - params.c[5]),
            (params.c[2] - params.c[0]) + m2 * (params.c[5] - params.c[3]),
            (params.c[0] - params.c[1]) + m2 * (params.c[3] - params.c[4])};
}

std::array<Complex, 3> b_from_mu(const QuadricParams& params, Complex mu,
                                 const std::array<int, 3>& branch) {
    const auto r = radicands(params, mu);
    std::array<Complex, 3> b{};
    for (int k = 0; k < 3; ++k)
        b[k] = static_cast<double>(branch[k]) * numerics::principal_sqrt(r[k]);
    return b;
}

namespace {

std::array<Complex, 4> mu_equation_terms(const QuadricParams& params,
                                         const std::array<double, 3>& d, Complex lambda,
                                         Complex mu, const std::array<int, 3>& branch) {
    const Coefficients s = setup(params, d, lambda);
    const auto b = b_from_mu(params, mu, branch);
    const auto w = w_of_mu(s, lambda, mu);
    // the four terms as displayed: signs written out so the correspondence
    // with nu/omega/w is visible
    const Complex t1 = b[0] * b[1] * (-s.nu[0]) * s.omega[0];
    const Complex t2 = (-s.omega[1]) * s.nu[1] * w[2];
    const Complex t3 = b[0] * b[2] * s.nu[1] * (-w[1]);
    const Complex t4 = b[1] * b[2] * (-s.nu[0]) * w[0];
    return {t1, t2, t3, t4};
}

}  // namespace

Complex mu_equation_residual(const QuadricParams& params, const std::array<double, 3>& d,
                             Complex lambda, Complex mu, const std::array<int, 3>& branch) {
    const auto t = mu_equation_terms(params, d, lambda, mu, branch);
    return t[0] + t[1] + t[2] + t[3];
}

double mu_equation_scale(const QuadricParams& params, const std::array<double, 3>& d,
                         Complex lambda, Complex mu, const std::array<int, 3>& branch) {
    const auto t = mu_equation_terms(params, d, lambda, mu, branch);
    return std::max({1e-300, std::abs(t[0]), std::abs(t[1]), std::abs(t[2]), std::abs(t[3])});
}

Complex determinant_residual(const QuadricParams& params, const std::array<double, 3>& d,
                             Complex lambda, Complex mu) {
    const Coefficients s = setup(params, d, lambda);
    const auto r = radicands(params, mu);
    const auto w = w_of_mu(s, lambda, mu);
    Complex acc(0.0);
    for (int k = 0; k < 3; ++k) acc += s.nu[k] * w[k] * w[k] * r[(k + 1) % 3] * r[(k + 2) % 3];
    return acc;
}

double determinant_scale(const QuadricParams& params, const std::array<double, 3>& d,
                         Complex lambda, Complex mu) {
    const Coefficients s = setup(params, d, lambda);
    const auto r = radicands(params, mu);
    const auto w = w_of_mu(s, lambda, mu);
    double scale = 1e-300;
    for (int k = 0; k < 3; ++k)
        scale = std::max(scale,
                         std::abs(s.nu[k] * w[k] * w[k]) *
                             std::abs(r[(k + 1) % 3]) * std::abs(r[(k + 2) % 3]));
    return std::max(scale, 1.0);
}

std::array<Complex, 3> determinant_poly(const QuadricParams& params,
                                        const std::array<double, 3>& d, Complex lambda) {
    // sum_k nu_k w_k^2 R_i R_j = -(mu - lambda)^2 D(mu^2) with
    // D(m) = sum_k nu_k e_k g_k prod_{j != k} (e_j + m g_j), quadratic in m.
    const Coefficients s = setup(params, d, lambda);
    std::array<Complex, 3> coef{Complex(0.0), Complex(0.0), Complex(0.0)};
    for (int k = 0; k < 3; ++k) {
        const int i = (k + 1) % 3, j = (k + 2) % 3;
        const Complex weight = s.nu[k] * s.e[k] * s.g[k];
        coef[0] += weight * s.e[i] * s.e[j];
        coef[1] += weight * (s.e[i] * s.g[j] + s.e[j] * s.g[i]);
        coef[2] += weight * s.g[i] * s.g[j];
    }
    return coef;
}

numerics::PolyCoeffs radical_cleared_poly(const QuadricParams& params,
                                          const std::array<double, 3>& d, Complex lambda) {
    using numerics::poly_add;
    using numerics::poly_mul;
    using numerics::poly_scale;
    const Coefficients s = setup(params, d, lambda);

    // polynomials in mu (ascending)
    std::array<std::vector<Complex>, 3> R, W;
    for (int k = 0; k < 3; ++k) {
        R[k] = {s.e[k], Complex(0.0), s.g[k]};
        W[k] = {s.e[k], lambda * s.g[k]};
    }
    const std::vector<Complex> k1 = {-s.nu[0] * s.omega[0]};
    const std::vector<Complex> k2 = poly_scale(W[2], -s.omega[1] * s.nu[1]);
    const std::vector<Complex> k3 = poly_scale(W[1], -s.nu[1]);
    const std::vector<Complex> k4 = poly_scale(W[0], -s.nu[0]);

    // isolate the b1 pair, square, isolate b2 b3, square again:
    //   X = R1 R2 K1^2 + R1 R3 K3^2 - K2^2 - R2 R3 K4^2
    //   P = X^2 - 4 R2 R3 (K2 K4 - R1 K1 K3)^2
    auto x = poly_add(poly_mul(poly_mul(R[0], R[1]), poly_mul(k1, k1)),
                      poly_mul(poly_mul(R[0], R[2]), poly_mul(k3, k3)));
    x = poly_add(x, poly_scale(poly_mul(k2, k2), Complex(-1.0)));
    x = poly_add(x, poly_scale(poly_mul(poly_mul(R[1], R[2]), poly_mul(k4, k4)), Complex(-1.0)));
    auto inner = poly_add(poly_mul(k2, k4), poly_scale(poly_mul(R[0], poly_mul(k1, k3)),
                                                       Complex(-1.0)));
    auto p = poly_add(poly_mul(x, x), poly_scale(poly_mul(poly_mul(R[1], R[2]),
                                                          poly_mul(inner, inner)),
                                                 Complex(-4.0)));
    return {std::move(p)};
}

MuSolveResult solve_mu(const QuadricParams& params, const std::array<double, 3>& d,
                       Complex lambda, const Tolerances& tol) {
    static const std::array<std::array<int, 3>, 4> kBranches = {
        {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}};
    MuSolveResult out;

    auto add_candidate = [&](MuCandidate cand) {
        for (auto& seen : out.candidates) {
            if (seen.branch == cand.branch &&
                std::abs(seen.mu - cand.mu) <= tol.mu_dedupe * std::max(1.0, std::abs(cand.mu))) {
                if (seen.route != cand.route) seen.route = MuRoute::Both;
                return;
            }
        }
        out.candidates.push_back(cand);
    };

    auto make_candidate = [&](Complex mu, const std::array<int, 3>& branch, MuRoute route) {
        MuCandidate cand;
        cand.mu = mu;
        cand.branch = branch;
        cand.route = route;
        cand.radical_residual = std::abs(mu_equation_residual(params, d, lambda, mu, branch)) /
                                mu_equation_scale(params, d, lambda, mu, branch);
        cand.determinant_residual = std::abs(determinant_residual(params, d, lambda, mu)) /
                                    determinant_scale(params, d, lambda, mu);
        cand.equals_pm_lambda =
            std::abs(mu - lambda) <= tol.tau_eq * std::max(1.0, std::abs(lambda)) ||
            std::abs(mu + lambda) <= tol.tau_eq * std::max(1.0, std::abs(lambda));
        return cand;
    };

    // route 1: the radical-cleared polynomial of the four-term form
    const auto cleared = radical_cleared_poly(params, d, lambda);
    double cleared_scale = 0.0;
    for (const auto& c : cleared.coeffs) cleared_scale = std::max(cleared_scale, std::abs(c));
    if (cleared_scale == 0.0) {
        out.radical_poly_identically_zero = true;
    } else {
        const auto roots = numerics::solve_poly(cleared);
        if (roots.status == numerics::PolyStatus::Ok) {
            for (const Complex& mu : roots.roots) {
                for (const auto& branch : kBranches) {
                    const double res =
                        std::abs(mu_equation_residual(params, d, lambda, mu, branch)) /
                        mu_equation_scale(params, d, lambda, mu, branch);
                    if (res <= tol.tau_mu)
                        add_candidate(make_candidate(mu, branch, MuRoute::RadicalForm));
                }
            }
        }
    }

    // route 2: the determinant form, a quadratic in m = mu^2
    const auto dpoly = determinant_poly(params, d, lambda);
    double dscale = 0.0;
    {
        const Coefficients s = setup(params, d, lambda);
        for (int k = 0; k < 3; ++k)
            dscale = std::max(dscale, std::abs(s.nu[k]) * std::abs(s.e[k]) * std::abs(s.g[k]));
        for (const auto& c : dpoly) dscale = std::max(dscale, std::abs(c));
    }
    if (std::abs(dpoly[0]) <= 1e-13 * std::max(1.0, dscale) &&
        std::abs(dpoly[1]) <= 1e-13 * std::max(1.0, dscale) &&
        std::abs(dpoly[2]) <= 1e-13 * std::max(1.0, dscale)) {
        // the determinant form vanishes for every mu; the line family is a
        // continuum (or lives at the w = 0 collapse point). Probe a fixed
        // set: the collapse point -kappa/lambda when e is parallel to g,
        // plus canonical values; validation keeps what assembles.
        out.determinant_identically_zero = true;
        const Coefficients s = setup(params, d, lambda);
        std::vector<Complex> probes = {Complex(0.0, 1.0), Complex(0.0, -1.0), Complex(0.5),
                                       Complex(-0.5), Complex(2.0), Complex(-2.0)};
        int kbest = 0;
        double gbest = 0.0;
        for (int k = 0; k < 3; ++k)
            if (std::abs(s.g[k]) > gbest) {
                gbest = std::abs(s.g[k]);
                kbest = k;
            }
        if (gbest > 0.0) {
            const Complex kappa = s.e[kbest] / s.g[kbest];
            probes.push_back(-kappa / lambda);
            probes.push_back(kappa / lambda);
        }
        for (const Complex& mu : probes)
            for (const auto& branch : kBranches)
                add_candidate(make_candidate(mu, branch, MuRoute::DeterminantForm));
    } else {
        const auto mroots = numerics::solve_poly({{dpoly[0], dpoly[1], dpoly[2]}});
        if (mroots.status == numerics::PolyStatus::Ok) {
            for (const Complex& m : mroots.roots) {
                const Complex mu = numerics::principal_sqrt(m);
                for (const Complex& mu_signed : {mu, -mu})
                    for (const auto& branch : kBranches)
                        add_candidate(make_candidate(mu_signed, branch, MuRoute::DeterminantForm));
            }
        }
    }

    // mu = +-lambda always annihilates the determinant form; kept but flagged
    for (const Complex& mu : {lambda, -lambda})
        add_candidate(make_candidate(mu, kBranches[0], MuRoute::DeterminantForm));

    std::stable_sort(out.candidates.begin(), out.candidates.end(),
                     [](const MuCandidate& x, const MuCandidate& y) {
                         const double ax = std::abs(x.mu), ay = std::abs(y.mu);
                         if (ax != ay) return ax < ay;
                         if (x.mu.real() != y.mu.real()) return x.mu.real() < y.mu.real();
                         return x.mu.imag() < y.mu.imag();
                     });
    return out;
}

namespace {

// bilinear (unconjugated) dot product
Complex bdot(const std::array<Complex, 3>& x, const std::array<Complex, 3>& y) {
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

std::array<Complex, 3> bcross(const std::array<Complex, 3>& x, const std::array<Complex, 3>& y) {
    return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

// Recovery when w = 0: the t-linear conditions reduce to sum a_k b_k = 0.
// Since b is isotropic (sum b_k^2 = 0) it lies inside its own orthogonal
// plane; write a = alpha b + beta q with q a transverse plane vector, then
// sum a^2 = beta^2 (q.q) fixes beta and the f3 level is a quadratic in alpha.
std::vector<ARecovery> recover_collapsed(const Coefficients& s, const std::array<double, 3>& d,
                                         Complex lambda, const std::array<Complex, 3>& b) {
    std::vector<ARecovery> out;
    const Complex a0 = d[1] / lambda;

    std::array<Complex, 3> q{};
    Complex qq(0.0);
    double best = -1.0;
    for (int i = 0; i < 3; ++i) {
        std::array<Complex, 3> unit{};
        unit[i] = Complex(1.0);
        const auto cand = bcross(b, unit);
        const Complex cand_qq = bdot(cand, cand);
        const double quality = std::abs(cand_qq);
        if (quality > best) {
            best = quality;
            q = cand;
            qq = cand_qq;
        }
    }
    double bmax = std::max({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])});
    if (best <= 1e-14 * std::max(1.0, bmax * bmax)) return out;  // no transverse vector

    const Complex beta = numerics::principal_sqrt(a0 / qq);
    const Complex ca = bdot({s.eps[0] * b[0], s.eps[1] * b[1], s.eps[2] * b[2]}, b);
    const Complex cb = bdot({s.eps[0] * b[0], s.eps[1] * b[1], s.eps[2] * b[2]}, q);
    const Complex cc = bdot({s.eps[0] * q[0], s.eps[1] * q[1], s.eps[2] * q[2]}, q);

    // alpha^2 ca + 2 alpha beta cb + (beta^2 cc - d3) = 0
    numerics::PolyCoeffs poly{{beta * beta * cc - d[2], 2.0 * beta * cb, ca}};
    const auto roots = numerics::solve_poly(poly);
    std::vector<Complex> alphas;
    if (roots.status == numerics::PolyStatus::Ok)
        alphas = roots.roots;
    else if (roots.status == numerics::PolyStatus::ZeroPolynomial)
        alphas = {Complex(0.0)};  // level already satisfied along the whole plane

    for (const Complex& alpha : alphas) {
        ARecovery rec;
        rec.collapsed_w = true;
        for (int k = 0; k < 3; ++k) rec.a[k] = alpha * b[k] + beta * q[k];
        rec.scale_s = beta;
        rec.s2_from_norm = beta * beta;
        rec.s2_from_level = beta * beta;
        const Complex level =
            bdot({s.eps[0] * rec.a[0], s.eps[1] * rec.a[1], s.eps[2] * rec.a[2]}, rec.a);
        rec.s2_disagreement = std::abs(level - d[2]) / std::max({1.0, std::abs(d[2])});
        out.push_back(rec);
    }
    return out;
}

}  // namespace

std::vector<ARecovery> a_from_mu_all(const QuadricParams& params, const std::array<double, 3>& d,
                                     Complex lambda, Complex mu, const std::array<Complex, 3>& b,
                                     const Tolerances& tol) {
    const Coefficients s = setup(params, d, lambda);
    const auto w = w_of_mu(s, lambda, mu);

    double bmax = std::max({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])});
    double wmax = std::max({std::abs(w[0]), std::abs(w[1]), std::abs(w[2])});
    double wscale = 0.0;
    for (int k = 0; k < 3; ++k)
        wscale = std::max(wscale,
                          std::abs(s.e[k]) + std::abs(lambda * mu) * std::abs(s.g[k]));

    if (wmax <= 1e-10 * std::max(1.0, wscale)) return recover_collapsed(s, d, lambda, b);

    ARecovery out;
    const double b_floor = 1e-12 * std::max(1.0, bmax);
    const double w_floor = 1e-12 * std::max(1.0, wmax);
    for (int k = 0; k < 3; ++k) {
        if (std::abs(b[k]) <= b_floor && std::abs(w[k]) > w_floor) {
            out.status = ARecoveryStatus::ZeroB;  // a_k would be infinite
            return {out};
        }
    }

    // a_k b_k = s w_k; sum a_k^2 = d2/lambda and sum eps_k a_k^2 = d3 fix s^2
    Complex p(0.0), q(0.0);
    double pscale = 0.0;
    for (int k = 0; k < 3; ++k) {
        if (std::abs(b[k]) <= b_floor) continue;  // w_k ~ 0 too: a_k = 0 on this branch
        const Complex ratio = w[k] / b[k];
        p += ratio * ratio;
        q += s.eps[k] * ratio * ratio;
        pscale = std::max(pscale, std::norm(ratio));
    }
    const Complex a0 = d[1] / lambda;
    if (std::abs(p) <= 1e-11 * std::max(1e-30, pscale)) {
        out.status = ARecoveryStatus::Inconsistent;  // mu = +-lambda collapse
        return {out};
    }
    out.s2_from_norm = a0 / p;
    out.s2_from_level = (std::abs(q) > 1e-300) ? d[2] / q : Complex(0.0);
    const double denom = std::max({std::abs(a0 * q), std::abs(Complex(d[2]) * p), 1e-30});
    out.s2_disagreement = std::abs(a0 * q - d[2] * p) / denom;
    if (out.s2_disagreement > tol.s2_consistency) {
        out.status = ARecoveryStatus::Inconsistent;
        return {out};
    }

    out.scale_s = numerics::principal_sqrt(out.s2_from_norm);
    for (int k = 0; k < 3; ++k)
        out.a[k] = (std::abs(b[k]) <= b_floor) ? Complex(0.0) : out.scale_s * w[k] / b[k];
    return {out};
}

ARecovery a_from_mu(const QuadricParams& params, const std::array<double, 3>& d, Complex lambda,
                    Complex mu, const std::array<Complex, 3>& b, const Tolerances& tol) {
    auto all = a_from_mu_all(params, d, lambda, mu, b, tol);
    if (all.empty()) {
        ARecovery out;
        out.status = ARecoveryStatus::Inconsistent;
        return out;
    }
    return all.front();
}

std::array<Complex, 9> line_residuals(const QuadricParams& params, const ComplexLine& l) {
    const Point6 af = l.a_full();
    const Point6 bf = l.b_full();
    const auto quad = quadrics::evaluate(params, bf);   // t^2 coefficients
    const auto cross = quadrics::polarize(params, af, bf);
    const auto level = quadrics::residuals(params, af);  // t^0 coefficients
    std::array<Complex, 9> out{};
    for (int j = 0; j < 3; ++j) {
        out[3 * j + 0] = quad[j];
        out[3 * j + 1] = 2.0 * cross[j];
        out[3 * j + 2] = level[j];
    }
    return out;
}

double line_residual_scaled(const QuadricParams& params, const ComplexLine& l) {
    const auto res = line_residuals(params, l);
    double amax = 0.0, bmax = 0.0;
    for (int k = 0; k < 3; ++k) {
        amax = std::max(amax, std::abs(l.a[k]));
        bmax = std::max(bmax, std::abs(l.b[k]));
    }
    amax *= std::max(1.0, std::abs(l.lambda));
    bmax *= std::max(1.0, std::abs(l.mu));
    double scale = 1.0;
    for (double ci : params.c) scale = std::max(scale, std::abs(ci));
    for (double dj : params.d) scale = std::max(scale, std::abs(dj));
    scale = std::max({scale, amax * amax, bmax * bmax});
    double worst = 0.0;
    for (const auto& r : res) worst = std::max(worst, std::abs(r));
    return worst / scale;
}

ConstructResult construct_line(const QuadricParams& params, const Tolerances& tol) {
    ConstructResult out;
    if (params.d[1] == 0.0) {
        out.stages.note = "d2 = 0: lambda equation undefined";
        return out;
    }
    const auto [l1, l2] = solve_lambda(params.d);
    out.stages.lambda_solved = true;

    for (const Complex& lambda : {l1, l2}) {
        if (lambda == Complex(0.0)) continue;
        const auto mu_res = solve_mu(params, params.d, lambda, tol);
        out.stages.mu_candidates += static_cast<int>(mu_res.candidates.size());
        for (const auto& cand : mu_res.candidates) {
            if (cand.equals_pm_lambda) continue;  // a-recovery collapses there
            const auto b = b_from_mu(params, cand.mu, cand.branch);
            ++out.stages.b_assembled;
            for (const auto& rec : a_from_mu_all(params, params.d, lambda, cand.mu, b, tol)) {
                if (rec.status != ARecoveryStatus::Ok) continue;
                ++out.stages.a_recovered;

                ComplexLine l;
                l.a = rec.a;
                l.b = b;
                l.lambda = lambda;
                l.mu = cand.mu;
                l.branch = cand.branch;
                l.scale_s = rec.scale_s;
                l.max_line_residual = line_residual_scaled(params, l);
                if (l.max_line_residual > tol.line_residual) continue;
                ++out.stages.residual_passed;

                l.radical_equation_residual = cand.radical_residual;
                l.determinant_equation_residual = cand.determinant_residual;
                l.mu_not_pm_lambda = !cand.equals_pm_lambda;
                l.all_b_nonzero = true;
                double bscale = std::max({1.0, std::abs(b[0]), std::abs(b[1]), std::abs(b[2])});
                for (const auto& bk : b)
                    if (std::abs(bk) <= 1e-10 * bscale) l.all_b_nonzero = false;
                l.all_a_real = true;
                double ascale =
                    std::max({1.0, std::abs(l.a[0]), std::abs(l.a[1]), std::abs(l.a[2])});
                for (const auto& ak : l.a)
                    if (std::abs(ak.imag()) > tol.tau_eq * ascale) l.all_a_real = false;

                bool duplicate = false;
                for (const auto& seen : out.lines)
                    if (seen.branch == l.branch && std::abs(seen.lambda - lambda) <= 1e-12 &&
                        std::abs(seen.mu - l.mu) <=
                            tol.mu_dedupe * std::max(1.0, std::abs(l.mu)) &&
                        std::abs(seen.a[0] - l.a[0]) <=
                            1e-9 * std::max(1.0, std::abs(l.a[0])) &&
                        std::abs(seen.a[1] - l.a[1]) <= 1e-9 * std::max(1.0, std::abs(l.a[1])))
                        duplicate = true;
                if (!duplicate) out.lines.push_back(l);
            }
        }
    }

    if (out.lines.empty()) {
        if (out.stages.mu_candidates == 0)
            out.stages.note = "no mu candidate from either formulation (degenerate radicands)";
        else if (out.stages.a_recovered == 0)
            out.stages.note = "all mu candidates rejected during a-recovery";
        else
            out.stages.note = "recovered lines failed the membership residual gate";
    }
    return out;
}

}  // namespace qline::line
