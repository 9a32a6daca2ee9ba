#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qline/quadrics.hpp"
#include "qline/tolerances.hpp"

namespace qline::line {

using numerics::Complex;
using quadrics::Point6;
using quadrics::QuadricParams;

// A line x(t) = a + t b in C^6 obeying the symmetric ansatz
//   a4 = lambda a1, a5 = lambda a2, a6 = lambda a3,
//   b4 = mu b1,     b5 = mu b2,     b6 = mu b3.
// Only (a1,a2,a3) and (b1,b2,b3) are stored; the tail is derived.
struct ComplexLine {
    std::array<Complex, 3> a{};
    std::array<Complex, 3> b{};
    Complex lambda{};
    Complex mu{};
    std::array<int, 3> branch{1, 1, 1};  // sign of each b_k radical
    Complex scale_s{};                   // normalization factor of the a-recovery

    Point6 a_full() const {
        return {a[0], a[1], a[2], lambda * a[0], lambda * a[1], lambda * a[2]};
    }
    Point6 b_full() const { return {b[0], b[1], b[2], mu * b[0], mu * b[1], mu * b[2]}; }
    Point6 point_at(Complex t) const {
        const Point6 af = a_full();
        const Point6 bf = b_full();
        Point6 p{};
        for (int i = 0; i < 6; ++i) p[i] = af[i] + t * bf[i];
        return p;
    }

    // annotations used by the certifier
    bool mu_not_pm_lambda = true;
    bool all_b_nonzero = true;
    bool all_a_real = false;
    double max_line_residual = 0.0;
    double radical_equation_residual = 0.0;      // the four-term radical form
    double determinant_equation_residual = 0.0;  // the s^2-compatibility form
};

// How a mu value entered the candidate set. The four-term radical form is
// evaluated verbatim; the determinant form is the s^2-consistency condition
// derived from the a-recovery. The two disagree on generic parameters (see
// tests/test_line.cpp); membership of the assembled line is the ground truth.
enum class MuRoute { RadicalForm, DeterminantForm, Both };

struct MuCandidate {
    Complex mu{};
    std::array<int, 3> branch{1, 1, 1};
    double radical_residual = 0.0;      // scaled |four-term form| on this branch
    double determinant_residual = 0.0;  // scaled |determinant form|
    MuRoute route = MuRoute::DeterminantForm;
    bool equals_pm_lambda = false;  // flagged: such roots never yield a line
};

/// Both roots of lambda^2 - (d1/d2) lambda + 1 = 0. Throws when d2 = 0
/// (the ansatz is undefined there).
std::pair<Complex, Complex> solve_lambda(const std::array<double, 3>& d);

/// The three radicands (e_k + mu^2 g_k) with
///   e = (c2-c3, c3-c1, c1-c2), g = (c5-c6, c6-c4, c4-c5).
std::array<Complex, 3> radicands(const QuadricParams& params, Complex mu);

/// b_k = branch_k * principal_sqrt(radicand_k). The radicands telescope, so
/// b1^2 + b2^2 + b3^2 = 0 identically in mu.
std::array<Complex, 3> b_from_mu(const QuadricParams& params, Complex mu,
                                 const std::array<int, 3>& branch);

/// The four-term radical equation evaluated verbatim on the given branch.
Complex mu_equation_residual(const QuadricParams& params, const std::array<double, 3>& d,
                             Complex lambda, Complex mu, const std::array<int, 3>& branch);

/// Magnitude of the largest of the four terms (residual normalization).
double mu_equation_scale(const QuadricParams& params, const std::array<double, 3>& d,
                         Complex lambda, Complex mu, const std::array<int, 3>& branch);

/// Determinant form of the mu-condition: sum_k nu_k w_k^2 R_i R_j with
///   nu_k = (d2/lambda)(c_k + lambda^2 c_{k+3}) - d3,
///   w_k  = e_k + lambda mu g_k,  R_k the radicands.
/// It factors as -(mu - lambda)^2 * D(mu^2); a line exists at mu exactly when
/// this vanishes and mu != +-lambda.
Complex determinant_residual(const QuadricParams& params, const std::array<double, 3>& d,
                             Complex lambda, Complex mu);

double determinant_scale(const QuadricParams& params, const std::array<double, 3>& d,
                         Complex lambda, Complex mu);

/// Coefficients (ascending in m = mu^2) of the quadratic D(m).
std::array<Complex, 3> determinant_poly(const QuadricParams& params,
                                        const std::array<double, 3>& d, Complex lambda);

/// The radical-cleared polynomial of the four-term form (degree <= 12 in mu):
/// the norm over the four branch classes, obtained by isolating the b1-pair
/// and squaring twice.
numerics::PolyCoeffs radical_cleared_poly(const QuadricParams& params,
                                          const std::array<double, 3>& d, Complex lambda);

struct MuSolveResult {
    std::vector<MuCandidate> candidates;
    bool determinant_identically_zero = false;  // every mu admissible (e = g family)
    bool radical_poly_identically_zero = false;
};

/// Candidates from both formulations, deduplicated per branch class, with
/// mu = +-lambda retained but flagged.
MuSolveResult solve_mu(const QuadricParams& params, const std::array<double, 3>& d,
                       Complex lambda, const Tolerances& tol = {});

enum class ARecoveryStatus { Ok, ZeroB, Inconsistent };

struct ARecovery {
    ARecoveryStatus status = ARecoveryStatus::Ok;
    std::array<Complex, 3> a{};
    Complex scale_s{};
    Complex s2_from_norm{};   // s^2 forced by sum a_k^2 = d2/lambda
    Complex s2_from_level{};  // s^2 forced by sum eps_k a_k^2 = d3
    double s2_disagreement = 0.0;  // relative gap between the two
    bool collapsed_w = false;      // recovery ran in the w = 0 regime
};

/// Recovers (a1,a2,a3): the t-linear conditions force (a_k b_k) = s * w_k,
/// the t-free conditions determine s^2 twice; consistency of the two is the
/// determinant form of the mu-condition.
///
/// When w vanishes identically (which happens at mu = -kappa/lambda on the
/// families with e parallel to g, kappa the ratio), the t-linear conditions
/// only force (a_k b_k) orthogonal to (1,1,1); the recovery then intersects
/// the plane sum a_k b_k = 0 with the two level quadrics, giving up to two
/// solutions. In that regime scale_s holds the coefficient of the transverse
/// basis vector and s2_disagreement the residual of the second level.
ARecovery a_from_mu(const QuadricParams& params, const std::array<double, 3>& d, Complex lambda,
                    Complex mu, const std::array<Complex, 3>& b, const Tolerances& tol = {});

/// All recoveries at this mu (one generically, up to two in the collapsed
/// regime). construct_line consumes this form.
std::vector<ARecovery> a_from_mu_all(const QuadricParams& params, const std::array<double, 3>& d,
                                     Complex lambda, Complex mu,
                                     const std::array<Complex, 3>& b,
                                     const Tolerances& tol = {});

/// Nine expansion coefficients of f_j(a + t b) - d_j: per j, the t^2, t^1 and
/// t^0 coefficients in that order.
std::array<Complex, 9> line_residuals(const QuadricParams& params, const ComplexLine& l);

/// Largest of the nine magnitudes scaled by max(1,|c|inf,|d|inf,|a|inf^2,|b|inf^2).
double line_residual_scaled(const QuadricParams& params, const ComplexLine& l);

struct StageReport {
    bool lambda_solved = false;
    int mu_candidates = 0;
    int b_assembled = 0;
    int a_recovered = 0;
    int residual_passed = 0;
    std::string note;
};

struct ConstructResult {
    std::vector<ComplexLine> lines;  // ordered by (lambda root, branch, |mu|)
    StageReport stages;
};

/// Full pipeline over both lambda roots, all branch classes and all accepted
/// mu. Every returned line satisfies the nine membership coefficients at
/// tol.line_residual. Empty `lines` with a stage note means no line found.
ConstructResult construct_line(const QuadricParams& params, const Tolerances& tol = {});

}  // namespace qline::line
