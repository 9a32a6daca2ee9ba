#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qline/quadrics.hpp"
#include "qline/tolerances.hpp"

namespace qline::smoothness {

using numerics::Complex;
using quadrics::Point6;
using quadrics::QuadricParams;

enum class Field { Real, Complex };

// A root b of the coupled system (c_i - a)(c_{i+3} - a) = b^2, i = 1,2,3,
// with a = (d3 - 2 b d2) / d1 substituted.
struct BSolution {
    Complex b{};
    Complex a{};
    std::array<double, 3> equation_residuals{};  // |(c_i-a)(c_{i+3}-a) - b^2|, scaled
};

struct BSystemResult {
    std::vector<BSolution> roots;
    bool degenerate_system = false;  // all three quadratics vanish identically
};

enum class Verdict { Smooth, NotSmooth, Inconclusive };

enum class InequalityVerdict { Holds, Fails, UndefinedForm };

struct ChartVerdict {
    int chart = 0;  // 0 = affine chart X0 = 1, 1..6 = chart X_i = 1
    bool sampled_smooth = true;
    int points_sampled = 0;
    double min_rank_ratio = 1.0;  // smallest sigma3/sigma1 over accepted samples
    std::optional<Point6> witness;
    std::optional<Complex> witness_x0;
};

struct SmoothnessReport {
    Verdict real_smooth = Verdict::Inconclusive;
    std::string real_reason;
    bool real_condition_a = false;
    bool real_possibly_empty = false;  // condition (a) holds but emptiness is not decided

    Verdict complex_smooth = Verdict::Inconclusive;
    std::string complex_reason;
    bool complex_condition_a = false;

    std::vector<BSolution> witnesses;          // roots defeating the respective criterion
    std::vector<Point6> degenerate_points;     // rank <= 2 points when constructible

    std::vector<ChartVerdict> projective;  // 7 entries when the projective pass ran
};

/// Real field: d1 > 2|d2|. Complex field: d1 != 2|d2| (both exact comparisons).
bool check_condition_a(const std::array<double, 3>& d, Field field);

/// All b satisfying the three coupled quadratics within tau_b on residuals
/// scaled by max(1, |c|_inf^2, |d|_inf^2). Requires d1 != 0.
BSystemResult solve_b_system(const QuadricParams& params, Field field,
                             const Tolerances& tol = {});

/// Disjunction of the three inequalities (c_k - a)/(b d2) >= (1 + ((c_k-a)/b)^2)/d1.
InequalityVerdict check_inequalities(const BSolution& sol, const QuadricParams& params,
                                     const Tolerances& tol = {});

/// Real-smoothness verdict, witnesses attached when defeated.
SmoothnessReport real_smoothness(const QuadricParams& params, const Tolerances& tol = {});

/// Complex-smoothness verdict.
SmoothnessReport complex_smoothness(const QuadricParams& params, const Tolerances& tol = {});

enum class DegenerateStatus { Found, NoRealPoint, SingularSystem };

struct DegeneratePointResult {
    DegenerateStatus status = DegenerateStatus::NoRealPoint;
    Point6 x{};
    double rank_ratio = 1.0;
    double residual = 0.0;
};

/// Rank-2 point from a real common root: x_{i+3} = ((c_i - a)/b) x_i and
/// (x1^2, x2^2, x3^2) from the level constraints. The constraint system is
/// rank 2 by construction (the third row equals a*row1 + 2b*row2), so the
/// solutions form a one-parameter family intersected with the nonnegative
/// octant. SingularSystem is returned when the system is inconsistent, which
/// signals that `sol` is not a genuine common root.
DegeneratePointResult degenerate_point(const QuadricParams& params, const BSolution& sol,
                                       const Tolerances& tol = {});

/// All 7 affine charts of the projective closure; chart 0 delegates to the
/// complex-smoothness criterion, charts 1..6 Newton-sample the homogenized system.
std::vector<ChartVerdict> projective_smoothness(const QuadricParams& params,
                                                std::uint64_t seed = 0,
                                                int samples_per_chart = 32,
                                                const Tolerances& tol = {});

/// Combined report: both smoothness criteria plus the 7-chart pass.
SmoothnessReport full_report(const QuadricParams& params, std::uint64_t seed = 0,
                             const Tolerances& tol = {});

struct ProjectionResult {
    bool converged = false;
    Point6 x{};
    double residual = 0.0;
};

/// Gauss-Newton projection of `start` onto {f_j = d_j}; minimal-norm steps,
/// accepted at tol.newton_residual on the scaled membership residual.
ProjectionResult newton_project(const QuadricParams& params, const Point6& start,
                                Field field, const Tolerances& tol = {},
                                int max_iterations = 60);

/// sigma3/sigma1 of the affine Jacobian at x.
double jacobian_rank_ratio(const QuadricParams& params, const Point6& x);

}  // namespace qline::smoothness
