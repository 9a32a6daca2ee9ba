#pragma once

namespace qline {

// Central knob set for every acceptance decision in the pipeline.
// All thresholds are applied to residuals scaled by the quantities named
// in the respective function documentation.
struct Tolerances {
    double tau_b = 1e-9;           // b-system common-root acceptance
    double tau_mu = 1e-8;          // mu-equation residual acceptance
    double tau_r = 1e-8;           // realness oracle threshold (times 1 + |a|_inf^2)
    double tau_eq = 1e-10;         // equality tests in hypothesis checks
    double line_residual = 1e-8;   // membership gate on the nine line coefficients
    double newton_residual = 1e-10;   // accepted projection residual
    double rank_smooth = 1e-6;     // sigma3/sigma1 at or above: full rank
    double rank_singular = 1e-8;   // sigma3/sigma1 at or below: rank deficient
    double s2_consistency = 1e-7;  // relative disagreement of the two s^2 routes
    double mu_dedupe = 1e-8;       // distance merging duplicate mu candidates
    double direction_residual = 1e-7;  // membership gate for intersecting-line directions
    double direction_dedupe = 1e-6;    // projective distance merging duplicate directions
};

}  // namespace qline
