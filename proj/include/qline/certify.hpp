#pragma once

#include <array>
#include <string>

#include "qline/line.hpp"

namespace qline::certify {

using line::ComplexLine;
using numerics::Complex;
using quadrics::Point6;
using quadrics::QuadricParams;

enum class CertVerdict { Certified, Refuted, Inconclusive };

// The five sufficient conditions for the line to avoid real points, plus an
// independent convex oracle over the line parameter.
//   H1: (d2/lambda)(c2 + lambda^2 c5) - d3 != 0
//   H2: not (c1 = c2 and c4 = c5)
//   H3: not (c1 = c3 and c4 = c6)
//   H4: mu differs from lambda and -lambda
//   H5: not all of a1, a2, a3 real
struct RealnessCertificate {
    std::array<bool, 5> hypotheses{};
    double oracle_min = 0.0;
    Complex oracle_argmin{};
    CertVerdict verdict = CertVerdict::Inconclusive;
    std::string note;
};

std::array<bool, 5> check_hypotheses(const QuadricParams& params, const ComplexLine& l,
                                     const Tolerances& tol = {});

struct OracleResult {
    Complex argmin{};
    double value = 0.0;
};

/// Exact minimizer of F(t) = sum_k Im(base_k + t dir_k)^2 over complex t.
/// Each imaginary part is affine in (Re t, Im t), so F is a convex quadratic
/// minimized by one 2x2 least-squares solve. Value 0 means a real point.
OracleResult min_imaginary_norm(const Point6& base, const Point6& direction);

/// Convenience overload on the full coordinates of an ansatz line.
OracleResult min_imaginary_norm(const ComplexLine& l);

/// Combines the hypothesis checks with the oracle. Certified requires all
/// five hypotheses and oracle_min >= tau_r * (1 + |a|_inf^2); Refuted means a
/// real point (oracle_min below a tenth of that); anything else Inconclusive.
RealnessCertificate certify_no_real_points(const QuadricParams& params, const ComplexLine& l,
                                           const Tolerances& tol = {});

/// Oracle threshold used for the given line.
double realness_threshold(const ComplexLine& l, const Tolerances& tol = {});

}  // namespace qline::certify
