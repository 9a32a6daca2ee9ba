#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "qline/numerics.hpp"

namespace qline::quadrics {

using numerics::Complex;

// The three quadratic forms studied here are fixed:
//   f1(x) = x1^2 + ... + x6^2
//   f2(x) = x1 x4 + x2 x5 + x3 x6
//   f3(x) = c1 x1^2 + ... + c6 x6^2
// together with the level values (d1, d2, d3).
struct QuadricParams {
    std::array<double, 6> c{};
    std::array<double, 3> d{};
};

using Point6 = std::array<Complex, 6>;

/// (f1(x), f2(x), f3(x)): the forms themselves, no level subtraction.
std::array<Complex, 3> evaluate(const QuadricParams& params, const Point6& x);

/// (f1(x) - d1, f2(x) - d2, f3(x) - d3).
std::array<Complex, 3> residuals(const QuadricParams& params, const Point6& x);

/// Largest |f_j(x) - d_j| scaled by max(1, |c|_inf, |d|_inf, |x|_inf^2).
double membership_residual(const QuadricParams& params, const Point6& x);

/// 3x6 matrix of partial derivatives d f_j / d x_i.
Eigen::Matrix<Complex, 3, 6> jacobian(const QuadricParams& params, const Point6& x);

/// Symmetric bilinear forms B_j with f_j(x + t v) = f_j(x) + 2 t B_j(x,v) + t^2 f_j(v).
std::array<Complex, 3> polarize(const QuadricParams& params, const Point6& x, const Point6& v);

/// Read-only 6x6 symmetric matrix of form j in {0,1,2}, for rank tests.
Eigen::Matrix<double, 6, 6> form_matrix(const QuadricParams& params, int j);

/// Homogenized system F_j(X0, x) = f_j(x) - d_j X0^2 for the projective charts.
std::array<Complex, 3> evaluate_homogeneous(const QuadricParams& params, Complex x0,
                                            const Point6& x);

/// 3x7 Jacobian of the homogenized system, column 0 is d/dX0.
Eigen::Matrix<Complex, 3, 7> jacobian_homogeneous(const QuadricParams& params, Complex x0,
                                                  const Point6& x);

}  // namespace qline::quadrics
