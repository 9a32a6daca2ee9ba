#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qline::numerics {

using Complex = std::complex<double>;

// Coefficients in ascending degree: coeffs[k] multiplies z^k.
struct PolyCoeffs {
    std::vector<Complex> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

enum class PolyStatus { Ok, DegreeZero, ZeroPolynomial };

struct PolyRoots {
    PolyStatus status = PolyStatus::Ok;
    std::vector<Complex> roots;  // one entry per root, multiplicities repeated
};

/// Roots of z^2 + p z + q, larger-magnitude root computed first and the
/// other recovered from the product to avoid cancellation.
std::pair<Complex, Complex> solve_quadratic(Complex p, Complex q);

/// All complex roots, Newton-polished. Coefficients below
/// `leading_floor * max|coeff|` at the high end are stripped first.
PolyRoots solve_poly(const PolyCoeffs& p, double leading_floor = 1e-12);

Complex poly_eval(std::span<const Complex> coeffs, Complex z);
Complex poly_eval_derivative(std::span<const Complex> coeffs, Complex z);

std::vector<Complex> poly_mul(std::span<const Complex> a, std::span<const Complex> b);
std::vector<Complex> poly_add(std::span<const Complex> a, std::span<const Complex> b);
std::vector<Complex> poly_scale(std::span<const Complex> a, Complex s);

/// Square root with Re >= 0; on the cut (Re = 0) the branch with Im >= 0 is
/// returned, so negative reals map deterministically to +i sqrt(|z|).
Complex principal_sqrt(Complex z);

/// Singular values in descending order.
std::vector<double> singular_values(const Eigen::MatrixXcd& m);

/// Least-squares minimizer of |A x - rhs|^2; minimum-norm solution when A is
/// singular within `tol` relative to its largest singular value.
Eigen::Vector2d lstsq_2x2(const Eigen::Matrix2d& a, const Eigen::Vector2d& rhs,
                          double tol = 1e-12);

}  // namespace qline::numerics
