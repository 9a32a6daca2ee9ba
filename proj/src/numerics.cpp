#include "qline/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace qline::numerics {

Complex principal_sqrt(Complex z) {
    Complex w = std::sqrt(z);
    if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
    // normalize signed zeros so equal inputs give bit-equal outputs
    if (w.real() == 0.0) w = Complex(0.0, w.imag());
    if (w.imag() == 0.0) w = Complex(w.real(), 0.0);
    return w;
}

std::pair<Complex, Complex> solve_quadratic(Complex p, Complex q) {
    if (p == Complex(0.0) && q == Complex(0.0)) return {Complex(0.0), Complex(0.0)};
    const Complex disc = principal_sqrt(p * p - 4.0 * q);
    // pick the sign that adds magnitudes instead of cancelling
    const Complex r1 = (std::real(std::conj(p) * disc) >= 0.0) ? (-p - disc) * 0.5
                                                               : (-p + disc) * 0.5;
    const Complex r2 = (r1 == Complex(0.0)) ? Complex(0.0) : q / r1;
    return {r1, r2};
}

Complex poly_eval(std::span<const Complex> coeffs, Complex z) {
    Complex acc(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Complex poly_eval_derivative(std::span<const Complex> coeffs, Complex z) {
    Complex acc(0.0);
    for (std::size_t k = coeffs.size(); k-- > 1;)
        acc = acc * z + coeffs[k] * static_cast<double>(k);
    return acc;
}

std::vector<Complex> poly_mul(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<Complex> poly_add(std::span<const Complex> a, std::span<const Complex> b) {
    std::vector<Complex> out(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<Complex> poly_scale(std::span<const Complex> a, Complex s) {
    std::vector<Complex> out(a.begin(), a.end());
    for (auto& x : out) x *= s;
    return out;
}

namespace {

// one Newton polish pass; keeps the point if the residual does not improve
Complex polish_root(std::span<const Complex> coeffs, Complex z) {
    double best = std::abs(poly_eval(coeffs, z));
    for (int it = 0; it < 24; ++it) {
        const Complex dp = poly_eval_derivative(coeffs, z);
        if (dp == Complex(0.0)) break;
        const Complex z_next = z - poly_eval(coeffs, z) / dp;
        const double r = std::abs(poly_eval(coeffs, z_next));
        if (!(r < best)) break;
        best = r;
        z = z_next;
    }
    return z;
}

}  // namespace

PolyRoots solve_poly(const PolyCoeffs& p, double leading_floor) {
    PolyRoots out;
    double scale = 0.0;
    for (const auto& c : p.coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0 || p.coeffs.empty()) {
        out.status = PolyStatus::ZeroPolynomial;
        return out;
    }
    std::vector<Complex> c = p.coeffs;
    while (c.size() > 1 && std::abs(c.back()) < leading_floor * scale) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) {
        out.status = PolyStatus::DegreeZero;
        return out;
    }
    if (deg == 1) {
        out.roots.push_back(-c[0] / c[1]);
        return out;
    }
    if (deg == 2) {
        auto [r1, r2] = solve_quadratic(c[1] / c[2], c[0] / c[2]);
        out.roots = {r1, r2};
        return out;
    }

    // companion-matrix eigenvalues, then Newton polishing
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    out.roots.reserve(deg);
    for (int i = 0; i < deg; ++i) out.roots.push_back(polish_root(c, es.eigenvalues()(i)));
    std::sort(out.roots.begin(), out.roots.end(), [](const Complex& x, const Complex& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return out;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    std::vector<double> out(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    return out;
}

Eigen::Vector2d lstsq_2x2(const Eigen::Matrix2d& a, const Eigen::Vector2d& rhs, double tol) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Vector2d y = svd.matrixU().transpose() * rhs;
    Eigen::Vector2d z = Eigen::Vector2d::Zero();
    for (int i = 0; i < 2; ++i)
        if (sv(i) > tol * sv(0)) z(i) = y(i) / sv(i);
    return svd.matrixV() * z;
}

}  // namespace qline::numerics
