#include "qline/quadrics.hpp"

#include <algorithm>
#include <cmath>

namespace qline::quadrics {

std::array<Complex, 3> evaluate(const QuadricParams& params, const Point6& x) {
    Complex f1(0.0), f2(0.0), f3(0.0);
    for (int i = 0; i < 6; ++i) {
        f1 += x[i] * x[i];
        f3 += params.c[i] * x[i] * x[i];
    }
    for (int i = 0; i < 3; ++i) f2 += x[i] * x[i + 3];
    return {f1, f2, f3};
}

std::array<Complex, 3> residuals(const QuadricParams& params, const Point6& x) {
    auto f = evaluate(params, x);
    for (int j = 0; j < 3; ++j) f[j] -= params.d[j];
    return f;
}

double membership_residual(const QuadricParams& params, const Point6& x) {
    const auto r = residuals(params, x);
    double xmax = 0.0;
    for (const auto& xi : x) xmax = std::max(xmax, std::abs(xi));
    double scale = 1.0;
    for (double ci : params.c) scale = std::max(scale, std::abs(ci));
    for (double dj : params.d) scale = std::max(scale, std::abs(dj));
    scale = std::max(scale, xmax * xmax);
    double worst = 0.0;
    for (const auto& rj : r) worst = std::max(worst, std::abs(rj));
    return worst / scale;
}

Eigen::Matrix<Complex, 3, 6> jacobian(const QuadricParams& params, const Point6& x) {
    Eigen::Matrix<Complex, 3, 6> j;
    for (int i = 0; i < 6; ++i) {
        j(0, i) = 2.0 * x[i];
        j(2, i) = 2.0 * params.c[i] * x[i];
    }
    for (int i = 0; i < 3; ++i) {
        j(1, i) = x[i + 3];
        j(1, i + 3) = x[i];
    }
    return j;
}

std::array<Complex, 3> polarize(const QuadricParams& params, const Point6& x, const Point6& v) {
    Complex b1(0.0), b2(0.0), b3(0.0);
    for (int i = 0; i < 6; ++i) {
        b1 += x[i] * v[i];
        b3 += params.c[i] * (x[i] * v[i]);  // grouping keeps B3(x,v) == B3(v,x) bitwise
    }
    for (int i = 0; i < 3; ++i) b2 += 0.5 * (x[i] * v[i + 3] + x[i + 3] * v[i]);
    return {b1, b2, b3};
}

Eigen::Matrix<double, 6, 6> form_matrix(const QuadricParams& params, int j) {
    Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
    switch (j) {
        case 0:
            m.setIdentity();
            break;
        case 1:
            for (int i = 0; i < 3; ++i) {
                m(i, i + 3) = 0.5;
                m(i + 3, i) = 0.5;
            }
            break;
        default:
            for (int i = 0; i < 6; ++i) m(i, i) = params.c[i];
            break;
    }
    return m;
}

std::array<Complex, 3> evaluate_homogeneous(const QuadricParams& params, Complex x0,
                                            const Point6& x) {
    auto f = evaluate(params, x);
    for (int j = 0; j < 3; ++j) f[j] -= params.d[j] * x0 * x0;
    return f;
}

Eigen::Matrix<Complex, 3, 7> jacobian_homogeneous(const QuadricParams& params, Complex x0,
                                                  const Point6& x) {
    Eigen::Matrix<Complex, 3, 7> j;
    const auto affine = jacobian(params, x);
    for (int r = 0; r < 3; ++r) {
        j(r, 0) = -2.0 * params.d[r] * x0;
        for (int i = 0; i < 6; ++i) j(r, i + 1) = affine(r, i);
    }
    return j;
}

}  // namespace qline::quadrics
