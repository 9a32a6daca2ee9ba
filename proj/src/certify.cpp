#include "qline/certify.hpp"

#include <algorithm>
#include <cmath>

namespace qline::certify {

std::array<bool, 5> check_hypotheses(const QuadricParams& params, const ComplexLine& l,
                                     const Tolerances& tol) {
    std::array<bool, 5> h{};
    const auto& c = params.c;
    const auto& d = params.d;
    const Complex lambda = l.lambda;

    double cmax = 0.0;
    for (double ci : c) cmax = std::max(cmax, std::abs(ci));
    const double c_eq = tol.tau_eq * std::max(1.0, cmax);

    const Complex nu2 = (d[1] / lambda) * (c[1] + lambda * lambda * c[4]) - d[2];
    const double nu2_scale = std::max({1.0, std::abs((d[1] / lambda)) *
                                                std::abs(c[1] + lambda * lambda * c[4]),
                                       std::abs(d[2])});
    h[0] = std::abs(nu2) > tol.tau_eq * nu2_scale;
    h[1] = !(std::abs(c[0] - c[1]) <= c_eq && std::abs(c[3] - c[4]) <= c_eq);
    h[2] = !(std::abs(c[0] - c[2]) <= c_eq && std::abs(c[3] - c[5]) <= c_eq);
    const double l_eq = tol.tau_eq * std::max(1.0, std::abs(lambda));
    h[3] = std::abs(l.mu - lambda) > l_eq && std::abs(l.mu + lambda) > l_eq;

    double amax = 0.0;
    for (const auto& ak : l.a) amax = std::max(amax, std::abs(ak));
    const double a_eq = tol.tau_eq * std::max(1.0, amax);
    bool all_real = true;
    for (const auto& ak : l.a)
        if (std::abs(ak.imag()) > a_eq) all_real = false;
    h[4] = !all_real;
    return h;
}

OracleResult min_imaginary_norm(const Point6& base, const Point6& direction) {
    // Im(base_k + t dir_k) = Im base_k + Re(t) Im dir_k + Im(t) Re dir_k
    Eigen::Matrix<double, 6, 2> m;
    Eigen::Matrix<double, 6, 1> rhs;
    for (int k = 0; k < 6; ++k) {
        m(k, 0) = direction[k].imag();
        m(k, 1) = direction[k].real();
        rhs(k) = base[k].imag();
    }
    const Eigen::Matrix2d normal = m.transpose() * m;
    const Eigen::Vector2d b = -m.transpose() * rhs;
    const Eigen::Vector2d t = numerics::lstsq_2x2(normal, b);
    OracleResult out;
    out.argmin = Complex(t(0), t(1));
    out.value = (m * t + rhs).squaredNorm();
    return out;
}

OracleResult min_imaginary_norm(const ComplexLine& l) {
    return min_imaginary_norm(l.a_full(), l.b_full());
}

double realness_threshold(const ComplexLine& l, const Tolerances& tol) {
    double amax = 0.0;
    for (const auto& ak : l.a_full()) amax = std::max(amax, std::abs(ak));
    return tol.tau_r * (1.0 + amax * amax);
}

RealnessCertificate certify_no_real_points(const QuadricParams& params, const ComplexLine& l,
                                           const Tolerances& tol) {
    RealnessCertificate cert;
    cert.hypotheses = check_hypotheses(params, l, tol);
    const auto oracle = min_imaginary_norm(l);
    cert.oracle_min = oracle.value;
    cert.oracle_argmin = oracle.argmin;

    const double threshold = realness_threshold(l, tol);
    const bool all_hypotheses =
        cert.hypotheses[0] && cert.hypotheses[1] && cert.hypotheses[2] && cert.hypotheses[3] &&
        cert.hypotheses[4];

    if (oracle.value <= threshold / 10.0) {
        cert.verdict = CertVerdict::Refuted;
        cert.note = all_hypotheses ? "real point found despite all hypotheses; "
                                     "this contradicts the sufficient conditions"
                                   : "real point found";
        return cert;
    }
    if (all_hypotheses && oracle.value >= threshold) {
        cert.verdict = CertVerdict::Certified;
        return cert;
    }
    cert.verdict = CertVerdict::Inconclusive;
    if (!all_hypotheses && oracle.value >= threshold)
        cert.note = "hypotheses fail but the oracle finds no real point; the "
                    "sufficient conditions are not necessary";
    else
        cert.note = "oracle minimum in the ambiguous band";
    return cert;
}

}  // namespace qline::certify
