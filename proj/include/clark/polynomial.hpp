#pragma once

// Dense complex polynomials in ascending coefficient order and their roots.

#include <clark/errors.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace clark::poly {

using cd = std::complex<double>;
using Coeffs = std::vector<cd>;

inline cd eval(std::span<const cd> c, cd w) {
    cd acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * w + c[i];
    return acc;
}

/// Value and first derivative in one Horner pass.
inline std::pair<cd, cd> eval_with_derivative(std::span<const cd> c, cd w) {
    cd p = 0.0, dp = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
        dp = dp * w + p;
        p = p * w + c[i];
    }
    return {p, dp};
}

inline Coeffs derivative(std::span<const cd> c) {
    if (c.size() <= 1) return {cd(0.0)};
    Coeffs d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

inline Coeffs multiply(std::span<const cd> a, std::span<const cd> b) {
    if (a.empty() || b.empty()) return {};
    Coeffs r(a.size() + b.size() - 1, cd(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline Coeffs add(std::span<const cd> a, std::span<const cd> b, cd scale_b = 1.0) {
    Coeffs r(std::max(a.size(), b.size()), cd(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += scale_b * b[i];
    return r;
}

inline double max_abs(std::span<const cd> c) {
    double m = 0.0;
    for (const auto& x : c) m = std::max(m, std::abs(x));
    return m;
}

/// Drops leading coefficients that are negligible relative to the largest one.
inline Coeffs trim(Coeffs c, double rel_tol = 1e-14) {
    const double scale = max_abs(c);
    while (c.size() > 1 && std::abs(c.back()) <= rel_tol * scale) c.pop_back();
    if (c.empty()) c.push_back(0.0);
    return c;
}

inline int degree(std::span<const cd> c) {
    const Coeffs t = trim(Coeffs(c.begin(), c.end()));
    return static_cast<int>(t.size()) - 1;
}

/// All roots of a polynomial via the eigenvalues of its companion matrix,
/// each polished by Newton steps on the original coefficients.
inline std::vector<cd> roots(std::span<const cd> coeffs) {
    const Coeffs c = trim(Coeffs(coeffs.begin(), coeffs.end()));
    const int d = static_cast<int>(c.size()) - 1;
    if (d <= 0) return {};
    if (d == 1) return {-c[0] / c[1]};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[i] / c[d];

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::RootFindingFailed, "companion eigensolve did not converge");

    std::vector<cd> r(d);
    for (int i = 0; i < d; ++i) {
        cd z = solver.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            const auto [p, dp] = eval_with_derivative(c, z);
            if (dp == cd(0.0)) break;
            const cd step = p / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            // a Newton step far larger than the eigenvalue's own scale means the
            // root is multiple or ill-conditioned; keep the eigenvalue then
            if (std::abs(step) > 1e-3 * (1.0 + std::abs(z))) break;
            z -= step;
        }
        r[i] = z;
    }
    return r;
}

}  // namespace clark::poly
