#pragma once

// Cauchy-Szego and Poisson-Szego kernels of the disc, polydisc and ball, and
// the positive kernel (1 - phi(z) conj(phi(z'))) C(z, z').

#include <clark/holomaps.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <span>
#include <vector>

namespace clark::kernels {

enum class KernelKind { Cauchy, Poisson, Herglotz, CPhi };

/// Hardy-space reproducing kernel C(z, z'), holomorphic in z.
///   disc:     1 / (1 - z conj(z'))
///   ball:     (1 - <z, z'>)^{-n}
///   polydisc: prod_i 1 / (1 - z_i conj(z'_i))
inline cd cauchy(const DomainDescriptor& domain, std::span<const cd> z, std::span<const cd> zp) {
    if (domain.kind() == DomainKind::Ball) {
        const cd f = 1.0 - hermitian_dot(z, zp);
        if (std::abs(f) < 1e-12) throw Error(ErrorCode::PoleProximity, "|1 - <z, z'>| < 1e-12");
        const cd inv = 1.0 / f;
        cd acc = inv;
        for (int i = 1; i < domain.dimension(); ++i) acc *= inv;
        return acc;
    }
    cd acc = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const cd f = 1.0 - z[i] * std::conj(zp[i]);
        if (std::abs(f) < 1e-12) throw Error(ErrorCode::PoleProximity, "|1 - z_i conj(z'_i)| < 1e-12");
        acc /= f;
    }
    return acc;
}

/// Poisson-Szego kernel |C(z, zeta)|^2 / C(z, z).
inline double poisson(const DomainDescriptor& domain, std::span<const cd> z, std::span<const cd> zeta) {
    return std::norm(cauchy(domain, z, zeta)) / cauchy(domain, z, z).real();
}

/// 2 C(z, zeta) - 1, whose integral is the Herglotz transform.
inline cd herglotz(const DomainDescriptor& domain, std::span<const cd> z, std::span<const cd> zeta) {
    return 2.0 * cauchy(domain, z, zeta) - 1.0;
}

inline void require_interior(const DomainDescriptor& domain, std::span<const cd> z, double margin = 0.0) {
    if (static_cast<int>(z.size()) != domain.dimension())
        throw Error(ErrorCode::DomainMismatch, "point dimension differs from the domain's");
    if (!(domain_norm(domain, z) < 1.0 - margin))
        throw Error(ErrorCode::EvaluationTooCloseToBoundary, "point is not interior to the domain");
}

/// Kernel value for an interior z and an interior (Cauchy) or boundary
/// (Poisson) second argument.
inline cd szego_kernel(const DomainDescriptor& domain, std::span<const cd> z, std::span<const cd> zp, KernelKind kind) {
    require_interior(domain, z);
    if (static_cast<int>(zp.size()) != domain.dimension())
        throw Error(ErrorCode::DomainMismatch, "point dimension differs from the domain's");
    switch (kind) {
        case KernelKind::Cauchy: return cauchy(domain, z, zp);
        case KernelKind::Poisson: return poisson(domain, z, zp);
        case KernelKind::Herglotz: return herglotz(domain, z, zp);
        case KernelKind::CPhi: break;
    }
    throw Error(ErrorCode::PreconditionViolated, "C_phi needs a symbol; use cphi_kernel");
}

/// (1 - phi(z) conj(phi(z'))) C(z, z').
inline cd cphi_kernel(const SymbolMap& phi, std::span<const cd> z, std::span<const cd> zp) {
    return (1.0 - phi(z) * std::conj(phi(zp))) * cauchy(phi.domain(), z, zp);
}

struct GramResult {
    Eigen::MatrixXcd gram;
    double min_eigenvalue = 0.0;
    double norm = 0.0;  // spectral norm of the Hermitian part
    bool has_duplicates = false;

    bool positive_semidefinite(double rel_tol = 1e-10) const { return min_eigenvalue >= -rel_tol * norm; }
};

/// Gram matrix of the C_phi kernel on the given interior points and its
/// smallest eigenvalue. Duplicate points are allowed and flagged.
inline GramResult cphi_gram(const SymbolMap& phi, const std::vector<std::vector<cd>>& points) {
    if (points.empty()) throw Error(ErrorCode::PreconditionViolated, "no points");
    const auto n = static_cast<Eigen::Index>(points.size());
    GramResult out;
    out.gram.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        require_interior(phi.domain(), points[j]);
        for (Eigen::Index k = 0; k < n; ++k) out.gram(j, k) = cphi_kernel(phi, points[j], points[k]);
    }
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = j + 1; k < n; ++k) {
            double d = 0.0;
            for (std::size_t i = 0; i < points[j].size(); ++i) d = std::max(d, std::abs(points[j][i] - points[k][i]));
            if (d < 1e-12) out.has_duplicates = true;
        }
    const Eigen::MatrixXcd herm = 0.5 * (out.gram + out.gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = solver.eigenvalues().minCoeff();
    out.norm = solver.eigenvalues().cwiseAbs().maxCoeff();
    return out;
}

}  // namespace clark::kernels
