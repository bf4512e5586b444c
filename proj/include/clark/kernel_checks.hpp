#pragma once

// Kernel identities in L^2(mu_alpha) evaluated against a slice field.

#include <clark/slicefield.hpp>

namespace clark::kernels {

namespace detail {

inline IdentityResidual against_constant(const SliceField& field, const std::vector<cd>& lhs_nodes, cd scale, cd rhs) {
    auto e = clark::detail::weighted_estimate(field.grid(), lhs_nodes);
    const cd lhs = scale * e.value;
    return {lhs, rhs, std::abs(lhs - rhs), std::abs(scale) * e.standard_error};
}

}  // namespace detail

/// <C(z,.), C(z',.)> in L^2(mu_alpha) against
///   (1 - phi(z) conj(phi(z'))) / ((1 - conj(alpha) phi(z)) (1 - alpha conj(phi(z')))) C(z, z').
inline IdentityResidual kernel_pairing_check(const SliceField& field, std::span<const cd> z, std::span<const cd> zp) {
    const auto& phi = field.symbol();
    const auto& domain = phi.domain();
    require_interior(domain, z);
    require_interior(domain, zp);
    const std::vector<cd> a(z.begin(), z.end()), b(zp.begin(), zp.end());
    const auto lhs = node_integrals(field, [&](std::span<const cd> zeta) {
        return cauchy(domain, a, zeta) * std::conj(cauchy(domain, b, zeta));
    });
    const cd alpha = field.alpha();
    const cd pz = phi(a), pzp = phi(b);
    const cd rhs = (1.0 - pz * std::conj(pzp)) / ((1.0 - std::conj(alpha) * pz) * (1.0 - alpha * std::conj(pzp))) *
                   cauchy(domain, a, b);
    return detail::against_constant(field, lhs, 1.0, rhs);
}

/// Pointwise form of the model-space identity: with the Clark operator
/// f -> (1 - conj(alpha) phi) C(f mu_alpha),
///   (1 - conj(alpha) phi(w)) <C(w,.), C(z,.)>_{mu_alpha} = C_phi(w, z) / (1 - alpha conj(phi(z))).
inline IdentityResidual model_kernel_image(const SliceField& field, std::span<const cd> z, std::span<const cd> w) {
    const auto& phi = field.symbol();
    const auto& domain = phi.domain();
    require_interior(domain, z);
    require_interior(domain, w);
    const std::vector<cd> zz(z.begin(), z.end()), ww(w.begin(), w.end());
    const auto lhs = node_integrals(field, [&](std::span<const cd> zeta) {
        return cauchy(domain, ww, zeta) * std::conj(cauchy(domain, zz, zeta));
    });
    const cd alpha = field.alpha();
    const cd scale = 1.0 - std::conj(alpha) * phi(ww);
    const cd rhs = cphi_kernel(phi, ww, zz) / (1.0 - alpha * std::conj(phi(zz)));
    return detail::against_constant(field, lhs, scale, rhs);
}

}  // namespace clark::kernels
