#pragma once

// Clark measures on the polydisc and the ball, stored as their disintegration
// along the circle orbits of the boundary: one classical Clark measure per
// quotient node, namely that of the restriction of the symbol to the slice
// disc through the node.

#include <clark/clark1d.hpp>
#include <clark/kernels.hpp>

#include <memory>
#include <mutex>
#include <numeric>
#include <string>

namespace clark {

/// A quadrature value with its Monte Carlo standard error (zero on
/// deterministic grids).
struct Estimate {
    cd value;
    double standard_error = 0.0;
};

namespace detail {

// Weighted sum of per-node values; on stochastic grids also the standard
// error of the (equal-weight) mean.
inline Estimate weighted_estimate(const QuadratureGrid& grid, const std::vector<cd>& values) {
    Estimate e;
    for (std::size_t i = 0; i < values.size(); ++i) e.value += grid.nodes[i].weight * values[i];
    if (grid.error.stochastic && values.size() > 1) {
        double ss = 0.0;
        for (const auto& v : values) ss += std::norm(v - e.value);
        const double n = static_cast<double>(values.size());
        e.standard_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return e;
}

}  // namespace detail

struct FieldOptions {
    DensityResolution resolution;
    /// Keep computed slices. Turn off for large Monte Carlo grids that are
    /// integrated once.
    bool cache = true;
};

class SliceField {
public:
    SliceField(SymbolMap symbol, cd alpha, QuadratureGrid qgrid, int slice_res, FieldOptions options = {})
        : symbol_(std::move(symbol)), alpha_(alpha), grid_(std::move(qgrid)), slice_res_(slice_res), options_(options) {
        detail::require_unimodular(alpha_);
        alpha_ /= std::abs(alpha_);
        if (grid_.target != GridTarget::BetaHat)
            throw Error(ErrorCode::PreconditionViolated, "slice fields are built over a quotient grid");
        if (!(grid_.domain == symbol_.domain()))
            throw Error(ErrorCode::DomainMismatch, "quotient grid and symbol live on different domains");
        if (options_.cache) {
            cache_ = std::make_shared<Cache>();
            cache_->slices.resize(grid_.size());
            cache_->once = std::make_unique<std::once_flag[]>(grid_.size());
        }
    }

    const SymbolMap& symbol() const noexcept { return symbol_; }
    cd alpha() const noexcept { return alpha_; }
    const QuadratureGrid& grid() const noexcept { return grid_; }
    int slice_resolution() const noexcept { return slice_res_; }
    std::size_t size() const noexcept { return grid_.size(); }
    const BoundaryPoint& representative(std::size_t i) const { return grid_.nodes[i].point; }
    double weight(std::size_t i) const { return grid_.nodes[i].weight; }

    RationalSelfMap1D slice_symbol(std::size_t i) const { return slice_restrict(symbol_, representative(i)); }

    /// Clark measure of the slice through node i, computed without touching the cache.
    BoundaryMeasure1D compute_slice(std::size_t i) const {
        try {
            return clark_measure_1d(slice_symbol(i), alpha_, slice_res_, options_.resolution);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()).substr(e.name().size() + 2) + " [quotient node " + std::to_string(i) + "]");
        }
    }

    /// Slice measure at node i; filled at most once per node, safe to call
    /// concurrently. Without a cache the slice is recomputed on every call.
    BoundaryMeasure1D slice(std::size_t i) const {
        if (!cache_) return compute_slice(i);
        std::call_once(cache_->once[i], [&] { cache_->slices[i] = compute_slice(i); });
        return *cache_->slices[i];
    }

    /// Calls fn(i, measure) for every node, in node order, without copying cached slices.
    template <class Fn>
    void for_each_slice(Fn&& fn) const {
        for (std::size_t i = 0; i < size(); ++i) {
            if (cache_) {
                std::call_once(cache_->once[i], [&] { cache_->slices[i] = compute_slice(i); });
                fn(i, *cache_->slices[i]);
            } else {
                fn(i, compute_slice(i));
            }
        }
    }

private:
    struct Cache {
        std::vector<std::optional<BoundaryMeasure1D>> slices;
        std::unique_ptr<std::once_flag[]> once;
    };

    SymbolMap symbol_;
    cd alpha_;
    QuadratureGrid grid_;
    int slice_res_;
    FieldOptions options_;
    std::shared_ptr<Cache> cache_;
};

inline SliceField clark_field(const SymbolMap& symbol, cd alpha, const QuadratureGrid& qgrid, int slice_res,
                              FieldOptions options = {}) {
    return SliceField(symbol, alpha, qgrid, slice_res, options);
}

/// Integral of a slice measure (living on the orbit of zeta0) of f(zeta).
template <class F>
cd integrate_slice(const BoundaryMeasure1D& mu, const BoundaryPoint& zeta0, F&& f, std::vector<cd>& buf) {
    buf.resize(zeta0.size());
    return mu.integrate([&](cd t) {
        for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = t * zeta0.coords[k];
        return cd(f(std::span<const cd>(buf)));
    });
}

/// Per-node slice integrals of f.
template <class F>
std::vector<cd> node_integrals(const SliceField& field, F&& f) {
    std::vector<cd> values(field.size());
    std::vector<cd> buf;
    field.for_each_slice([&](std::size_t i, const BoundaryMeasure1D& mu) {
        values[i] = integrate_slice(mu, field.representative(i), f, buf);
    });
    return values;
}

/// Integral of f(zeta) against mu_alpha: quotient weights times slice integrals.
template <class F>
Estimate integrate_field_estimate(const SliceField& field, F&& f) {
    return detail::weighted_estimate(field.grid(), node_integrals(field, std::forward<F>(f)));
}

template <class F>
cd integrate_field(const SliceField& field, F&& f) {
    return integrate_field_estimate(field, std::forward<F>(f)).value;
}

inline Estimate field_total_mass(const SliceField& field) {
    return integrate_field_estimate(field, [](std::span<const cd>) { return cd(1.0); });
}

/// Closed forms for the transforms of mu_alpha[phi].
inline double clark_poisson_closed_form(cd phi_z, cd alpha) { return ((alpha + phi_z) / (alpha - phi_z)).real(); }

inline cd clark_cauchy_closed_form(cd phi_z, cd phi0, cd alpha) {
    const cd a = alpha * std::conj(phi0);
    return 1.0 / (1.0 - std::conj(alpha) * phi_z) + a / (1.0 - a);
}

/// Poisson or Cauchy integral of mu_alpha at an interior point.
inline Estimate field_transform_estimate(const SliceField& field, std::span<const cd> z, TransformMode mode) {
    const auto& domain = field.symbol().domain();
    if (static_cast<int>(z.size()) != domain.dimension())
        throw Error(ErrorCode::DomainMismatch, "point dimension differs from the domain's");
    if (!(domain_norm(domain, z) <= 1.0 - 1e-6))
        throw Error(ErrorCode::EvaluationTooCloseToBoundary, "field transform needs a point at norm <= 1 - 1e-6");
    const std::vector<cd> zz(z.begin(), z.end());
    switch (mode) {
        case TransformMode::Poisson:
            return integrate_field_estimate(field, [&](std::span<const cd> zeta) { return cd(kernels::poisson(domain, zz, zeta)); });
        case TransformMode::Cauchy:
            return integrate_field_estimate(field, [&](std::span<const cd> zeta) { return kernels::cauchy(domain, zz, zeta); });
        case TransformMode::Herglotz:
            return integrate_field_estimate(field, [&](std::span<const cd> zeta) { return kernels::herglotz(domain, zz, zeta); });
    }
    return {};
}

inline cd field_transform(const SliceField& field, std::span<const cd> z, TransformMode mode) {
    return field_transform_estimate(field, z, mode).value;
}

/// One-variable Poisson integral of the slice measure at node i, evaluated
/// at w (the point w * zeta0 of the slice disc).
inline double slice_poisson(const SliceField& field, std::size_t i, cd w) {
    return transform_1d(field.slice(i), w, TransformMode::Poisson).real();
}

/// k-th trigonometric moment of the slice measure at node i in the slice
/// coordinate: integral of t^k.
inline cd slice_moment(const BoundaryMeasure1D& mu, int k) {
    return mu.integrate([k](cd t) { return std::pow(t, k); });
}

/// Boundary integral of f against the invariant probability measure, with
/// per-quotient-node values (for pairing with field integrals on the same nodes).
template <class F>
std::vector<cd> boundary_node_integrals(const QuadratureGrid& qgrid, int slice_nodes, F&& f) {
    std::vector<cd> rots(slice_nodes);
    for (int k = 0; k < slice_nodes; ++k) rots[k] = std::polar(1.0, kTwoPi * k / slice_nodes);
    std::vector<cd> values(qgrid.size());
    std::vector<cd> buf;
    for (std::size_t i = 0; i < qgrid.size(); ++i) {
        const auto& z0 = qgrid.nodes[i].point.coords;
        buf.resize(z0.size());
        cd s = 0.0;
        for (const auto& r : rots) {
            for (std::size_t c = 0; c < z0.size(); ++c) buf[c] = r * z0[c];
            s += f(std::span<const cd>(buf));
        }
        values[i] = s / static_cast<double>(slice_nodes);
    }
    return values;
}

template <class F>
Estimate integrate_boundary(const QuadratureGrid& qgrid, int slice_nodes, F&& f) {
    return detail::weighted_estimate(qgrid, boundary_node_integrals(qgrid, slice_nodes, std::forward<F>(f)));
}

/// lhs versus rhs of an identity, with the standard error of their
/// difference on stochastic grids.
struct IdentityResidual {
    cd lhs;
    cd rhs;
    double residual = 0.0;
    double standard_error = 0.0;
};

namespace detail {

inline IdentityResidual paired(const QuadratureGrid& grid, const std::vector<cd>& lhs, const std::vector<cd>& rhs) {
    std::vector<cd> diff(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) diff[i] = lhs[i] - rhs[i];
    const auto l = weighted_estimate(grid, lhs);
    const auto r = weighted_estimate(grid, rhs);
    const auto d = weighted_estimate(grid, diff);
    return {l.value, r.value, std::abs(l.value - r.value), d.standard_error};
}

}  // namespace detail

inline std::vector<cd> alpha_grid(int count) {
    std::vector<cd> a(count);
    for (int j = 0; j < count; ++j) a[j] = std::polar(1.0, kTwoPi * j / count);
    return a;
}

/// Per-node slice integrals of several functions in one pass over the
/// slices; result[f][i].
template <class F>
std::vector<std::vector<cd>> node_integrals_many(const SliceField& field, const std::vector<F>& fs) {
    std::vector<std::vector<cd>> values(fs.size(), std::vector<cd>(field.size()));
    std::vector<cd> buf;
    field.for_each_slice([&](std::size_t i, const BoundaryMeasure1D& mu) {
        for (std::size_t k = 0; k < fs.size(); ++k) values[k][i] = integrate_slice(mu, field.representative(i), fs[k], buf);
    });
    return values;
}

/// Average over alpha of the Clark measures, tested on each f, against the
/// boundary integral of f. Both sides use the same quotient nodes.
template <class F>
std::vector<IdentityResidual> aleksandrov_average_many(const SymbolMap& symbol, const std::vector<F>& fs, int alpha_count,
                                                       const QuadratureGrid& qgrid, int slice_res,
                                                       FieldOptions options = {}) {
    if (alpha_count <= 0) throw Error(ErrorCode::UnsupportedResolution, "alpha grid must be positive");
    std::vector<std::vector<cd>> lhs(fs.size(), std::vector<cd>(qgrid.size(), cd(0.0)));
    for (const cd& a : alpha_grid(alpha_count)) {
        const SliceField field(symbol, a, qgrid, slice_res, options);
        const auto v = node_integrals_many(field, fs);
        for (std::size_t k = 0; k < fs.size(); ++k)
            for (std::size_t i = 0; i < qgrid.size(); ++i) lhs[k][i] += v[k][i] / static_cast<double>(alpha_count);
    }
    std::vector<IdentityResidual> out;
    for (std::size_t k = 0; k < fs.size(); ++k)
        out.push_back(detail::paired(qgrid, lhs[k], boundary_node_integrals(qgrid, slice_res, fs[k])));
    return out;
}

template <class F>
IdentityResidual aleksandrov_average(const SymbolMap& symbol, F f, int alpha_count, const QuadratureGrid& qgrid,
                                     int slice_res, FieldOptions options = {}) {
    return aleksandrov_average_many(symbol, std::vector<F>{std::move(f)}, alpha_count, qgrid, slice_res, options).front();
}

struct CompositionResult {
    IdentityResidual residual;
    bool used_density_quadrature = false;
};

/// mu_alpha[psi o phi] against the superposition of the fields mu_{a'}[phi]
/// over a' distributed by mu_alpha[psi]. Atoms of mu_alpha[psi] are summed
/// exactly; its density (absent when psi is inner) by the trapezoid rule on
/// `density_nodes` points.
template <class F>
std::vector<CompositionResult> compose_clark_many(const SymbolMap& phi, const RationalSelfMap1D& psi, cd alpha,
                                                  const std::vector<F>& fs, const QuadratureGrid& qgrid, int slice_res,
                                                  int density_nodes = 512, FieldOptions options = {}) {
    const SymbolMap composite = phi.post_composed(psi);
    const SliceField lhs_field(composite, alpha, qgrid, slice_res, options);
    const auto lhs = node_integrals_many(lhs_field, fs);

    std::vector<std::vector<cd>> rhs(fs.size(), std::vector<cd>(qgrid.size(), cd(0.0)));
    const auto add_field = [&](cd a, double mass) {
        const SliceField field(phi, a, qgrid, slice_res, options);
        const auto v = node_integrals_many(field, fs);
        for (std::size_t k = 0; k < fs.size(); ++k)
            for (std::size_t i = 0; i < qgrid.size(); ++i) rhs[k][i] += mass * v[k][i];
    };
    bool used_density = false;
    const auto outer = clark_measure_1d(psi, alpha, density_nodes, {.adaptive = false});
    for (const auto& atom : outer.atoms()) add_field(atom.position, atom.mass);
    if (!psi.is_inner() && outer.has_density()) {
        used_density = true;
        for (int j = 0; j < outer.grid_size(); ++j)
            if (outer.weights()[j] != 0.0)
                add_field(std::polar(1.0, outer.theta(j)), outer.weights()[j] / outer.grid_size());
    }
    std::vector<CompositionResult> out;
    for (std::size_t k = 0; k < fs.size(); ++k) out.push_back({detail::paired(qgrid, lhs[k], rhs[k]), used_density});
    return out;
}

template <class F>
CompositionResult compose_clark(const SymbolMap& phi, const RationalSelfMap1D& psi, cd alpha, F f,
                                const QuadratureGrid& qgrid, int slice_res, int density_nodes = 512,
                                FieldOptions options = {}) {
    return compose_clark_many(phi, psi, alpha, std::vector<F>{std::move(f)}, qgrid, slice_res, density_nodes, options).front();
}

struct SingularNormProfile {
    std::vector<std::pair<cd, Estimate>> entries;  // (alpha, ||sigma_alpha||)
    double sup = 0.0;
};

/// ||sigma_alpha|| = total atomic mass of the slice measures, over an alpha grid.
inline SingularNormProfile singular_norm_profile(const SymbolMap& symbol, int alpha_count, const QuadratureGrid& qgrid,
                                                 int slice_res) {
    SingularNormProfile out;
    for (const cd& a : alpha_grid(alpha_count)) {
        const SliceField field(symbol, a, qgrid, slice_res, {.resolution = {.adaptive = false}, .cache = false});
        std::vector<cd> masses(field.size());
        field.for_each_slice([&](std::size_t i, const BoundaryMeasure1D& mu) { masses[i] = mu.atomic_mass(); });
        const auto e = detail::weighted_estimate(qgrid, masses);
        out.entries.push_back({a, e});
        out.sup = std::max(out.sup, e.value.real());
    }
    return out;
}

/// zeta^plus conj(zeta)^minus annihilates holomorphic and antiholomorphic
/// polynomials on the torus and the sphere exactly when plus - minus has
/// both a positive and a negative entry.
inline bool in_pluriharmonic_annihilator(const std::vector<int>& plus, const std::vector<int>& minus) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < plus.size(); ++i) {
        pos |= plus[i] > minus[i];
        neg |= plus[i] < minus[i];
    }
    return pos && neg;
}

inline cd monomial(std::span<const cd> z, const std::vector<int>& k) {
    cd m = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (int e = 0; e < k[i]; ++e) m *= z[i];
    return m;
}

/// |integral of zeta^plus conj(zeta)^minus d mu_alpha|; vanishes for pluriharmonic measures.
inline Estimate pluriharmonic_moment_check(const SliceField& field, const std::vector<int>& plus,
                                           const std::vector<int>& minus) {
    const int n = field.symbol().dimension();
    if (static_cast<int>(plus.size()) != n || static_cast<int>(minus.size()) != n)
        throw Error(ErrorCode::InvalidTestIndex, "multi-index length differs from the dimension");
    const bool plus_zero = std::all_of(plus.begin(), plus.end(), [](int e) { return e == 0; });
    const bool minus_zero = std::all_of(minus.begin(), minus.end(), [](int e) { return e == 0; });
    if (plus_zero || minus_zero || !in_pluriharmonic_annihilator(plus, minus))
        throw Error(ErrorCode::InvalidTestIndex, "monomial is not in the annihilator of pluriharmonic measures");
    const auto e = integrate_field_estimate(field, [&](std::span<const cd> z) {
        return monomial(z, plus) * std::conj(monomial(z, minus));
    });
    return {std::abs(e.value), e.standard_error};
}

/// For phi(0) = 0 and P = zeta^k homogeneous of degree |k| >= 1:
///   integral of conj(P) d mu_alpha = sum_{h=1}^{|k|} conj(alpha)^h integral of phi^h conj(P) d beta.
inline IdentityResidual moment_identity_check(const SliceField& field, const std::vector<int>& k) {
    const auto& phi = field.symbol();
    const int deg = std::accumulate(k.begin(), k.end(), 0);
    if (deg < 1) throw Error(ErrorCode::InvalidTestIndex, "moment identity needs a nonconstant monomial");
    if (std::abs(phi(std::vector<cd>(phi.dimension(), 0.0))) > 1e-14)
        throw Error(ErrorCode::PreconditionViolated, "moment identity needs phi(0) = 0");
    const cd ac = std::conj(field.alpha());
    const auto lhs = node_integrals(field, [&](std::span<const cd> z) { return std::conj(monomial(z, k)); });
    const auto rhs = boundary_node_integrals(field.grid(), field.slice_resolution(), [&](std::span<const cd> z) {
        const cd v = phi(z);
        cd s = 0.0, pw = 1.0;
        for (int h = 1; h <= deg; ++h) {
            pw *= ac * v;
            s += pw;
        }
        return s * std::conj(monomial(z, k));
    });
    return detail::paired(field.grid(), lhs, rhs);
}

/// integral of phi^k d beta, which equals phi(0)^k.
inline Estimate pushforward_moment(const SymbolMap& phi, int k, const QuadratureGrid& qgrid, int slice_nodes) {
    return integrate_boundary(qgrid, slice_nodes, [&](std::span<const cd> z) { return std::pow(phi(z), k); });
}

/// pi y beta({|C mu_alpha| > y}) assembled slice by slice, against ||sigma_alpha||.
inline PoltoratskiEstimate poltoratski_limit(const SliceField& field, double y) {
    if (y < 1e2) throw Error(ErrorCode::PreconditionViolated, "Poltoratski estimate needs y >= 1e2");
    if (field.symbol().domain().kind() == DomainKind::Ball)
        throw Error(ErrorCode::NotInner, "Poltoratski estimate is implemented for inner polydisc symbols");
    PoltoratskiEstimate out;
    field.for_each_slice([&](std::size_t i, const BoundaryMeasure1D& mu) {
        if (mu.has_density(1e-10))
            throw Error(ErrorCode::NotInner, "slice " + std::to_string(i) + " has an absolutely continuous part");
        out.estimate += field.weight(i) * std::numbers::pi * y * cauchy_superlevel_measure(mu, y);
        out.target += field.weight(i) * mu.atomic_mass();
    });
    return out;
}

/// Largest drift of the first `moments` trigonometric moments between
/// neighbouring quotient nodes of a deterministic polydisc grid in n = 2,
/// divided by the node spacing.
inline double vague_continuity_ratio(const SliceField& field, int moments = 3) {
    if (field.grid().error.stochastic || field.symbol().dimension() != 2 ||
        field.symbol().domain().kind() != DomainKind::Polydisc)
        throw Error(ErrorCode::PreconditionViolated, "adjacency proxy needs a deterministic polydisc grid in n = 2");
    const std::size_t m = field.size();
    std::vector<std::vector<cd>> mom(m);
    field.for_each_slice([&](std::size_t i, const BoundaryMeasure1D& mu) {
        for (int k = 1; k <= moments; ++k) mom[i].push_back(slice_moment(mu, k));
    });
    const double spacing = kTwoPi / static_cast<double>(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (int k = 0; k < moments; ++k)
            worst = std::max(worst, std::abs(mom[(i + 1) % m][k] - mom[i][k]) / spacing);
    return worst;
}

}  // namespace clark
