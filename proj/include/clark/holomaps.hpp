#pragma once

// Symbols phi: D -> unit disc. A symbol is a polynomial map on a polydisc or
// ball, optionally post-composed with a rational self-map of the disc. Every
// complex line through the origin cuts it down to a rational self-map of the
// disc, which is what the one-dimensional machinery consumes.

#include <clark/domains.hpp>
#include <clark/polynomial.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace clark {

/// Slack on the self-map bound sup|phi| <= 1.
inline constexpr double kSupTol = 1e-8;

class RationalSelfMap1D {
public:
    RationalSelfMap1D() : num_{cd(0.0)}, den_{cd(1.0)} {}

    /// Validating constructor: the denominator must not vanish on the closed
    /// disc and |p| may not exceed 1 + kSupTol on the circle.
    RationalSelfMap1D(poly::Coeffs num, poly::Coeffs den)
        : num_(poly::trim(std::move(num))), den_(poly::trim(std::move(den))) {
        validate();
    }

    /// Skips validation; for maps known to be self-maps by construction
    /// (slices and compositions of validated maps).
    static RationalSelfMap1D trusted(poly::Coeffs num, poly::Coeffs den) {
        RationalSelfMap1D p;
        p.num_ = poly::trim(std::move(num));
        p.den_ = poly::trim(std::move(den));
        return p;
    }

    static RationalSelfMap1D identity() { return trusted({0.0, 1.0}, {1.0}); }
    static RationalSelfMap1D constant(cd c) { return RationalSelfMap1D({c}, {1.0}); }

    /// (w - a) / (1 - conj(a) w), times a unimodular rotation.
    static RationalSelfMap1D mobius(cd a, cd rotation = 1.0) {
        if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::NotASelfMap, "Mobius zero must lie in the open disc");
        return trusted({-a * rotation, rotation}, {1.0, -std::conj(a)});
    }

    /// Finite Blaschke product with the given zeros, times `scale` (|scale| <= 1).
    static RationalSelfMap1D blaschke(const std::vector<cd>& zeros, cd scale = 1.0) {
        poly::Coeffs num{scale}, den{1.0};
        for (const auto& a : zeros) {
            if (!(std::abs(a) < 1.0)) throw Error(ErrorCode::NotASelfMap, "Blaschke zero outside the open disc");
            num = poly::multiply(num, poly::Coeffs{-a, 1.0});
            den = poly::multiply(den, poly::Coeffs{1.0, -std::conj(a)});
        }
        if (std::abs(scale) > 1.0 + kSupTol) throw Error(ErrorCode::NotASelfMap, "|scale| > 1");
        return trusted(std::move(num), std::move(den));
    }

    const poly::Coeffs& numerator() const noexcept { return num_; }
    const poly::Coeffs& denominator() const noexcept { return den_; }

    int degree() const {
        return std::max(static_cast<int>(num_.size()), static_cast<int>(den_.size())) - 1;
    }

    cd operator()(cd w) const { return poly::eval(num_, w) / poly::eval(den_, w); }

    cd derivative(cd w) const {
        const auto [n, dn] = poly::eval_with_derivative(num_, w);
        const auto [d, dd] = poly::eval_with_derivative(den_, w);
        return (dn * d - n * dd) / (d * d);
    }

    /// max |p| over `samples` equispaced points of the unit circle.
    double boundary_sup(int samples = 4096) const {
        double sup = 0.0;
        for (int k = 0; k < samples; ++k) sup = std::max(sup, std::abs((*this)(std::polar(1.0, kTwoPi * k / samples))));
        return sup;
    }

    /// Unimodular boundary values on a dense circle grid (finite Blaschke
    /// products up to rotation, for this symbol class).
    bool is_inner(double tol = 1e-10, int samples = 1024) const {
        for (int k = 0; k < samples; ++k)
            if (std::abs(std::abs((*this)(std::polar(1.0, kTwoPi * (k + 0.5) / samples))) - 1.0) > tol)
                return false;
        return true;
    }

    /// psi o p as a single rational function, psi = *this.
    RationalSelfMap1D after(const RationalSelfMap1D& p) const {
        const int m = degree();
        std::vector<poly::Coeffs> npow{{1.0}}, dpow{{1.0}};
        for (int k = 1; k <= m; ++k) {
            npow.push_back(poly::multiply(npow.back(), p.num_));
            dpow.push_back(poly::multiply(dpow.back(), p.den_));
        }
        poly::Coeffs num{0.0}, den{0.0};
        for (int k = 0; k <= m; ++k) {
            const poly::Coeffs basis = poly::multiply(npow[k], dpow[m - k]);
            if (k < static_cast<int>(num_.size())) num = poly::add(num, basis, num_[k]);
            if (k < static_cast<int>(den_.size())) den = poly::add(den, basis, den_[k]);
        }
        return trusted(std::move(num), std::move(den));
    }

private:
    void validate() const {
        if (poly::max_abs(den_) == 0.0) throw Error(ErrorCode::NotASelfMap, "zero denominator");
        for (const auto& r : poly::roots(den_))
            if (std::abs(r) <= 1.0 + 1e-12)
                throw Error(ErrorCode::NotASelfMap, "denominator vanishes in the closed disc");
        if (!(std::abs((*this)(0.0)) < 1.0)) throw Error(ErrorCode::NotASelfMap, "|p(0)| >= 1");
        for (int k = 0; k < 4096; ++k) {
            const double t = kTwoPi * k / 4096;
            const double v = std::abs((*this)(std::polar(1.0, t)));
            if (v > 1.0 + kSupTol) {
                std::ostringstream os;
                os << "sup |p| on the circle is at least " << v << " (attained near angle " << t << ")";
                throw Error(ErrorCode::NotASelfMap, os.str());
            }
        }
    }

    poly::Coeffs num_;
    poly::Coeffs den_;
};

struct Monomial {
    std::vector<int> exponents;
    cd coeff;
};

/// Polynomial map on the polydisc or ball: sum of c_k z^k over multi-indices k.
class PolyMapND {
public:
    PolyMapND() = default;
    PolyMapND(DomainDescriptor domain, std::vector<Monomial> terms) : domain_(domain), terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (static_cast<int>(t.exponents.size()) != domain_.dimension())
                throw Error(ErrorCode::DomainMismatch, "multi-index length differs from the dimension");
            for (int e : t.exponents)
                if (e < 0) throw Error(ErrorCode::InvalidConfig, "negative exponent");
        }
    }

    const DomainDescriptor& domain() const noexcept { return domain_; }
    const std::vector<Monomial>& terms() const noexcept { return terms_; }
    int dimension() const noexcept { return domain_.dimension(); }

    int total_degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            int s = 0;
            for (int e : t.exponents) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    cd operator()(std::span<const cd> z) const {
        if (static_cast<int>(z.size()) != dimension())
            throw Error(ErrorCode::DomainMismatch, "point dimension differs from the map's");
        cd acc = 0.0;
        for (const auto& t : terms_) {
            cd m = t.coeff;
            for (std::size_t i = 0; i < z.size(); ++i)
                for (int e = 0; e < t.exponents[i]; ++e) m *= z[i];
            acc += m;
        }
        return acc;
    }

    /// Coefficients of w -> phi(w * zeta): the w^k coefficient is the sum of
    /// c_k zeta^k over multi-indices of length k.
    poly::Coeffs slice_coefficients(std::span<const cd> zeta) const {
        poly::Coeffs c(total_degree() + 1, cd(0.0));
        for (const auto& t : terms_) {
            cd m = t.coeff;
            int s = 0;
            for (std::size_t i = 0; i < zeta.size(); ++i)
                for (int e = 0; e < t.exponents[i]; ++e) m *= zeta[i], ++s;
            c[s] += m;
        }
        return c;
    }

private:
    DomainDescriptor domain_;
    std::vector<Monomial> terms_;
};

/// phi = post o base, with `post` optional.
class SymbolMap {
public:
    SymbolMap() = default;
    explicit SymbolMap(PolyMapND base, std::optional<RationalSelfMap1D> post = std::nullopt)
        : base_(std::move(base)), post_(std::move(post)) {}

    /// The one-variable symbol w -> p(w) as a symbol on the disc.
    static SymbolMap from_1d(const RationalSelfMap1D& p) {
        return SymbolMap(PolyMapND(DomainDescriptor::disc(), {{{1}, 1.0}}), p);
    }

    const PolyMapND& base() const noexcept { return base_; }
    const std::optional<RationalSelfMap1D>& post() const noexcept { return post_; }
    const DomainDescriptor& domain() const noexcept { return base_.domain(); }
    int dimension() const noexcept { return base_.dimension(); }

    cd operator()(std::span<const cd> z) const {
        const cd b = base_(z);
        return post_ ? (*post_)(b) : b;
    }

    SymbolMap post_composed(const RationalSelfMap1D& psi) const {
        return SymbolMap(base_, post_ ? psi.after(*post_) : psi);
    }

private:
    PolyMapND base_;
    std::optional<RationalSelfMap1D> post_;
};

/// Restriction w -> phi(w zeta) of a symbol to the slice disc through zeta.
inline RationalSelfMap1D slice_restrict(const SymbolMap& map, const BoundaryPoint& zeta) {
    require_boundary(map.domain(), zeta.coords);
    auto base = RationalSelfMap1D::trusted(map.base().slice_coefficients(zeta.coords), {1.0});
    return map.post() ? map.post()->after(base) : base;
}

/// phi(z) or, for one-variable maps, phi'(z).
inline cd evaluate(const SymbolMap& map, std::span<const cd> z, int derivative_order = 0) {
    if (static_cast<int>(z.size()) != map.dimension())
        throw Error(ErrorCode::DomainMismatch, "point dimension differs from the map's");
    if (derivative_order == 0) return map(z);
    if (derivative_order != 1 || map.dimension() != 1)
        throw Error(ErrorCode::DerivativeUnsupported, "derivatives are available for one-variable maps only");
    const auto p = RationalSelfMap1D::trusted(map.base().slice_coefficients(std::vector<cd>{1.0}), {1.0});
    const auto full = map.post() ? map.post()->after(p) : p;
    return full.derivative(z[0]);
}

inline cd evaluate(const RationalSelfMap1D& map, cd w, int derivative_order = 0) {
    if (derivative_order == 0) return map(w);
    if (derivative_order == 1) return map.derivative(w);
    throw Error(ErrorCode::DerivativeUnsupported, "only first derivatives are supported");
}

/// A dense grid on the Silov boundary suitable for validating a symbol.
inline QuadratureGrid default_validation_grid(const DomainDescriptor& domain) {
    GridSpec spec;
    spec.domain = domain;
    switch (domain.kind()) {
        case DomainKind::Disc:
            spec.slice_nodes = 4096;
            spec.quotient_nodes = 1;
            break;
        case DomainKind::Polydisc:
            spec.slice_nodes = 128;
            spec.quotient_nodes = domain.dimension() == 2 ? 256 : (domain.dimension() == 3 ? 48 : 12);
            break;
        case DomainKind::Ball:
            spec.slice_nodes = 64;
            if (domain.dimension() == 2) {
                spec.quotient_nodes = 48;
                spec.ball_rule = BallQuotientRule::Product;
            } else {
                spec.quotient_nodes = 8192;
                spec.seed = 0x5eedULL;
            }
            break;
    }
    return boundary_grid(spec);
}

/// Largest |phi| over the grid nodes; throws NotASelfMap past 1 + kSupTol.
inline double validate_self_map(const SymbolMap& map, const QuadratureGrid& grid) {
    if (!(grid.domain == map.domain()))
        throw Error(ErrorCode::DomainMismatch, "validation grid is for a different domain");
    const double at_origin = std::abs(map(std::vector<cd>(map.dimension(), cd(0.0))));
    if (!(at_origin < 1.0)) throw Error(ErrorCode::NotASelfMap, "|phi(0)| >= 1");
    if (map.post()) {
        // denominator zeros in the closed disc are caught by the validating constructor
        RationalSelfMap1D(map.post()->numerator(), map.post()->denominator());
    }
    double sup = 0.0;
    for (const auto& node : grid.nodes) {
        const double v = std::abs(map(node.point.coords));
        if (!(v <= 1.0 + kSupTol)) {
            std::ostringstream os;
            os << "|phi| = " << v << " at boundary node (";
            for (std::size_t i = 0; i < node.point.size(); ++i)
                os << (i ? ", " : "") << node.point[i].real() << (node.point[i].imag() < 0 ? "" : "+")
                   << node.point[i].imag() << "i";
            os << ")";
            throw Error(ErrorCode::NotASelfMap, os.str());
        }
        sup = std::max(sup, v);
    }
    return sup;
}

inline double validate_self_map(const SymbolMap& map) {
    return validate_self_map(map, default_validation_grid(map.domain()));
}

inline double validate_self_map(const RationalSelfMap1D& p, const QuadratureGrid& grid) {
    return validate_self_map(SymbolMap::from_1d(p), grid);
}

}  // namespace clark
