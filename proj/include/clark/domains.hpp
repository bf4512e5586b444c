#pragma once

// Domains D in {disc, polydisc, ball}, their Silov boundaries, the circle-orbit
// quotient of the boundary and the quadrature grids that approximate the
// invariant probability measures on both.

#include <clark/errors.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace clark {

using cd = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance for boundary-membership validation.
inline constexpr double kUnitTol = 1e-9;

enum class DomainKind { Disc, Polydisc, Ball };

inline std::string to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::Disc: return "disc";
        case DomainKind::Polydisc: return "polydisc";
        case DomainKind::Ball: return "ball";
    }
    return "?";
}

inline DomainKind domain_kind_from_string(const std::string& s) {
    if (s == "disc") return DomainKind::Disc;
    if (s == "polydisc") return DomainKind::Polydisc;
    if (s == "ball") return DomainKind::Ball;
    throw Error(ErrorCode::InvalidConfig, "unknown domain kind '" + s + "'");
}

/// A domain of complex dimension n. In dimension one the polydisc and the
/// ball both collapse to the disc, so the constructor normalizes them.
class DomainDescriptor {
public:
    DomainDescriptor() = default;
    DomainDescriptor(DomainKind kind, int n) : kind_(n == 1 ? DomainKind::Disc : kind), n_(n) {
        if (n < 1) throw Error(ErrorCode::InvalidConfig, "domain dimension must be positive");
        if (kind == DomainKind::Disc && n != 1)
            throw Error(ErrorCode::DomainMismatch, "the disc has dimension 1");
    }

    static DomainDescriptor disc() { return {DomainKind::Disc, 1}; }
    static DomainDescriptor polydisc(int n) { return {DomainKind::Polydisc, n}; }
    static DomainDescriptor ball(int n) { return {DomainKind::Ball, n}; }

    DomainKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }

    friend bool operator==(const DomainDescriptor&, const DomainDescriptor&) = default;

private:
    DomainKind kind_ = DomainKind::Disc;
    int n_ = 1;
};

inline cd hermitian_dot(std::span<const cd> z, std::span<const cd> w) {
    cd acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) acc += z[i] * std::conj(w[i]);
    return acc;
}

/// The norm whose open unit ball is the domain: max-modulus for the
/// polydisc, Euclidean for the ball.
inline double domain_norm(const DomainDescriptor& domain, std::span<const cd> z) {
    if (domain.kind() == DomainKind::Ball) {
        double s = 0.0;
        for (const auto& c : z) s += std::norm(c);
        return std::sqrt(s);
    }
    double m = 0.0;
    for (const auto& c : z) m = std::max(m, std::abs(c));
    return m;
}

struct BoundaryPoint {
    std::vector<cd> coords;

    std::size_t size() const noexcept { return coords.size(); }
    const cd& operator[](std::size_t i) const { return coords[i]; }
};

/// Distance from the Silov boundary in the sense relevant to each domain.
inline double boundary_defect(const DomainDescriptor& domain, std::span<const cd> z) {
    if (domain.kind() == DomainKind::Ball) return std::abs(domain_norm(domain, z) - 1.0);
    double worst = 0.0;
    for (const auto& c : z) worst = std::max(worst, std::abs(std::abs(c) - 1.0));
    return worst;
}

inline void require_boundary(const DomainDescriptor& domain, std::span<const cd> z) {
    if (static_cast<int>(z.size()) != domain.dimension())
        throw Error(ErrorCode::DomainMismatch, "point has " + std::to_string(z.size()) +
                                                   " coordinates, domain dimension is " +
                                                   std::to_string(domain.dimension()));
    if (!(boundary_defect(domain, z) <= kUnitTol))
        throw Error(ErrorCode::GaugeUndefined, "point is not on the Silov boundary of the " +
                                                   to_string(domain.kind()));
}

struct QuotientPoint {
    BoundaryPoint representative;

    friend bool operator==(const QuotientPoint&, const QuotientPoint&) = default;
};

namespace detail {

// First coordinate of (near-)maximal modulus; near-ties resolve to the lowest
// index so that rounding in |z_i| cannot flip the gauge.
inline std::size_t gauge_index(std::span<const cd> z) {
    double best = 0.0;
    for (const auto& c : z) best = std::max(best, std::abs(c));
    for (std::size_t i = 0; i < z.size(); ++i)
        if (std::abs(z[i]) >= best - 1e-12) return i;
    return 0;
}

}  // namespace detail

/// Canonical representative of the circle orbit of a boundary point: the
/// first coordinate of largest modulus is rotated onto the positive reals.
inline QuotientPoint project(const DomainDescriptor& domain, const BoundaryPoint& zeta) {
    require_boundary(domain, zeta.coords);
    const std::size_t g = detail::gauge_index(zeta.coords);
    const double mod = std::abs(zeta.coords[g]);
    if (mod == 0.0) throw Error(ErrorCode::GaugeUndefined, "zero vector has no gauge");
    const cd rot = std::conj(zeta.coords[g]) / mod;
    QuotientPoint q;
    q.representative.coords.resize(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) q.representative.coords[i] = zeta.coords[i] * rot;
    q.representative.coords[g] = mod;
    return q;
}

enum class GridTarget { Beta, BetaHat, SliceCircle };

enum class BallQuotientRule { MonteCarlo, Product };

/// Resolution parameters. `quotient_nodes` is per free coordinate for the
/// polydisc product grid (m^(n-1) nodes in total), the sample count for
/// Monte Carlo ball grids, and the per-axis count of the n = 2 product grid
/// on the ball.
struct GridSpec {
    DomainDescriptor domain;
    int quotient_nodes = 64;
    int slice_nodes = 64;
    std::optional<std::uint64_t> seed;
    BallQuotientRule ball_rule = BallQuotientRule::MonteCarlo;
};

/// How accurate a grid is. Deterministic grids integrate trigonometric
/// (and, on the ball product grid, |z_1|^2-polynomial) monomials exactly up
/// to `exact_degree`; stochastic grids have 1/sqrt(samples) standard error.
struct ErrorModel {
    bool stochastic = false;
    int exact_degree = 0;
    std::size_t samples = 0;
};

struct QuadratureNode {
    BoundaryPoint point;
    double weight = 0.0;
};

struct QuadratureGrid {
    DomainDescriptor domain;
    GridTarget target = GridTarget::Beta;
    GridSpec spec;
    ErrorModel error;
    std::vector<QuadratureNode> nodes;

    std::size_t size() const noexcept { return nodes.size(); }

    double total_weight() const {
        // Neumaier summation; large Monte Carlo grids drift by ~1e-12 otherwise
        double s = 0.0, c = 0.0;
        for (const auto& nd : nodes) {
            const double t = s + nd.weight;
            c += std::abs(s) >= std::abs(nd.weight) ? (s - t) + nd.weight : (nd.weight - t) + s;
            s = t;
        }
        return s + c;
    }
};

namespace detail {

inline void check_resolution(const GridSpec& spec) {
    if (spec.quotient_nodes <= 0 || spec.slice_nodes <= 0)
        throw Error(ErrorCode::UnsupportedResolution, "grid resolutions must be positive");
}

// Gauss-Legendre nodes and weights on [0, 1], weights summing to one.
inline void gauss_legendre_unit(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        x[i] = 0.5 * (1.0 - t);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace detail

/// Quadrature for the image measure of the boundary measure on the quotient.
inline QuadratureGrid quotient_grid(const GridSpec& spec) {
    detail::check_resolution(spec);
    QuadratureGrid grid;
    grid.domain = spec.domain;
    grid.target = GridTarget::BetaHat;
    grid.spec = spec;
    const int n = spec.domain.dimension();
    const int m = spec.quotient_nodes;

    switch (spec.domain.kind()) {
        case DomainKind::Disc:
            grid.nodes.push_back({BoundaryPoint{{cd(1.0, 0.0)}}, 1.0});
            grid.error = {false, 1 << 30, 1};
            break;
        case DomainKind::Polydisc: {
            std::size_t total = 1;
            for (int i = 1; i < n; ++i) total *= static_cast<std::size_t>(m);
            grid.nodes.reserve(total);
            std::vector<int> idx(n - 1, 0);
            for (std::size_t c = 0; c < total; ++c) {
                BoundaryPoint p;
                p.coords.resize(n);
                p.coords[0] = 1.0;
                for (int i = 1; i < n; ++i) p.coords[i] = std::polar(1.0, kTwoPi * idx[i - 1] / m);
                grid.nodes.push_back({std::move(p), 1.0 / static_cast<double>(total)});
                for (int i = 0; i < n - 1; ++i) {
                    if (++idx[i] < m) break;
                    idx[i] = 0;
                }
            }
            grid.error = {false, m - 1, total};
            break;
        }
        case DomainKind::Ball: {
            if (spec.ball_rule == BallQuotientRule::Product) {
                if (n != 2)
                    throw Error(ErrorCode::UnsupportedResolution,
                                "the deterministic ball quotient grid exists only for n = 2");
                // |z_1|^2 is uniform on [0,1] and arg(z_2/z_1) uniform on the circle.
                std::vector<double> u, wu;
                detail::gauss_legendre_unit(m, u, wu);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        BoundaryPoint p{{cd(std::sqrt(u[i]), 0.0),
                                         std::polar(std::sqrt(1.0 - u[i]), kTwoPi * j / m)}};
                        grid.nodes.push_back({project(spec.domain, p).representative, wu[i] / m});
                    }
                grid.error = {false, m - 1, static_cast<std::size_t>(m) * m};
                break;
            }
            if (!spec.seed)
                throw Error(ErrorCode::MissingSeed, "Monte Carlo ball grids require a seed");
            std::mt19937_64 rng(*spec.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            grid.nodes.reserve(m);
            for (int s = 0; s < m; ++s) {
                BoundaryPoint p;
                p.coords.resize(n);
                double r2 = 0.0;
                for (auto& c : p.coords) {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    c = cd(re, im);
                    r2 += re * re + im * im;
                }
                const double r = std::sqrt(r2);
                for (auto& c : p.coords) c /= r;
                grid.nodes.push_back({project(spec.domain, p).representative, 1.0 / m});
            }
            grid.error = {true, 0, static_cast<std::size_t>(m)};
            break;
        }
    }
    return grid;
}

/// Equispaced nodes e^{2 pi i k / m} * zeta0 on the orbit through zeta0.
inline QuadratureGrid slice_circle(const DomainDescriptor& domain, const BoundaryPoint& zeta0, int m) {
    if (m <= 0) throw Error(ErrorCode::UnsupportedResolution, "slice circle needs m >= 1");
    QuadratureGrid grid;
    grid.domain = domain;
    grid.target = GridTarget::SliceCircle;
    grid.spec.domain = domain;
    grid.spec.slice_nodes = m;
    grid.error = {false, m - 1, static_cast<std::size_t>(m)};
    grid.nodes.reserve(m);
    for (int k = 0; k < m; ++k) {
        const cd rot = std::polar(1.0, kTwoPi * k / m);
        BoundaryPoint p{zeta0.coords};
        for (auto& c : p.coords) c *= rot;
        grid.nodes.push_back({std::move(p), 1.0 / m});
    }
    return grid;
}

/// Composite rule for the boundary measure: quotient grid times one slice
/// circle of `slice_nodes` points per quotient node.
inline QuadratureGrid boundary_grid(const GridSpec& spec) {
    QuadratureGrid q = quotient_grid(spec);
    QuadratureGrid grid;
    grid.domain = spec.domain;
    grid.target = GridTarget::Beta;
    grid.spec = spec;
    grid.error = q.error;
    grid.error.exact_degree = std::min(q.error.exact_degree, spec.slice_nodes - 1);
    grid.nodes.reserve(q.size() * spec.slice_nodes);
    std::vector<cd> rots(spec.slice_nodes);
    for (int k = 0; k < spec.slice_nodes; ++k) rots[k] = std::polar(1.0, kTwoPi * k / spec.slice_nodes);
    for (const auto& qn : q.nodes)
        for (const auto& rot : rots) {
            BoundaryPoint p{qn.point.coords};
            for (auto& c : p.coords) c *= rot;
            grid.nodes.push_back({std::move(p), qn.weight / spec.slice_nodes});
        }
    return grid;
}

}  // namespace clark
