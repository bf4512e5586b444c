#pragma once

// Clark measures on the unit circle for rational self-maps of the disc.
//
// For |alpha| = 1 the Clark measure mu_alpha[p] is the positive measure whose
// Poisson integral is Re((alpha + p)/(alpha - p)). For rational p it is a
// finite sum of atoms at the solutions of p(tau) = alpha on the circle, with
// masses 1/|p'(tau)|, plus the density (1 - |p|^2)/|alpha - p|^2.

#include <clark/holomaps.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

namespace clark {

/// e^{2 pi i j / n} for j < n, cached per thread.
inline const std::vector<cd>& unit_roots(int n) {
    thread_local std::unordered_map<int, std::vector<cd>> table;
    auto& r = table[n];
    if (r.empty()) {
        r.resize(n);
        for (int j = 0; j < n; ++j) r[j] = std::polar(1.0, kTwoPi * j / n);
    }
    return r;
}

/// On-circle classification radius for Newton-refined simple roots of
/// N - alpha D. Repeated roots converge slowly and use the looser radius.
inline constexpr double kRootTol = 1e-10;
inline constexpr double kRepeatedRootTol = 1e-6;

struct Atom {
    cd position;  // unimodular
    double mass = 0.0;
};

/// The density of the absolutely continuous part, in a form that stays
/// accurate next to atoms. With A = alpha D + N and R = alpha D - N the
/// Herglotz integral of mu_alpha is A/R; in partial fractions the poles on
/// the circle are the atoms and contribute only constants on the circle, so
///   density(theta) = Re(Q(w) + sum_j B_j/(w - r_j)) + sum_atoms mass,
/// where Q is the polynomial part of A/R and r_j the off-circle roots of R.
struct DensityEvaluator {
    poly::Coeffs polynomial_part;
    std::vector<cd> poles;
    std::vector<cd> residues;
    double constant = 0.0;

    double operator()(double theta) const {
        const cd w = std::polar(1.0, theta);
        cd acc = poly::eval(polynomial_part, w);
        for (std::size_t j = 0; j < poles.size(); ++j) acc += residues[j] / (w - poles[j]);
        return std::max(0.0, acc.real() + constant);
    }

    /// Fourier series of the density truncated to |k| < n/2, sampled at
    /// theta_j = 2 pi j / n. Used as quadrature weights it integrates
    /// trigonometric polynomials of degree <= n/2 exactly however sharp the
    /// density is; the error for other integrands is their own aliasing.
    std::vector<double> band_limited(int n) const {
        std::vector<double> out(n);
        const int half = n / 2;
        std::vector<cd> tail(poles.size());
        for (std::size_t k = 0; k < poles.size(); ++k)
            tail[k] = std::abs(poles[k]) > 1.0 ? std::pow(poles[k], -half) : std::pow(poles[k], half - 1);
        const auto& roots = unit_roots(n);
        for (int j = 0; j < n; ++j) {
            const cd w = roots[j];
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // w^{n/2}
            cd acc = poly::eval(polynomial_part, w);
            for (std::size_t k = 0; k < poles.size(); ++k) {
                // 1 - (w/r)^{n/2} outside, 1 - (r/w)^{n/2-1} inside
                const cd t = std::abs(poles[k]) > 1.0 ? sign * tail[k] : sign * tail[k] * w;
                acc += residues[k] / (w - poles[k]) * (1.0 - t);
            }
            out[j] = acc.real() + constant;
        }
        return out;
    }
};

/// Direct closed form (1 - |p|^2)/|alpha - p|^2. Loses accuracy next to atoms;
/// used as an independent route in checks.
inline double clark_density_closed_form(const RationalSelfMap1D& p, cd alpha, double theta) {
    const cd v = p(std::polar(1.0, theta));
    const double m = std::abs(v);
    return (1.0 - m) * (1.0 + m) / std::norm(alpha - v);
}

/// A finite positive measure on the circle: atoms plus a density sampled at
/// theta_j = 2 pi j / N, integrated against d theta / 2 pi. With an evaluator
/// the quadrature weights are the band-limited density, otherwise the samples.
class BoundaryMeasure1D {
public:
    BoundaryMeasure1D() = default;
    BoundaryMeasure1D(std::vector<Atom> atoms, std::vector<double> density,
                      std::optional<DensityEvaluator> evaluator = std::nullopt)
        : atoms_(std::move(atoms)), density_(std::move(density)), evaluator_(std::move(evaluator)) {
        for (auto& a : atoms_) {
            if (std::abs(std::abs(a.position) - 1.0) > kUnitTol)
                throw Error(ErrorCode::PreconditionViolated, "atom position is not unimodular");
            if (!(a.mass > 0.0)) throw Error(ErrorCode::PreconditionViolated, "atom mass must be positive");
        }
        for (auto& v : density_) {
            if (v < -1e-12 || !std::isfinite(v))
                throw Error(ErrorCode::PreconditionViolated, "density must be nonnegative and finite");
            v = std::max(v, 0.0);
        }
        if (evaluator_ && !density_.empty() && max_density() > 0.0) weights_ = evaluator_->band_limited(grid_size());
    }

    /// Rebuilds a measure from stored samples and quadrature weights.
    static BoundaryMeasure1D from_parts(std::vector<Atom> atoms, std::vector<double> density, std::vector<double> weights) {
        BoundaryMeasure1D out(std::move(atoms), std::move(density));
        if (!weights.empty() && weights.size() != out.density_.size())
            throw Error(ErrorCode::PreconditionViolated, "weights and density differ in length");
        out.weights_ = std::move(weights);
        return out;
    }

    static BoundaryMeasure1D dirac(cd position, double mass = 1.0) { return {{{position, mass}}, {}}; }

    /// mass times the normalized arc-length measure.
    static BoundaryMeasure1D uniform(double mass = 1.0, int grid = 64) {
        return {{}, std::vector<double>(grid, mass)};
    }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& density() const noexcept { return density_; }
    const std::optional<DensityEvaluator>& evaluator() const noexcept { return evaluator_; }
    int grid_size() const noexcept { return static_cast<int>(density_.size()); }

    double atomic_mass() const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.mass;
        return s;
    }

    /// Quadrature weights times N; equal to density() without an evaluator.
    const std::vector<double>& weights() const noexcept { return weights_.empty() ? density_ : weights_; }

    double density_mass() const {
        if (density_.empty()) return 0.0;
        double s = 0.0;
        for (double v : weights()) s += v;
        return s / static_cast<double>(density_.size());
    }

    double total_mass() const { return atomic_mass() + density_mass(); }

    double max_density() const {
        double m = 0.0;
        for (double v : density_) m = std::max(m, v);
        return m;
    }

    bool has_density(double tol = 1e-12) const { return max_density() > tol; }

    double theta(int j) const { return kTwoPi * j / static_cast<double>(density_.size()); }

    /// Integral of f (a function of the unimodular point) against the measure.
    template <class F>
    cd integrate(F&& f) const {
        cd acc = 0.0;
        for (const auto& a : atoms_) acc += a.mass * f(a.position);
        if (!density_.empty()) {
            cd s = 0.0;
            const int n = grid_size();
            const auto& roots = unit_roots(n);
            const auto& wts = weights();
            for (int j = 0; j < n; ++j)
                if (wts[j] != 0.0) s += wts[j] * f(roots[j]);
            acc += s / static_cast<double>(n);
        }
        return acc;
    }

    /// Same measure with every mass multiplied by c > 0.
    BoundaryMeasure1D scaled(double c) const {
        BoundaryMeasure1D out = *this;
        for (auto& a : out.atoms_) a.mass *= c;
        for (auto& v : out.density_) v *= c;
        for (auto& v : out.weights_) v *= c;
        if (out.evaluator_) {
            for (auto& q : out.evaluator_->polynomial_part) q *= c;
            for (auto& r : out.evaluator_->residues) r *= c;
            out.evaluator_->constant *= c;
        }
        return out;
    }

private:
    std::vector<Atom> atoms_;
    std::vector<double> density_;
    std::optional<DensityEvaluator> evaluator_;
    std::vector<double> weights_;
};

/// Density resolution control: the requested grid is raised (by doubling, up
/// to `max_grid`) until grid * strip_width >= `target_decay`, where the strip
/// width is the distance of the nearest off-circle pole of the density's
/// analytic continuation, so the trapezoid error ~ exp(-grid * width) is
/// below roundoff.
struct DensityResolution {
    bool adaptive = true;
    int max_grid = 1 << 16;
    double target_decay = 36.0;
};

namespace detail {

inline void require_unimodular(cd alpha) {
    if (std::abs(std::abs(alpha) - 1.0) > kUnitTol)
        throw Error(ErrorCode::PreconditionViolated, "alpha must be unimodular");
}

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Quotient and remainder of a / b.
inline std::pair<poly::Coeffs, poly::Coeffs> divide(poly::Coeffs a, const poly::Coeffs& b) {
    const int db = static_cast<int>(b.size()) - 1;
    const int da = static_cast<int>(a.size()) - 1;
    if (da < db) return {{cd(0.0)}, a};
    poly::Coeffs q(da - db + 1, cd(0.0));
    for (int k = da - db; k >= 0; --k) {
        const cd t = a[k + db] / b[db];
        q[k] = t;
        for (int j = 0; j <= db; ++j) a[k + j] -= t * b[j];
    }
    a.resize(std::max(db, 1));
    return {q, a};
}

}  // namespace detail

/// Clark measure mu_alpha[p] with its density sampled on at least `grid`
/// equispaced points (a power of two >= 64).
inline BoundaryMeasure1D clark_measure_1d(const RationalSelfMap1D& p, cd alpha, int grid,
                                          const DensityResolution& resolution = {}) {
    detail::require_unimodular(alpha);
    alpha /= std::abs(alpha);
    if (!detail::is_power_of_two(grid) || grid < 64)
        throw Error(ErrorCode::UnsupportedResolution, "density grid must be a power of two >= 64");

    const poly::Coeffs& num = p.numerator();
    const poly::Coeffs& den = p.denominator();
    const poly::Coeffs herg_num = poly::add(den, num, 1.0 / alpha);  // (alpha D + N)/alpha
    const poly::Coeffs raw_r = poly::add(den, num, -1.0 / alpha);    // (alpha D - N)/alpha
    const poly::Coeffs r = poly::trim(raw_r, 1e-13);
    const auto roots = poly::roots(r);
    const poly::Coeffs dr = poly::derivative(r);

    std::vector<Atom> atoms;
    DensityEvaluator ev;
    auto [quotient, remainder] = detail::divide(herg_num, r);
    ev.polynomial_part = quotient;

    bool simple_roots = true;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-7) simple_roots = false;

    double strip = std::numeric_limits<double>::infinity();
    for (cd z0 : roots) {
        if (simple_roots)
            for (int it = 0; it < 3; ++it) {
                const auto [rv, rd] = poly::eval_with_derivative(r, z0);
                if (rd == cd(0.0)) break;
                z0 -= rv / rd;
            }
        if (std::abs(std::abs(z0) - 1.0) < (simple_roots ? kRootTol : kRepeatedRootTol)) {
            cd tau = z0;
            const auto [rv, rd] = poly::eval_with_derivative(r, tau);
            if (rd != cd(0.0)) tau -= rv / rd;
            tau /= std::abs(tau);
            const double dp = std::abs(p.derivative(tau));
            if (dp < 1e-10)
                throw Error(ErrorCode::AtomDerivativeVanishes, "|p'| vanishes at a boundary solution of p = alpha");
            atoms.push_back({tau, 1.0 / dp});
            ev.constant += 1.0 / dp;
        } else {
            strip = std::min(strip, std::abs(std::log(std::abs(z0))));
            ev.poles.push_back(z0);
            ev.residues.push_back(poly::eval(remainder, z0) / poly::eval(dr, z0));
        }
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
        const auto ang = [](cd z) { double t = std::arg(z); return t < 0 ? t + kTwoPi : t; };
        return ang(a.position) < ang(b.position);
    });

    int n = grid;
    if (resolution.adaptive)
        while (n < resolution.max_grid && n * strip < resolution.target_decay) n *= 2;

    std::vector<double> density(n);
    if (simple_roots) {
        for (int j = 0; j < n; ++j) density[j] = ev(kTwoPi * j / n);
    } else {
        // repeated roots: fall back to the closed form, stepping off atom angles
        const double h = kTwoPi / n;
        for (int j = 0; j < n; ++j) {
            double t = kTwoPi * j / n;
            for (const auto& a : atoms) {
                double d = std::remainder(t - std::arg(a.position), kTwoPi);
                if (std::abs(d) < 1e-8) t += 0.5 * h;
            }
            density[j] = std::max(0.0, clark_density_closed_form(p, alpha, t));
        }
    }
    // an identically vanishing density (inner symbols) is stored exactly
    double peak = 0.0;
    for (double v : density) peak = std::max(peak, v);
    if (peak < 1e-11 * std::max(1.0, ev.constant)) std::fill(density.begin(), density.end(), 0.0);

    return BoundaryMeasure1D(std::move(atoms), std::move(density),
                             simple_roots ? std::optional<DensityEvaluator>(ev) : std::nullopt);
}

/// ||mu_alpha[p]|| = (1 - |p(0)|^2) / |alpha - p(0)|^2.
inline double clark_norm(cd p0, cd alpha) { return (1.0 - std::norm(p0)) / std::norm(alpha - p0); }

enum class TransformMode { Poisson, Cauchy, Herglotz };

/// Poisson, Cauchy or Herglotz integral of mu at an interior point w.
inline cd transform_1d(const BoundaryMeasure1D& mu, cd w, TransformMode mode) {
    if (!(std::abs(w) <= 1.0 - 1e-9))
        throw Error(ErrorCode::EvaluationTooCloseToBoundary, "transform needs |w| <= 1 - 1e-9");
    switch (mode) {
        case TransformMode::Poisson: {
            const double c = 1.0 - std::norm(w);
            return mu.integrate([&](cd t) { return cd(c / std::norm(t - w)); });
        }
        case TransformMode::Cauchy:
            return mu.integrate([&](cd t) { return 1.0 / (1.0 - w * std::conj(t)); });
        case TransformMode::Herglotz:
            return mu.integrate([&](cd t) { return (t + w) / (t - w); });
    }
    return 0.0;
}

/// psi(w) = alpha (H(w) - 1)/(H(w) + 1) with H the Herglotz integral of mu:
/// the unique symbol with psi(0) in R alpha whose Clark measure at alpha is mu.
class ReconstructedSymbol {
public:
    ReconstructedSymbol(BoundaryMeasure1D mu, cd alpha) : mu_(std::move(mu)), alpha_(alpha) {
        detail::require_unimodular(alpha_);
        if (!(mu_.total_mass() > 0.0)) throw Error(ErrorCode::ZeroMeasure, "cannot reconstruct from the zero measure");
    }

    cd operator()(cd w) const {
        const cd h = transform_1d(mu_, w, TransformMode::Herglotz);
        return alpha_ * (h - 1.0) / (h + 1.0);
    }

    const BoundaryMeasure1D& measure() const noexcept { return mu_; }
    cd alpha() const noexcept { return alpha_; }

private:
    BoundaryMeasure1D mu_;
    cd alpha_;
};

inline ReconstructedSymbol reconstruct_symbol_1d(const BoundaryMeasure1D& mu, cd alpha) { return {mu, alpha}; }

/// w -> exp(-H(w)) for a purely atomic measure.
class SingularInnerFunction {
public:
    explicit SingularInnerFunction(BoundaryMeasure1D mu) : mu_(std::move(mu)) {
        if (mu_.has_density()) throw Error(ErrorCode::NotSingular, "measure has a nonzero density part");
        if (!(mu_.atomic_mass() > 0.0)) throw Error(ErrorCode::ZeroMeasure, "zero measure");
    }

    cd operator()(cd w) const { return std::exp(-transform_1d(mu_, w, TransformMode::Herglotz)); }

    const BoundaryMeasure1D& measure() const noexcept { return mu_; }

private:
    BoundaryMeasure1D mu_;
};

inline SingularInnerFunction singular_inner_from_measure(const BoundaryMeasure1D& mu) { return SingularInnerFunction(mu); }

struct AngularDerivative {
    double mass = 0.0;         // mu_alpha({tau})
    cd derivative_limit;       // lim_{r->1} tau p'(r tau), the derivative along the slice direction
    cd alpha;                  // p(tau)
    double modulus_residual = 0.0;  // | |p'(tau)| mass - 1 |
    double phase_residual = 0.0;    // | derivative_limit * mass - alpha |
};

/// Boundary contact at tau: atom mass from the Clark measure and the radial
/// limit of the slice derivative by Richardson extrapolation in 1 - r.
inline AngularDerivative angular_derivative_check(const RationalSelfMap1D& p, cd tau, int grid = 1024) {
    detail::require_unimodular(tau);
    const cd alpha = p(tau);
    if (std::abs(std::abs(alpha) - 1.0) > 1e-8)
        throw Error(ErrorCode::NoBoundaryContact, "|p(tau)| != 1");
    const cd a = alpha / std::abs(alpha);
    const auto mu = clark_measure_1d(p, a, grid);
    const Atom* hit = nullptr;
    for (const auto& at : mu.atoms())
        if (!hit || std::abs(at.position - tau) < std::abs(hit->position - tau)) hit = &at;
    if (!hit || std::abs(hit->position - tau) > 1e-6)
        throw Error(ErrorCode::NoBoundaryContact, "no Clark atom at tau");

    // Neville extrapolation to h = 0 from h = 1e-3, 1e-4, 1e-5
    const double h[3] = {1e-3, 1e-4, 1e-5};
    cd t[3];
    for (int i = 0; i < 3; ++i) t[i] = tau * p.derivative((1.0 - h[i]) * tau);
    for (int k = 1; k < 3; ++k)
        for (int i = 2; i >= k; --i) t[i] = (h[i - k] * t[i] - h[i] * t[i - 1]) / (h[i - k] - h[i]);

    AngularDerivative out;
    out.mass = hit->mass;
    out.derivative_limit = t[2];
    out.alpha = a;
    out.modulus_residual = std::abs(std::abs(p.derivative(hit->position)) * hit->mass - 1.0);
    out.phase_residual = std::abs(out.derivative_limit * out.mass - a);
    return out;
}

/// Boundary value at a non-atom point of the Cauchy integral of a purely
/// atomic measure.
inline cd boundary_cauchy_atomic(const BoundaryMeasure1D& mu, cd t) {
    cd acc = 0.0;
    for (const auto& a : mu.atoms()) acc += a.mass / (1.0 - t * std::conj(a.position));
    return acc;
}

/// Normalized arc measure of {t : |C mu(t)| > y} for a purely atomic mu. The
/// level set is located by bisection on each side of every atom; a coarse scan
/// picks up any component away from the atoms.
inline double cauchy_superlevel_measure(const BoundaryMeasure1D& mu, double y, int scan = 1 << 14) {
    if (mu.has_density()) throw Error(ErrorCode::NotInner, "superlevel measure needs a purely atomic measure");
    const auto excess = [&](double theta) { return std::abs(boundary_cauchy_atomic(mu, std::polar(1.0, theta))) - y; };

    struct Arc { double lo, hi; };
    std::vector<Arc> arcs;
    for (const auto& a : mu.atoms()) {
        const double t0 = std::arg(a.position);
        for (int side : {-1, 1}) {
            const auto g = [&](double d) { return excess(t0 + side * d); };
            double outer = a.mass / y;
            while (g(outer) > 0.0 && outer < std::numbers::pi) outer *= 2.0;
            outer = std::min(outer, std::numbers::pi);
            double inner = outer * 1e-3;
            while (g(inner) <= 0.0 && inner > 1e-300) inner *= 0.5;
            for (int it = 0; it < 200 && outer - inner > 1e-17 * outer; ++it) {
                const double mid = 0.5 * (inner + outer);
                (g(mid) > 0.0 ? inner : outer) = mid;
            }
            const double reach = 0.5 * (inner + outer);
            if (side < 0) arcs.push_back({t0 - reach, t0});
            else arcs.back().hi = t0 + reach;
        }
    }
    double covered = 0.0;
    for (const auto& arc : arcs) covered += arc.hi - arc.lo;

    // components not attached to an atom
    int stray = 0;
    for (int j = 0; j < scan; ++j) {
        const double t = kTwoPi * (j + 0.5) / scan;
        bool inside = false;
        for (const auto& arc : arcs) {
            const double d = std::remainder(t - 0.5 * (arc.lo + arc.hi), kTwoPi);
            if (std::abs(d) <= 0.5 * (arc.hi - arc.lo)) inside = true;
        }
        if (!inside && excess(t) > 0.0) ++stray;
    }
    return covered / kTwoPi + static_cast<double>(stray) / scan;
}

struct PoltoratskiEstimate {
    double estimate = 0.0;
    double target = 0.0;
};

/// pi y |{|C mu| > y}| against the singular mass, for an inner symbol's measure.
inline PoltoratskiEstimate poltoratski_1d(const BoundaryMeasure1D& mu, double y) {
    if (y < 1e2) throw Error(ErrorCode::PreconditionViolated, "Poltoratski estimate needs y >= 1e2");
    if (mu.has_density(1e-10)) throw Error(ErrorCode::NotInner, "Clark measure has an absolutely continuous part");
    return {std::numbers::pi * y * cauchy_superlevel_measure(mu, y), mu.atomic_mass()};
}

}  // namespace clark
