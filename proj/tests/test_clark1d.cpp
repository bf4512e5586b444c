#include <clark/clark1d.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace clark;

namespace {

const cd kAlphas[] = {1.0, std::polar(1.0, 2.0), std::polar(1.0, 4.1), std::polar(1.0, -0.3)};

// A contractive, non-inner rational self-map of degree <= 8: a convex
// combination of two random Blaschke products.
RationalSelfMap1D random_map(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.65, 0.65), t(0.1, 0.9);
    std::uniform_int_distribution<int> deg(1, 4);
    const auto make = [&] {
        std::vector<cd> zeros(deg(rng));
        for (auto& z : zeros) z = {u(rng), u(rng)};
        return RationalSelfMap1D::blaschke(zeros, std::polar(1.0, 3.0 * u(rng)));
    };
    const auto b1 = make(), b2 = make();
    const double s = t(rng);
    poly::Coeffs num = poly::add(poly::multiply(b1.numerator(), b2.denominator()),
                                 poly::multiply(b2.numerator(), b1.denominator()), (1.0 - s) / s);
    for (auto& c : num) c *= s;
    return RationalSelfMap1D(num, poly::multiply(b1.denominator(), b2.denominator()));
}

// Poisson integral of the Clark measure by its definition.
double poisson_closed(const RationalSelfMap1D& p, cd alpha, cd w) {
    const cd v = p(w);
    return ((alpha + v) / (alpha - v)).real();
}

}  // namespace

TEST(ClarkMeasure1D, IdentityIsADirac) {
    for (cd a : kAlphas) {
        const auto mu = clark_measure_1d(RationalSelfMap1D::identity(), a, 1024);
        ASSERT_EQ(mu.atoms().size(), 1u);
        EXPECT_NEAR(std::abs(mu.atoms()[0].position - a), 0.0, 1e-12);
        EXPECT_NEAR(mu.atoms()[0].mass, 1.0, 1e-12);
        EXPECT_FALSE(mu.has_density());
        EXPECT_EQ(mu.density_mass(), 0.0);
    }
}

TEST(ClarkMeasure1D, MobiusCovarianceGivesOneAtom) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-0.7, 0.7), ang(0.0, kTwoPi);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = RationalSelfMap1D::mobius(cd(u(rng), u(rng)), std::polar(1.0, ang(rng)));
        const cd alpha = std::polar(1.0, ang(rng));
        const auto mu = clark_measure_1d(psi, psi(alpha), 1024);
        ASSERT_EQ(mu.atoms().size(), 1u);
        EXPECT_NEAR(std::abs(mu.atoms()[0].position - alpha), 0.0, 1e-10);
        EXPECT_NEAR(mu.atoms()[0].mass, 1.0 / std::abs(psi.derivative(alpha)), 1e-8);
    }
}

TEST(ClarkMeasure1D, ZeroSymbolGivesArcLength) {
    const auto mu = clark_measure_1d(RationalSelfMap1D::constant(0.0), std::polar(1.0, 0.8), 64);
    EXPECT_TRUE(mu.atoms().empty());
    for (double v : mu.density()) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(ClarkMeasure1D, SquareHasTwoHalfAtoms) {
    const auto mu = clark_measure_1d(RationalSelfMap1D({0.0, 0.0, 1.0}, {1.0}), 1.0, 256);
    ASSERT_EQ(mu.atoms().size(), 2u);
    EXPECT_NEAR(std::abs(mu.atoms()[0].position - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(mu.atoms()[1].position + 1.0), 0.0, 1e-14);
    for (const auto& a : mu.atoms()) EXPECT_NEAR(a.mass, 0.5, 1e-14);
    EXPECT_FALSE(mu.has_density());
    EXPECT_NEAR(mu.total_mass(), clark_norm(0.0, 1.0), 1e-14);
}

TEST(ClarkMeasure1D, NormFormulaForContractiveMaps) {
    // p(w) = w/2: p(0) = 0 so the mass is 1; the constant 1/2 gives (1 - 1/4)/(1/2)^2 = 3
    const auto half = clark_measure_1d(RationalSelfMap1D({0.0, 0.5}, {1.0}), 1.0, 1024);
    EXPECT_TRUE(half.atoms().empty());
    EXPECT_NEAR(half.total_mass(), 1.0, 1e-12);
    const auto c = clark_measure_1d(RationalSelfMap1D::constant(0.5), 1.0, 1024);
    EXPECT_NEAR(c.total_mass(), 3.0, 1e-12);
}

TEST(ClarkMeasure1D, NormLemmaOnRandomMaps) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_map(rng);
        ASSERT_LE(p.degree(), 8);
        for (int k = 0; k < 32; ++k) {
            const cd a = std::polar(1.0, kTwoPi * (k + 0.37) / 32);
            const auto mu = clark_measure_1d(p, a, 4096);
            worst = std::max(worst, std::abs(mu.total_mass() - clark_norm(p(0.0), a)));
        }
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(ClarkMeasure1D, DensityMatchesTheDirectFormula) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto p = random_map(rng);
        for (cd a : kAlphas) {
            const auto mu = clark_measure_1d(p, a, 512, {.adaptive = false});
            for (int j = 0; j < mu.grid_size(); j += 7) {
                const double direct = clark_density_closed_form(p, a, mu.theta(j));
                EXPECT_NEAR(mu.density()[j], direct, 1e-9 * (1.0 + direct));
            }
        }
    }
}

TEST(ClarkMeasure1D, PoissonIntegralReproducesTheDefinition) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> r(0.0, 0.9), t(0.0, kTwoPi);
    const std::vector<RationalSelfMap1D> maps{random_map(rng), RationalSelfMap1D({0.0, 0.5, 0.5}, {1.0}),
                                              RationalSelfMap1D::blaschke({0.5, cd(-0.3, 0.4)})};
    for (const auto& p : maps)
        for (cd a : kAlphas) {
            const auto mu = clark_measure_1d(p, a, 1024);
            for (int k = 0; k < 10; ++k) {
                const cd w = std::polar(r(rng), t(rng));
                EXPECT_NEAR(transform_1d(mu, w, TransformMode::Poisson).real(), poisson_closed(p, a, w), 1e-8);
            }
        }
}

TEST(ClarkMeasure1D, AtomsNextToSharpDensityPeaks) {
    // alpha just off the contact value p(1) = 1 of w(1 + w)/2: the density
    // peak is ~1e-5 wide, yet low moments stay exact
    const RationalSelfMap1D p({0.0, 0.5, 0.5}, {1.0});
    const cd a = std::polar(1.0, 0.004);
    const auto mu = clark_measure_1d(p, a, 512, {.adaptive = false});
    EXPECT_NEAR(mu.total_mass(), 1.0, 1e-12);
    // the k-th moment of mu_alpha is sum_h conj(alpha)^h <p^h, w^k>
    const auto moment = [&](int k) {
        poly::Coeffs ph{1.0};
        cd s = 0.0, ac = 1.0;
        for (int h = 1; h <= k; ++h) {
            ph = poly::multiply(ph, p.numerator());
            ac *= std::conj(a);
            if (static_cast<int>(ph.size()) > k) s += ac * ph[k];
        }
        return s;
    };
    for (int k = 1; k <= 5; ++k) {
        const cd got = mu.integrate([&](cd t) { return std::pow(std::conj(t), k); });
        EXPECT_NEAR(std::abs(got - moment(k)), 0.0, 1e-12) << k;
    }
}

TEST(ClarkMeasure1D, RejectsBadInput) {
    try {
        clark_measure_1d(RationalSelfMap1D::identity(), 1.0, 100);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedResolution);
    }
    EXPECT_THROW(clark_measure_1d(RationalSelfMap1D::identity(), 0.5, 64), Error);
    EXPECT_THROW(BoundaryMeasure1D({{cd(0.5), 1.0}}, {}), Error);
    EXPECT_THROW(BoundaryMeasure1D({}, {1.0, -0.5}), Error);
}

TEST(Transform1D, Examples) {
    EXPECT_NEAR(std::abs(transform_1d(BoundaryMeasure1D::dirac(1.0), 0.0, TransformMode::Poisson) - 1.0), 0.0, 1e-15);
    const auto beta = BoundaryMeasure1D::uniform(1.0, 64);
    EXPECT_NEAR(std::abs(transform_1d(beta, cd(0.3, -0.5), TransformMode::Cauchy) - 1.0), 0.0, 1e-14);
    const auto sq = clark_measure_1d(RationalSelfMap1D({0.0, 0.0, 1.0}, {1.0}), 1.0, 64);
    EXPECT_NEAR(std::abs(transform_1d(sq, 0.0, TransformMode::Herglotz) - 1.0), 0.0, 1e-15);
    EXPECT_THROW(transform_1d(beta, 1.0, TransformMode::Cauchy), Error);
}

TEST(Reconstruct, InvertsTheHerglotzTransform) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> r(0.0, 0.9), t(0.0, kTwoPi);
    const cd a = std::polar(1.0, 1.1);
    const auto dirac = reconstruct_symbol_1d(BoundaryMeasure1D::dirac(a), a);
    for (int k = 0; k < 10; ++k) {
        const cd w = std::polar(r(rng), t(rng));
        EXPECT_NEAR(std::abs(dirac(w) - w), 0.0, 1e-14);
    }
    EXPECT_NEAR(std::abs(reconstruct_symbol_1d(BoundaryMeasure1D::uniform(1.0), a)(cd(0.2, 0.1))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(reconstruct_symbol_1d(BoundaryMeasure1D::uniform(3.0), a)(cd(0.2, 0.1)) - a / 2.0), 0.0, 1e-14);
    // round trip through a Clark measure
    const RationalSelfMap1D p({cd(0.1, 0.2), 0.3, 0.2}, {1.0});
    const auto rec = reconstruct_symbol_1d(clark_measure_1d(p, a, 2048), a);
    // psi(0) must be a real multiple of alpha; p(0) is not, so compare the
    // Clark data instead: both have the same Poisson integral
    for (int k = 0; k < 5; ++k) {
        const cd w = std::polar(r(rng), t(rng));
        EXPECT_NEAR(poisson_closed(RationalSelfMap1D::trusted({rec(w)}, {1.0}), a, 0.0), poisson_closed(p, a, w), 1e-9);
    }
    EXPECT_THROW(reconstruct_symbol_1d(BoundaryMeasure1D(), a), Error);
}

TEST(SingularInner, AtomicMeasures) {
    const SingularInnerFunction s(BoundaryMeasure1D::dirac(1.0));
    EXPECT_NEAR(std::abs(s(0.0) - std::exp(-1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s(cd(0.0, 0.99))), 1.0, 1e-2);
    const SingularInnerFunction two(BoundaryMeasure1D({{1.0, 0.5}, {-1.0, 0.5}}, {}));
    EXPECT_NEAR(std::abs(two(0.0) - std::exp(-1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(two(cd(0.0, 0.999))), 1.0, 1e-2);
    try {
        SingularInnerFunction z{BoundaryMeasure1D()};
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroMeasure);
    }
    EXPECT_THROW(SingularInnerFunction{BoundaryMeasure1D::uniform()}, Error);
}

TEST(AngularDerivative, Examples) {
    const auto id = angular_derivative_check(RationalSelfMap1D::identity(), 1.0);
    EXPECT_NEAR(id.mass, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(id.derivative_limit - 1.0), 0.0, 1e-10);

    const auto sq = angular_derivative_check(RationalSelfMap1D({0.0, 0.0, 1.0}, {1.0}), -1.0);
    EXPECT_NEAR(sq.mass, 0.5, 1e-14);
    EXPECT_NEAR(sq.modulus_residual, 0.0, 1e-12);
    EXPECT_NEAR(std::abs(sq.derivative_limit * sq.mass - 1.0), 0.0, 1e-4);

    try {
        angular_derivative_check(RationalSelfMap1D({0.0, 0.5}, {1.0}), 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoBoundaryContact);
    }
}

TEST(AngularDerivative, AtomMassIsTheRadialPoissonLimit) {
    // independent route to mu({tau}): (1 - r)/(1 + r) P(r tau) -> mass
    const auto b = RationalSelfMap1D::blaschke({0.5, cd(-0.3, 0.4), cd(0.0, -0.6)});
    const cd a = std::polar(1.0, 0.9);
    const auto mu = clark_measure_1d(b, a, 1024);
    ASSERT_EQ(mu.atoms().size(), 3u);
    for (const auto& at : mu.atoms()) {
        const double r = 1.0 - 1e-7;
        const double limit = (1.0 - r) / (1.0 + r) * poisson_closed(b, a, r * at.position);
        EXPECT_NEAR(limit, at.mass, 1e-5 * at.mass);
        const auto ad = angular_derivative_check(b, at.position);
        EXPECT_LT(ad.phase_residual, 1e-4);
    }
}

TEST(Poltoratski, DiscExamples) {
    const auto dirac = clark_measure_1d(RationalSelfMap1D::identity(), 1.0, 64);
    const auto e = poltoratski_1d(dirac, 1e4);
    EXPECT_GE(e.estimate, 0.95);
    EXPECT_LE(e.estimate, 1.05);
    const auto b = clark_measure_1d(RationalSelfMap1D::blaschke({0.5, cd(-0.3, 0.4)}), std::polar(1.0, 2.0), 64);
    const auto eb = poltoratski_1d(b, 1e4);
    EXPECT_LT(std::abs(eb.estimate - eb.target) / eb.target, 0.05);
    EXPECT_THROW(poltoratski_1d(dirac, 10.0), Error);
    EXPECT_THROW(poltoratski_1d(clark_measure_1d(RationalSelfMap1D({0.0, 0.5}, {1.0}), 1.0, 64), 1e4), Error);
}

TEST(BoundaryMeasure1D, ScalingAndIntegration) {
    const auto mu = clark_measure_1d(RationalSelfMap1D({0.1, 0.5, 0.2}, {1.0}), std::polar(1.0, 0.5), 256);
    const auto m3 = mu.scaled(3.0);
    EXPECT_NEAR(m3.total_mass(), 3.0 * mu.total_mass(), 1e-13);
    const cd f1 = mu.integrate([](cd t) { return t * t + std::conj(t); });
    const cd f3 = m3.integrate([](cd t) { return t * t + std::conj(t); });
    EXPECT_NEAR(std::abs(f3 - 3.0 * f1), 0.0, 1e-13);
}
