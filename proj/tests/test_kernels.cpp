#include <clark/kernel_checks.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace clark;
using namespace clark::kernels;

namespace {

SymbolMap z1z2() { return SymbolMap(PolyMapND(DomainDescriptor::polydisc(2), {{{1, 1}, 1.0}})); }

std::vector<cd> random_point(std::mt19937_64& rng, double r = 0.9) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {std::polar(r * u(rng), kTwoPi * u(rng)), std::polar(r * u(rng), kTwoPi * u(rng))};
}

SliceField polydisc_field(const SymbolMap& phi, cd alpha, int m, int s) {
    return SliceField(phi, alpha, quotient_grid({DomainDescriptor::polydisc(2), m, s}), s);
}

}  // namespace

TEST(Kernels, CenterValues) {
    for (const auto& d : {DomainDescriptor::disc(), DomainDescriptor::polydisc(3), DomainDescriptor::ball(3)}) {
        const std::vector<cd> zero(d.dimension(), 0.0);
        std::vector<cd> zeta(d.dimension(), 0.0);
        zeta[0] = 1.0;
        if (d.kind() == DomainKind::Polydisc)
            for (auto& c : zeta) c = std::polar(1.0, 0.4);
        EXPECT_NEAR(std::abs(cauchy(d, zero, zeta) - 1.0), 0.0, 1e-15);
        EXPECT_NEAR(poisson(d, zero, zeta), 1.0, 1e-15);
    }
}

TEST(Kernels, BallPoissonValue) {
    const auto ball = DomainDescriptor::ball(2);
    const std::vector<cd> z{0.5, 0.0}, zeta{1.0, 0.0};
    EXPECT_NEAR(poisson(ball, z, zeta), 9.0, 1e-13);
    // same value from the closed form (1 - |z|^2)^n / |1 - <z, zeta>|^{2n}
    EXPECT_NEAR(std::pow(0.75, 2) / std::pow(0.5, 4), 9.0, 1e-13);
}

TEST(Kernels, PolydiscCauchyIsAProduct) {
    const auto pd = DomainDescriptor::polydisc(2);
    const std::vector<cd> z{0.5, 1.0 / 3.0};
    EXPECT_NEAR(std::abs(cauchy(pd, z, z) - 1.5), 0.0, 1e-14);
    const auto disc = DomainDescriptor::disc();
    const cd f1 = cauchy(disc, std::vector<cd>{0.5}, std::vector<cd>{0.5});
    const cd f2 = cauchy(disc, std::vector<cd>{1.0 / 3.0}, std::vector<cd>{1.0 / 3.0});
    EXPECT_NEAR(std::abs(f1 * f2 - 1.5), 0.0, 1e-14);
}

TEST(Kernels, ErrorsAndDispatch) {
    const auto pd = DomainDescriptor::polydisc(2);
    try {
        szego_kernel(pd, std::vector<cd>{1.0, 0.0}, std::vector<cd>{1.0, 1.0}, KernelKind::Cauchy);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EvaluationTooCloseToBoundary);
    }
    EXPECT_THROW(szego_kernel(pd, std::vector<cd>{0.1}, std::vector<cd>{1.0, 1.0}, KernelKind::Cauchy), Error);
    EXPECT_THROW(szego_kernel(pd, std::vector<cd>{0.1, 0.1}, std::vector<cd>{1.0, 1.0}, KernelKind::CPhi), Error);
    const cd h = szego_kernel(pd, std::vector<cd>{0.1, 0.2}, std::vector<cd>{1.0, 1.0}, KernelKind::Herglotz);
    EXPECT_NEAR(std::abs(h - (2.0 / (0.9 * 0.8) - 1.0)), 0.0, 1e-14);
}

TEST(CPhiGram, PositiveOnRandomSets) {
    std::mt19937_64 rng(12);
    const auto phi = z1z2();
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::vector<cd>> pts;
        for (int k = 0; k < 12; ++k) pts.push_back(random_point(rng));
        const auto g = cphi_gram(phi, pts);
        EXPECT_GE(g.min_eigenvalue, -1e-10 * g.norm);
        EXPECT_TRUE(g.positive_semidefinite());
        EXPECT_FALSE(g.has_duplicates);
    }
}

TEST(CPhiGram, SinglePointAndZeroSymbol) {
    const auto phi = z1z2();
    const std::vector<cd> z{0.5, 0.5};
    const auto one = cphi_gram(phi, {z});
    EXPECT_NEAR(one.min_eigenvalue, (1.0 - 1.0 / 16) / (0.75 * 0.75), 1e-14);
    const auto dup = cphi_gram(phi, {z, z});
    EXPECT_TRUE(dup.has_duplicates);
    EXPECT_TRUE(dup.positive_semidefinite());

    const SymbolMap zero(PolyMapND(DomainDescriptor::ball(2), {{{0, 0}, 0.0}}));
    std::mt19937_64 rng(3);
    std::vector<std::vector<cd>> pts;
    for (int k = 0; k < 10; ++k) pts.push_back(random_point(rng, 0.6));
    EXPECT_TRUE(cphi_gram(zero, pts).positive_semidefinite());
    EXPECT_THROW(cphi_gram(zero, {}), Error);
}

TEST(KernelPairing, Examples) {
    const auto phi = z1z2();
    const auto field = polydisc_field(phi, 1.0, 64, 64);
    const std::vector<cd> zero{0.0, 0.0};
    const auto r0 = kernel_pairing_check(field, zero, zero);
    EXPECT_NEAR(r0.lhs.real(), 1.0, 1e-14);
    EXPECT_NEAR(r0.rhs.real(), 1.0, 1e-14);

    // diagonal: C(z,z) times the Poisson integral
    const std::vector<cd> z{cd(0.3, 0.1), cd(-0.2, 0.4)};
    const auto rd = kernel_pairing_check(field, z, z);
    const cd pz = phi(z);
    const double diag = (1.0 - std::norm(pz)) / std::norm(1.0 - pz) * cauchy(phi.domain(), z, z).real();
    EXPECT_NEAR(std::abs(rd.rhs - diag), 0.0, 1e-14);
    EXPECT_LT(rd.residual, 1e-10);
}

TEST(KernelPairing, RandomPairsAtFullResolution) {
    std::mt19937_64 rng(21);
    const auto field = polydisc_field(z1z2(), 1.0, 256, 512);
    for (int k = 0; k < 10; ++k) {
        const auto z = random_point(rng), zp = random_point(rng);
        EXPECT_LT(kernel_pairing_check(field, z, zp).residual, 1e-6);
        EXPECT_LT(model_kernel_image(field, z, zp).residual, 1e-6);
    }
}

TEST(KernelPairing, ResidualsShrinkUnderResolutionDoubling) {
    std::mt19937_64 rng(5);
    const auto phi = z1z2().post_composed(RationalSelfMap1D::mobius(cd(0.3, 0.2)));
    const auto z = random_point(rng, 0.85), zp = random_point(rng, 0.85);
    double previous = std::numeric_limits<double>::infinity();
    for (int m : {8, 16, 32, 64}) {
        const auto field = polydisc_field(phi, std::polar(1.0, 0.5), m, 8 * m);
        const double r = std::max(kernel_pairing_check(field, z, zp).residual, model_kernel_image(field, z, zp).residual);
        // strictly smaller, or already at the roundoff floor
        EXPECT_TRUE(r < previous || r < 1e-13) << m << ": " << r << " after " << previous;
        previous = r;
    }
    EXPECT_LT(previous, 1e-6);
}

TEST(ModelImage, Examples) {
    const auto phi = z1z2();
    const auto field = polydisc_field(phi, std::polar(1.0, 1.2), 64, 64);
    const std::vector<cd> zero{0.0, 0.0};
    const auto r = model_kernel_image(field, zero, zero);
    EXPECT_NEAR(std::abs(r.lhs - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r.rhs - 1.0), 0.0, 1e-14);
    // z = 0 restates the Cauchy lemma times (1 - conj(alpha) phi(w))
    const std::vector<cd> w{cd(0.2, 0.3), cd(0.5, -0.1)};
    const auto rz = model_kernel_image(field, zero, w);
    const cd pw = phi(w);
    const cd cauchy_form = clark_cauchy_closed_form(pw, 0.0, field.alpha());
    EXPECT_NEAR(std::abs(rz.rhs - (1.0 - std::conj(field.alpha()) * pw) * cauchy_form), 0.0, 1e-14);
    EXPECT_LT(rz.residual, 1e-10);
}
