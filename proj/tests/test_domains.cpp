#include <clark/domains.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace clark;

namespace {

template <class F>
cd integrate(const QuadratureGrid& g, F&& f) {
    cd s = 0.0;
    for (const auto& nd : g.nodes) s += nd.weight * f(nd.point.coords);
    return s;
}

// Haar moments on the torus and sphere moments |z^a|^2 = (n-1)! a! / (n-1+|a|)!.
double sphere_moment(const std::vector<int>& a) {
    const int n = static_cast<int>(a.size());
    double num = std::tgamma(n), den = std::tgamma(n);
    int total = 0;
    for (int e : a) {
        num *= std::tgamma(e + 1);
        total += e;
    }
    den = std::tgamma(n + total);
    return num / den;
}

cd power(cd z, int k) {
    cd r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

}  // namespace

TEST(DomainDescriptor, OneVariableIsTheDisc) {
    EXPECT_EQ(DomainDescriptor::polydisc(1).kind(), DomainKind::Disc);
    EXPECT_EQ(DomainDescriptor::ball(1), DomainDescriptor::disc());
    EXPECT_EQ(domain_kind_from_string("ball"), DomainKind::Ball);
    EXPECT_THROW(domain_kind_from_string("annulus"), Error);
    EXPECT_THROW(DomainDescriptor(DomainKind::Ball, 0), Error);
}

TEST(Project, DiscHasOneOrbit) {
    const auto q = project(DomainDescriptor::disc(), BoundaryPoint{{cd(0.0, 1.0)}});
    EXPECT_NEAR(std::abs(q.representative[0] - 1.0), 0.0, 1e-15);
}

TEST(Project, PolydiscGaugeDividesByFirstCoordinate) {
    const auto q = project(DomainDescriptor::polydisc(2), BoundaryPoint{{cd(0.0, 1.0), cd(-1.0, 0.0)}});
    EXPECT_NEAR(std::abs(q.representative[0] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(q.representative[1] - cd(0.0, 1.0)), 0.0, 1e-15);
}

TEST(Project, BallGaugeFixesTheOnlyNonzeroCoordinate) {
    for (double t : {0.0, 0.7, 2.5, -1.2}) {
        const auto q = project(DomainDescriptor::ball(2), BoundaryPoint{{0.0, std::polar(1.0, t)}});
        EXPECT_NEAR(std::abs(q.representative[0]), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(q.representative[1] - 1.0), 0.0, 1e-15);
    }
}

TEST(Project, ConstantOnOrbitsAndIdempotent) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const auto ball = DomainDescriptor::ball(3);
    for (int trial = 0; trial < 50; ++trial) {
        BoundaryPoint z{{cd(g(rng), g(rng)), cd(g(rng), g(rng)), cd(g(rng), g(rng))}};
        const double r = domain_norm(ball, z.coords);
        for (auto& c : z.coords) c /= r;
        const auto q = project(ball, z);
        BoundaryPoint rotated = z;
        for (auto& c : rotated.coords) c *= std::polar(1.0, 1.3 * trial);
        const auto q2 = project(ball, rotated);
        const auto q3 = project(ball, q.representative);
        for (int i = 0; i < 3; ++i) {
            EXPECT_NEAR(std::abs(q.representative[i] - q2.representative[i]), 0.0, 1e-13);
            EXPECT_NEAR(std::abs(q.representative[i] - q3.representative[i]), 0.0, 1e-15);
        }
        // the representative lies on the orbit: its ratio to z is unimodular and common
        const cd ratio = q.representative[0] / z[0];
        EXPECT_NEAR(std::abs(ratio), 1.0, 1e-12);
        for (int i = 1; i < 3; ++i) EXPECT_NEAR(std::abs(q.representative[i] - ratio * z[i]), 0.0, 1e-12);
    }
}

TEST(Project, RejectsPointsOffTheBoundary) {
    try {
        project(DomainDescriptor::polydisc(2), BoundaryPoint{{cd(1.0), cd(0.5)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GaugeUndefined);
    }
    try {
        project(DomainDescriptor::ball(2), BoundaryPoint{{cd(1.0)}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainMismatch);
    }
}

TEST(QuotientGrid, DiscIsOnePoint) {
    GridSpec spec{DomainDescriptor::disc(), 17, 64};
    const auto g = quotient_grid(spec);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g.nodes[0].weight, 1.0);
    EXPECT_EQ(g.target, GridTarget::BetaHat);
}

TEST(QuotientGrid, PolydiscNodesAreEquispaced) {
    const int m = 8;
    const auto g = quotient_grid({DomainDescriptor::polydisc(2), m, 64});
    ASSERT_EQ(g.size(), static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        EXPECT_EQ(g.nodes[k].point[0], cd(1.0));
        EXPECT_NEAR(std::abs(g.nodes[k].point[1] - std::polar(1.0, kTwoPi * k / m)), 0.0, 1e-15);
        EXPECT_DOUBLE_EQ(g.nodes[k].weight, 1.0 / m);
    }
    EXPECT_EQ(quotient_grid({DomainDescriptor::polydisc(3), 5, 64}).size(), 25u);
}

TEST(QuotientGrid, BallMonteCarloNeedsASeed) {
    try {
        quotient_grid({DomainDescriptor::ball(2), 100, 64});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingSeed);
    }
    EXPECT_THROW(quotient_grid({DomainDescriptor::polydisc(2), 0, 64}), Error);
    GridSpec product{DomainDescriptor::ball(3), 8, 8};
    product.ball_rule = BallQuotientRule::Product;
    EXPECT_THROW(quotient_grid(product), Error);
}

TEST(QuotientGrid, BallMonteCarloSecondMoment) {
    GridSpec spec{DomainDescriptor::ball(2), 100000, 1, 11};
    const auto g = quotient_grid(spec);
    EXPECT_TRUE(g.error.stochastic);
    double mean = 0.0, sq = 0.0;
    for (const auto& nd : g.nodes) {
        const double v = std::norm(nd.point[0]);
        mean += v;
        sq += v * v;
    }
    mean /= g.size();
    const double se = std::sqrt((sq / g.size() - mean * mean) / g.size());
    EXPECT_LT(std::abs(mean - 0.5), 3.0 * se);
    // equal seeds, equal grids
    const auto g2 = quotient_grid(spec);
    EXPECT_EQ(g2.nodes[777].point[1], g.nodes[777].point[1]);
}

TEST(SliceCircle, UniformRule) {
    const auto g = slice_circle(DomainDescriptor::disc(), BoundaryPoint{{cd(1.0)}}, 4);
    const cd expected[] = {1.0, cd(0, 1), -1.0, cd(0, -1)};
    for (int k = 0; k < 4; ++k) {
        EXPECT_NEAR(std::abs(g.nodes[k].point[0] - expected[k]), 0.0, 1e-15);
        EXPECT_EQ(g.nodes[k].weight, 0.25);
    }
}

TEST(BoundaryGrid, PolydiscReproducesHaarMoments) {
    const auto g = boundary_grid({DomainDescriptor::polydisc(2), 16, 16});
    EXPECT_NEAR(std::abs(integrate(g, [](auto z) { return z[0] * std::conj(z[1]); })), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(integrate(g, [](auto z) { return power(z[1], 3) * power(std::conj(z[1]), 3); }) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(g.total_weight(), 1.0, 1e-14);
}

TEST(BoundaryGrid, RandomLowDegreePolynomialsOnThePolydisc) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> e(0, 3);
    std::normal_distribution<double> c;
    const auto g = boundary_grid({DomainDescriptor::polydisc(2), 8, 8});
    for (int trial = 0; trial < 30; ++trial) {
        // f = sum of c * z^a conj(z)^b with |a| + |b| <= 3
        std::vector<std::array<int, 4>> exps;
        std::vector<cd> coeffs;
        for (int t = 0; t < 4; ++t) {
            std::array<int, 4> x{};
            int left = 3;
            for (auto& v : x) {
                v = std::min(left, e(rng));
                left -= v;
            }
            exps.push_back(x);
            coeffs.push_back({c(rng), c(rng)});
        }
        cd exact = 0.0;
        for (std::size_t t = 0; t < exps.size(); ++t)
            if (exps[t][0] == exps[t][2] && exps[t][1] == exps[t][3]) exact += coeffs[t];
        const cd got = integrate(g, [&](auto z) {
            cd s = 0.0;
            for (std::size_t t = 0; t < exps.size(); ++t)
                s += coeffs[t] * power(z[0], exps[t][0]) * power(z[1], exps[t][1]) *
                     power(std::conj(z[0]), exps[t][2]) * power(std::conj(z[1]), exps[t][3]);
            return s;
        });
        EXPECT_NEAR(std::abs(got - exact), 0.0, 1e-12);
    }
}

TEST(BoundaryGrid, BallProductRuleIsExactForSphereMoments) {
    GridSpec spec{DomainDescriptor::ball(2), 8, 16};
    spec.ball_rule = BallQuotientRule::Product;
    const auto g = boundary_grid(spec);
    EXPECT_FALSE(g.error.stochastic);
    EXPECT_NEAR(g.total_weight(), 1.0, 1e-14);
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 3; ++b) {
            const cd got = integrate(g, [&](auto z) { return cd(std::pow(std::norm(z[0]), a) * std::pow(std::norm(z[1]), b)); });
            EXPECT_NEAR(got.real(), sphere_moment({a, b}), 1e-13) << a << "," << b;
        }
    EXPECT_NEAR(std::abs(integrate(g, [](auto z) { return z[0] * std::conj(z[1]); })), 0.0, 1e-15);
}

TEST(BoundaryGrid, BallMonteCarloWithinStandardError) {
    const auto g = boundary_grid({DomainDescriptor::ball(2), 20000, 8, 99});
    EXPECT_NEAR(g.total_weight(), 1.0, 1e-12);
    const cd got = integrate(g, [](auto z) { return cd(std::norm(z[0]) * std::norm(z[1])); });
    // Var(|z1|^2 |z2|^2) = 1/30 - 1/36 on the 3-sphere
    const double se = std::sqrt(1.0 / 30 - 1.0 / 36) / std::sqrt(20000.0);
    EXPECT_LT(std::abs(got.real() - sphere_moment({1, 1})), 4.0 * se);
}
