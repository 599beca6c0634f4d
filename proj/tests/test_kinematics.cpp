#include "oracles.hpp"
#include "sgm/kinematics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sgm;
using verify_detail::random_placement;
using verify_detail::random_point;

namespace {

PlacementField dilation(std::size_t d, double alpha) {
    PlacementField chi(d);
    for (std::size_t a = 0; a < d; ++a) {
        Exponent e{};
        e[a] = 1;
        chi.component(a).add_term(e, alpha);
    }
    return chi;
}

double max_off_identity(const Tensor<2>& F) {
    double m = 0.0;
    F.for_each_index([&](const auto& x) { m = std::max(m, std::abs(F[x] - kronecker(x[0], x[1]))); });
    return m;
}

Orientation random_orientation(std::size_t d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    if (d == 2) return Orientation::from_angle(u(rng));
    std::uniform_real_distribution<double> z(-1.0, 1.0);
    return Orientation::from_spherical(std::acos(z(rng)), u(rng));
}

} // namespace

// Polynomial placements

TEST(Polynomial, EnforcesDegreeCapAndDimension) {
    Polynomial p(2);
    EXPECT_THROW(p.add_term({2, 2, 0}, 1.0), ValidationError);
    EXPECT_THROW(p.add_term({0, 0, 1}, 1.0), ValidationError);
    EXPECT_THROW(p.add_term({1, 0, 0}, std::numeric_limits<double>::infinity()), ValidationError);
}

TEST(Polynomial, ExactDerivatives) {
    // p = 2 x^2 y - 3 y^3 + x
    Polynomial p(2);
    p.add_term({2, 1, 0}, 2.0).add_term({0, 3, 0}, -3.0).add_term({1, 0, 0}, 1.0);
    const auto x = make_vector({0.5, -1.5});
    EXPECT_DOUBLE_EQ(p.evaluate(x), 2 * 0.25 * -1.5 - 3 * -3.375 + 0.5);
    EXPECT_DOUBLE_EQ(p.derivative(x, 0), 4 * 0.5 * -1.5 + 1);
    EXPECT_DOUBLE_EQ(p.derivative(x, 1), 2 * 0.25 - 9 * 2.25);
    EXPECT_DOUBLE_EQ(p.second_derivative(x, 0, 1), 4 * 0.5);
    EXPECT_DOUBLE_EQ(p.second_derivative(x, 1, 1), -18 * -1.5);
}

// kinematic_state

TEST(KinematicState, IdentityIsUndeformed) {
    for (std::size_t d : {2u, 3u}) {
        const Vector X = d == 2 ? make_vector({0.3, -0.7}) : make_vector({0.3, -0.7, 1.1});
        const auto s = kinematic_state(PlacementField::identity(d), X);
        EXPECT_EQ(max_off_identity(s.F), 0.0);
        EXPECT_EQ(s.G.max_abs(), 0.0);
        EXPECT_EQ(s.gradG.max_abs(), 0.0);
    }
}

TEST(KinematicState, UniformDilation) {
    const auto s = kinematic_state(dilation(3, 1.2), make_vector({1.0, 2.0, 3.0}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s.G(i, j), i == j ? 0.22 : 0.0, 1e-15);
    EXPECT_EQ(s.gradG.max_abs(), 0.0);
}

TEST(KinematicState, StrainGradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(11);
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 25; ++n) {
            const auto chi = random_placement(d, rng, 0.3, true);
            const auto X = random_point(d, rng, 1.0);
            const auto s = kinematic_state(chi, X);
            EXPECT_LT(max_abs_diff(s.gradG, oracle::finite_difference_gradG(chi, X, 1e-5)), 1e-8);
        }
}

TEST(KinematicState, DeclaredSymmetries) {
    std::mt19937_64 rng(12);
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 20; ++n) {
            const auto s = kinematic_state(random_placement(d, rng, 0.5, false), random_point(d, rng, 1.0));
            EXPECT_TRUE(check_symmetry(s.G, {{{0, 1}}, {}}, 0.0).symmetric);
            EXPECT_TRUE(check_symmetry(s.gradF, {{{1, 2}}, {}}, 0.0).symmetric);
            EXPECT_TRUE(check_symmetry(s.gradG, {{{0, 1}}, {}}, 1e-15).symmetric);
        }
}

// H tensor

TEST(HTensor, VanishesWithoutSecondGradient) {
    PlacementField chi = PlacementField::identity(3);
    chi.component(0).add_term({0, 1, 0}, 0.4);
    const auto s = kinematic_state(chi, make_vector({0.1, 0.2, 0.3}));
    EXPECT_EQ(h_tensor_direct(s).max_abs(), 0.0);
    EXPECT_EQ(h_tensor_from_strain(s).max_abs(), 0.0);
}

TEST(HTensor, EqualsGradFWhenFIsIdentity) {
    // quadratic terms have zero gradient at the origin, so F = I there
    std::mt19937_64 rng(13);
    PlacementField chi = PlacementField::identity(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t a = 0; a < 3; ++a)
        for (unsigned i = 0; i < 3; ++i)
            for (unsigned j = i; j < 3; ++j) {
                Exponent e{};
                ++e[i];
                ++e[j];
                chi.component(a).add_term(e, u(rng));
            }
    const auto s = kinematic_state(chi, make_vector({0.0, 0.0, 0.0}));
    ASSERT_EQ(max_off_identity(s.F), 0.0);
    EXPECT_LT(max_abs_diff(h_tensor_direct(s), s.gradF), 1e-15);
}

TEST(HTensor, DirectIsSymmetricInLastTwoIndices) {
    std::mt19937_64 rng(14);
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 50; ++n) {
            const auto s = kinematic_state(random_placement(d, rng, 0.5, false), random_point(d, rng, 0.8));
            EXPECT_LT(check_symmetry(h_tensor_direct(s), {{{1, 2}}, {}}, 1e-14).max_violation, 1e-14);
        }
}

TEST(HTensor, FromStrainSingleComponent) {
    Tensor<3> g(2);
    g(0, 0, 1) = 1.0;  // G_11,2
    const auto H = h_tensor_from_strain(g);
    Tensor<3> expected(2);
    expected(0, 0, 1) = 1.0;   // H_112
    expected(0, 1, 0) = 1.0;   // H_121
    expected(1, 0, 0) = -1.0;  // H_211
    EXPECT_EQ(H, expected);
}

// The correction identity H_ibc = F_ai F_ab,c = G_ib,c + G_ic,b - G_bc,i.
TEST(HTensor, IdentityHoldsNearIdentity) {
    std::mt19937_64 rng(15);
    double worst = 0.0, spread = 0.0;
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 100; ++n) {
            const auto chi = random_placement(d, rng, 0.03, true);
            const auto s = kinematic_state(chi, random_point(d, rng, 1.0));
            spread = std::max(spread, max_off_identity(s.F));
            worst = std::max(worst, max_abs_diff(h_tensor_direct(s), h_tensor_from_strain(s)));
        }
    EXPECT_LT(worst, 1e-12);
    EXPECT_LE(spread, 0.3);
}

TEST(HTensor, IdentityHoldsForWildGradients) {
    std::mt19937_64 rng(16);
    double worst = 0.0, largest = 0.0;
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 100; ++n) {
            const auto s = kinematic_state(random_placement(d, rng, 0.5, false), random_point(d, rng, 0.8));
            largest = std::max(largest, s.F.max_abs());
            worst = std::max(worst, max_abs_diff(h_tensor_direct(s), h_tensor_from_strain(s)));
        }
    EXPECT_LT(worst, 1e-9);
    EXPECT_GT(largest, 1.0);  // genuinely far from the identity
}

// objective relative displacement

TEST(RelativeDisplacement, ZeroStrainGivesZero) {
    const auto u = objective_relative_displacement(Tensor<2>(3), Tensor<3>(3), Orientation::from_spherical(0.3, 1.0), 1.0);
    EXPECT_EQ(u.max_abs(), 0.0);
}

TEST(RelativeDisplacement, DilationIsPurelyNormal) {
    const auto s = kinematic_state(dilation(2, 1.2), make_vector({0.2, 0.1}));
    const auto c = Orientation::from_angle(0.7);
    for (auto mode : {DisplacementMode::corrected, DisplacementMode::legacy}) {
        const auto u = objective_relative_displacement(s, c, 1.0, mode);
        EXPECT_NEAR(u(0), 0.44 * c[0], 1e-15);
        EXPECT_NEAR(u(1), 0.44 * c[1], 1e-15);
    }
}

TEST(RelativeDisplacement, CorrectedMinusLegacyIsTheExtraTerm) {
    std::mt19937_64 rng(17);
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 30; ++n) {
            const auto G = verify_detail::random_strain(d, rng);
            const auto g = verify_detail::random_strain_gradient(d, rng);
            const auto c = random_orientation(d, rng);
            const double L = 0.7;
            const auto diff = objective_relative_displacement(G, g, c, L) -
                              objective_relative_displacement(G, g, c, L, DisplacementMode::legacy);
            for (std::size_t i = 0; i < d; ++i) {
                double e = 0.0;
                for (std::size_t b = 0; b < d; ++b)
                    for (std::size_t k = 0; k < d; ++k) e += (g(i, k, b) - g(b, k, i)) * c[k] * c[b];
                EXPECT_NEAR(diff(i), 0.5 * L * L * e, 1e-14);
            }
        }
}

TEST(RelativeDisplacement, ValidatesInputs) {
    const Tensor<2> G(2);
    const Tensor<3> g(2);
    const auto c = Orientation::from_angle(0.1);
    EXPECT_THROW(objective_relative_displacement(G, g, c, 0.0), ValidationError);
    EXPECT_THROW(objective_relative_displacement(G, g, c, -1.0), ValidationError);
    EXPECT_THROW(objective_relative_displacement(Tensor<2>(3), Tensor<3>(3), c, 1.0), ShapeError);
    EXPECT_THROW(Orientation(make_vector({1.0, 1e-5})), ValidationError);
    EXPECT_NO_THROW(Orientation(make_vector({1.0, 1e-7})));  // |c| - 1 = 5e-15
}

// projections

TEST(Projection, PureNormal) {
    const auto c = Orientation::from_angle(1.1);
    const auto p = project_displacement(0.44 * c.vector(), c);
    EXPECT_NEAR(p.u_eta, 0.22, 1e-16);
    EXPECT_LT(p.u_tau.max_abs(), 1e-16);
}

TEST(Projection, PureTangential) {
    const auto c = Orientation(make_vector({0.0, 0.0, 1.0}));
    const auto u = make_vector({0.3, -0.2, 0.0});
    const auto p = project_displacement(u, c);
    EXPECT_EQ(p.u_eta, 0.0);
    EXPECT_EQ(p.u_tau, u);
}

TEST(Projection, DecompositionAndPythagoras) {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 100; ++n) {
            const auto c = random_orientation(d, rng);
            Vector v(d);
            for (std::size_t k = 0; k < d; ++k) v(k) = u(rng);
            const auto p = project_displacement(v, c);
            EXPECT_NEAR(dot(p.u_tau, c.vector()), 0.0, 1e-15);
            EXPECT_LT(max_abs_diff(2 * p.u_eta * c.vector() + p.u_tau, v), 1e-15);
            EXPECT_NEAR(dot(v, v) - 4 * p.u_eta * p.u_eta - dot(p.u_tau, p.u_tau), 0.0, 1e-14);
        }
}

// expanded squares

TEST(SquaredProjections, ZeroState) {
    const auto sq = squared_projections_closed_form(Tensor<2>(2), Tensor<3>(2), Orientation::from_angle(0.4), 1.0);
    EXPECT_EQ(sq.u_eta_sq, 0.0);
    EXPECT_EQ(sq.u_tau_sq, 0.0);
}

TEST(SquaredProjections, SimpleShear) {
    Tensor<2> G(2);
    G(0, 1) = G(1, 0) = 0.05;  // gamma = 0.1
    const auto sq = squared_projections_closed_form(G, Tensor<3>(2), Orientation::from_angle(0.0), 1.0);
    EXPECT_NEAR(sq.u_eta_sq, 0.0, 1e-17);
    EXPECT_NEAR(sq.u_tau_sq, 0.01, 1e-16);
}

TEST(SquaredProjections, ExpansionsMatchDirectSquaring) {
    std::mt19937_64 rng(19);
    double worst = 0.0;
    for (std::size_t d : {2u, 3u})
        for (int n = 0; n < 100; ++n) {
            const auto G = verify_detail::random_strain(d, rng);
            const auto g = verify_detail::random_strain_gradient(d, rng);
            const auto c = random_orientation(d, rng);
            const double L = 0.5 + 0.01 * n;
            const auto p = project_displacement(objective_relative_displacement(G, g, c, L), c);
            const auto sq = squared_projections_closed_form(G, g, c, L);
            worst = std::max({worst, std::abs(sq.u_eta_sq - p.u_eta * p.u_eta),
                              std::abs(sq.u_tau_sq - dot(p.u_tau, p.u_tau))});
        }
    EXPECT_LT(worst, 1e-12);
}
