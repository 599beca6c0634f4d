#include "oracles.hpp"
#include "sgm/distributions.hpp"
#include "sgm/energy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace sgm;
namespace vd = sgm::verify_detail;

namespace {

StiffnessDistribution dist_for(std::size_t d, const std::string& name) {
    if (name == "isotropic") return StiffnessDistribution::make_isotropic(d, 3.0, 1.25);
    return make_distribution(d, name, {{"kappa", 1.5}, {"beta", 0.7}, {"ktau_ratio", 0.3}});
}

} // namespace

TEST(EnergyMicro, ZeroStateHasZeroEnergy) {
    for (std::size_t d : {2u, 3u})
        EXPECT_EQ(energy_micro(Tensor<2>(d), Tensor<3>(d), 1.0, StiffnessDistribution::make_isotropic(d, 2, 1)), 0.0);
}

TEST(EnergyMicro, UniformDilation2D) {
    Tensor<2> G(2);
    G(0, 0) = G(1, 1) = 0.22;
    const auto dist = StiffnessDistribution::make_isotropic(2, 8.0, 0.0);
    EXPECT_NEAR(energy_micro(G, Tensor<3>(2), 1.0, dist), 0.1936, 1e-14);
    const auto t = identify(dist, 1.0);
    EXPECT_NEAR(energy_continuum(t, G, Tensor<3>(2)), 0.1936, 1e-14);
}

TEST(EnergyMicro, UniformDilationHasNoTangentialPart) {
    Tensor<2> G(3);
    G(0, 0) = G(1, 1) = G(2, 2) = 0.1;
    const double only_eta = energy_micro(G, Tensor<3>(3), 1.0, StiffnessDistribution::make_isotropic(3, 5.0, 0.0));
    const double both = energy_micro(G, Tensor<3>(3), 1.0, StiffnessDistribution::make_isotropic(3, 5.0, 7.0));
    EXPECT_NEAR(only_eta, both, 1e-15);
    EXPECT_NEAR(only_eta, 0.5 * 5.0 * 0.01, 1e-15);
}

TEST(EnergyMicro, QuadraticInTheState) {
    vd::Rng rng(31);
    for (std::size_t d : {2u, 3u}) {
        const auto dist = dist_for(d, "biased-c1");
        const auto G = vd::random_strain(d, rng);
        const auto g = vd::random_strain_gradient(d, rng);
        const double u1 = energy_micro(G, g, 1.1, dist);
        EXPECT_NEAR(energy_micro(-2.5 * G, -2.5 * g, 1.1, dist), 6.25 * u1, 1e-12 * std::abs(u1));
    }
}

TEST(EnergyMicro, NonNegativeForAdmissibleDistributions) {
    vd::Rng rng(32);
    for (std::size_t d : {2u, 3u})
        for (const char* name : {"isotropic", "biased-c1", "fabric-c1sq"})
            for (int n = 0; n < 50; ++n)
                EXPECT_GE(energy_micro(vd::random_strain(d, rng), vd::random_strain_gradient(d, rng), 0.8, dist_for(d, name)),
                          0.0);
}

TEST(EnergyMicro, Errors) {
    const auto dist = StiffnessDistribution::make_isotropic(2, 1, 1);
    EXPECT_THROW(energy_micro(Tensor<2>(2), Tensor<3>(2), 0.0, dist), ValidationError);
    EXPECT_THROW(energy_micro(Tensor<2>(3), Tensor<3>(3), 1.0, dist), ShapeError);
    EXPECT_THROW(energy_micro(Tensor<2>(2), Tensor<3>(3), 1.0, dist), ShapeError);
}

TEST(EnergyContinuum, Errors) {
    const auto t = identify(StiffnessDistribution::make_isotropic(2, 1, 1), 1.0);
    EXPECT_THROW(energy_continuum(t.C, t.M, t.D, Tensor<2>(3), Tensor<3>(3)), ShapeError);
    EXPECT_THROW(energy_continuum(t.C, t.M, Tensor<6>(3), Tensor<2>(2), Tensor<3>(2)), ShapeError);
}

TEST(EnergyContinuum, ReducesToStrainTermWithoutGradient) {
    vd::Rng rng(33);
    for (std::size_t d : {2u, 3u}) {
        const auto t = identify(dist_for(d, "biased-c1"), 1.3);
        const auto G = vd::random_strain(d, rng);
        double half_cgg = 0.0;
        t.C.for_each_index([&](const auto& x) { half_cgg += 0.5 * t.C[x] * G(x[0], x[1]) * G(x[2], x[3]); });
        EXPECT_NEAR(energy_continuum(t, G, Tensor<3>(d)), half_cgg, 1e-13);
        EXPECT_NEAR(energy_micro(G, Tensor<3>(d), 1.3, dist_for(d, "biased-c1")), half_cgg, 1e-12);
    }
}

// The identified tensors reproduce the micro energy for any state.
class EnergyEquivalence : public ::testing::TestWithParam<std::tuple<std::size_t, std::string, DisplacementMode>> {};

TEST_P(EnergyEquivalence, RandomStates) {
    const auto [d, name, mode] = GetParam();
    const auto dist = dist_for(d, name);
    const double L = 1.2;
    const auto t = identify(dist, L, mode);
    vd::Rng rng(34 + d);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const auto G = vd::random_strain(d, rng);
        const auto g = vd::random_strain_gradient(d, rng);
        const double um = energy_micro(G, g, L, dist, default_rule(d), mode);
        worst = std::max(worst, std::abs(um - energy_continuum(t, G, g)) / std::max(1.0, std::abs(um)));
    }
    EXPECT_LT(worst, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(
    AllDistributions, EnergyEquivalence,
    ::testing::Combine(::testing::Values(std::size_t{2}, std::size_t{3}),
                       ::testing::Values(std::string("isotropic"), std::string("biased-c1"), std::string("fabric-c1sq")),
                       ::testing::Values(DisplacementMode::corrected, DisplacementMode::legacy)),
    [](const auto& param_info) {
        const auto& p = param_info.param;
        std::string n = std::to_string(std::get<0>(p)) + "d_" + std::get<1>(p) + "_" + to_string(std::get<2>(p));
        for (auto& ch : n)
            if (ch == '-') ch = '_';
        return n;
    });

// Energies along a real deformation: G and gradG from a placement field.
TEST(EnergyEquivalence, PlacementFieldStates) {
    vd::Rng rng(35);
    for (std::size_t d : {2u, 3u}) {
        const auto dist = dist_for(d, "fabric-c1sq");
        const auto t = identify(dist, 0.7);
        for (int n = 0; n < 10; ++n) {
            const auto s = kinematic_state(vd::random_placement(d, rng, 0.2, true), vd::random_point(d, rng, 1.0));
            const double um = energy_micro(s.G, s.gradG, 0.7, dist);
            EXPECT_NEAR(energy_continuum(t, s.G, s.gradG), um, 1e-12 * std::max(1.0, um));
        }
    }
}

TEST(CFromEnergy, MatchesKernelTensor) {
    for (std::size_t d : {2u, 3u})
        for (auto mode : {DisplacementMode::corrected, DisplacementMode::legacy}) {
            const auto dist = dist_for(d, "biased-c1");
            EXPECT_LT(max_abs_diff(c_tensor_from_energy(dist, 1.4, default_rule(d), mode), c_tensor(dist, 1.4)), 1e-12);
        }
}
