#pragma once

// Strain energy density in two forms: summed over grain pairs (micro) and
// through the identified tensors (continuum). For matching kinematics they
// agree to quadrature accuracy.

#include "sgm/identification.hpp"

namespace sgm {

/// U = int 1/2 k_eta u_eta^2 + 1/2 k_tau |u_tau|^2 dS
inline double energy_micro(const Tensor<2>& G, const Tensor<3>& gradG, double L, const StiffnessDistribution& dist,
                           const QuadratureRule& rule, DisplacementMode mode = DisplacementMode::corrected) {
    require_positive_length(L);
    require_same_dim(G.dim(), dist.dim);
    require_same_dim(gradG.dim(), dist.dim);
    if (rule.domain.dim() != dist.dim) throw ShapeError("quadrature rule and distribution dimensions differ");
    return integrate(rule, [&](const Orientation& c) {
        const auto p = project_displacement(objective_relative_displacement(G, gradG, c, L, mode), c);
        return 0.5 * dist.k_eta(c) * p.u_eta * p.u_eta + 0.5 * dist.k_tau(c) * dot(p.u_tau, p.u_tau);
    });
}

inline double energy_micro(const Tensor<2>& G, const Tensor<3>& gradG, double L, const StiffnessDistribution& dist,
                           DisplacementMode mode = DisplacementMode::corrected) {
    return energy_micro(G, gradG, L, dist, default_rule(dist.dim), mode);
}

/// U = 1/2 C_abij G_ij G_ab + M_abijh G_ab G_ij,h + 1/2 D_abcijh G_ij,h G_ab,c
inline double energy_continuum(const Tensor<4>& C, const Tensor<5>& M, const Tensor<6>& D, const Tensor<2>& G,
                               const Tensor<3>& gradG) {
    const std::size_t d = G.dim();
    if (C.dim() != d || M.dim() != d || D.dim() != d || gradG.dim() != d)
        throw ShapeError("energy_continuum: tensors and strain must share one dimension");
    double u = 0.0;
    C.for_each_index([&](const auto& x) { u += 0.5 * C[x] * G(x[2], x[3]) * G(x[0], x[1]); });
    M.for_each_index([&](const auto& x) { u += M[x] * G(x[0], x[1]) * gradG(x[2], x[3], x[4]); });
    D.for_each_index(
        [&](const auto& x) { u += 0.5 * D[x] * gradG(x[3], x[4], x[5]) * gradG(x[0], x[1], x[2]); });
    return u;
}

inline double energy_continuum(const IdentifiedTensors& t, const Tensor<2>& G, const Tensor<3>& gradG) {
    return energy_continuum(t.C, t.M, t.D, G, gradG);
}

/// C recovered from the micro energy at gradG = 0 by polarization:
/// C_abij = U(E_ab + E_ij) - U(E_ab) - U(E_ij) with E_ab = sym(e_a x e_b).
/// Works for either kinematics, which is how legacy C is obtained.
inline Tensor<4> c_tensor_from_energy(const StiffnessDistribution& dist, double L, const QuadratureRule& rule,
                                      DisplacementMode mode = DisplacementMode::corrected) {
    const std::size_t d = dist.dim;
    const Tensor<3> zero(d);
    const auto basis = [d](std::size_t a, std::size_t b) {
        Tensor<2> E(d);
        E(a, b) += 0.5;
        E(b, a) += 0.5;
        return E;
    };
    const auto U = [&](const Tensor<2>& G) { return energy_micro(G, zero, L, dist, rule, mode); };
    Tensor<4> C(d);
    C.for_each_index([&](const auto& x) {
        const auto Eab = basis(x[0], x[1]);
        const auto Eij = basis(x[2], x[3]);
        C[x] = U(Eab + Eij) - U(Eab) - U(Eij);
    });
    return C;
}

} // namespace sgm
