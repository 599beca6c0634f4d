#pragma once

// Identification of the stiffness tensors C (rank 4), M (rank 5) and D
// (rank 6) from a grain-pair stiffness distribution, the isotropic closed
// forms, and the parameter conversions built on them.
//
// Each tensor integrand has the shape (k_eta - 4 k_tau) P(c) + k_tau Q(c)
// with P, Q polynomial in the orientation c. The kernels below evaluate P
// and Q through a monomial functor, so the same kernel is integrated either
// pointwise at quadrature nodes (any distribution) or by exact monomial
// moments (isotropic distributions).

#include "sgm/component_table.hpp"
#include "sgm/kinematics.hpp"
#include "sgm/orientation.hpp"
#include "sgm/quadrature.hpp"
#include "sgm/tensor.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sgm {

// ---------------------------------------------------------------------------
// Stiffness distributions

struct IsotropicStiffness {
    double kbar_eta;  // normal stiffness integrated over all orientations
    double kbar_tau;  // tangential stiffness integrated over all orientations
};

struct StiffnessDistribution {
    std::size_t dim;
    std::function<double(const Orientation&)> k_eta;  // stiffness density per solid angle
    std::function<double(const Orientation&)> k_tau;
    std::optional<IsotropicStiffness> isotropic;

    // k = kbar / (2 pi) on S^1, kbar / (4 pi) on S^2
    static StiffnessDistribution make_isotropic(std::size_t dim, double kbar_eta, double kbar_tau) {
        const double measure = OrientationDomain(dim).measure();
        const double ke = kbar_eta / measure;
        const double kt = kbar_tau / measure;
        return {dim, [ke](const Orientation&) { return ke; }, [kt](const Orientation&) { return kt; },
                IsotropicStiffness{kbar_eta, kbar_tau}};
    }

    static StiffnessDistribution make_anisotropic(std::size_t dim,
                                                  std::function<double(const Orientation&)> k_eta,
                                                  std::function<double(const Orientation&)> k_tau) {
        require_dim(dim);
        return {dim, std::move(k_eta), std::move(k_tau), std::nullopt};
    }

    static StiffnessDistribution zero(std::size_t dim) { return make_isotropic(dim, 0.0, 0.0); }
};

/// Spot-checks k_eta, k_tau >= 0 at the rule's nodes; one message per
/// offending stiffness.
inline std::vector<std::string> admissibility_warnings(const StiffnessDistribution& dist,
                                                       const QuadratureRule& rule) {
    std::vector<std::string> out;
    double min_eta = 0.0, min_tau = 0.0;
    for (const auto& c : rule.nodes) {
        min_eta = std::min(min_eta, dist.k_eta(c));
        min_tau = std::min(min_tau, dist.k_tau(c));
    }
    if (min_eta < 0.0) out.push_back("k_eta is negative at some orientations (min " + std::to_string(min_eta) + ")");
    if (min_tau < 0.0) out.push_back("k_tau is negative at some orientations (min " + std::to_string(min_tau) + ")");
    return out;
}

// ---------------------------------------------------------------------------
// Integrand kernels. `m(i, j, ...)` stands for the product c_i c_j ...
// (pointwise) or its orientation average (moments). Returned pair is (P, Q).

namespace kernel {

using Idx = std::size_t;

template <class Mono>
std::pair<double, double> c(Idx a, Idx b, Idx i, Idx j, Mono&& m) {
    const auto dl = kronecker;
    const double P = m(i, j, a, b);
    const double Q = dl(i, a) * m(b, j) + dl(j, a) * m(b, i) + dl(i, b) * m(a, j) + dl(j, b) * m(a, i);
    return {P, Q};
}

template <class Mono>
std::pair<double, double> m(Idx a, Idx b, Idx i, Idx j, Idx h, DisplacementMode mode, Mono&& mo) {
    const auto dl = kronecker;
    const double P = mo(a, b, i, j, h);
    double Q;
    if (mode == DisplacementMode::corrected) {
        Q = 2.0 * (dl(i, a) * mo(b, h, j) + dl(j, a) * mo(b, h, i) - dl(h, a) * mo(b, j, i)) +
            2.0 * (dl(i, b) * mo(a, h, j) + dl(j, b) * mo(a, h, i) - dl(h, b) * mo(a, j, i));
    } else {
        Q = dl(i, a) * mo(b, j, h) + dl(i, b) * mo(a, j, h) + dl(j, a) * mo(b, i, h) + dl(j, b) * mo(a, i, h);
    }
    return {P, Q};
}

template <class Mono>
std::pair<double, double> d(Idx a, Idx b, Idx c, Idx i, Idx j, Idx h, DisplacementMode mode, Mono&& m) {
    const auto dl = kronecker;
    const double P = m(i, j, h, a, b, c);
    double Q;
    if (mode == DisplacementMode::corrected) {
        Q = 4.0 * ((dl(i, a) * m(c, b, h, j) + dl(j, a) * m(c, b, h, i) - dl(h, a) * m(c, b, j, i)) +
                   (dl(i, b) * m(c, a, h, j) + dl(j, b) * m(c, a, h, i) - dl(h, b) * m(c, a, j, i)) -
                   (dl(i, c) * m(b, a, h, j) + dl(j, c) * m(b, a, h, i) - dl(h, c) * m(b, a, j, i)));
    } else {
        Q = dl(i, a) * m(b, j, c, h) + dl(i, b) * m(a, j, c, h) + dl(j, a) * m(b, i, c, h) +
            dl(j, b) * m(a, i, c, h);
    }
    return {P, Q};
}

// Product of orientation components at one node.
struct PointMonomial {
    const Orientation& c;
    template <class... I>
    double operator()(I... idx) const {
        return (c[idx] * ...);
    }
};

// Orientation integral of the monomial divided by the domain measure.
struct AveragedMonomial {
    OrientationDomain domain;
    template <class... I>
    double operator()(I... idx) const {
        std::array<unsigned, kMaxDim> e{};
        ((++e[idx]), ...);
        return monomial_moment(domain, std::span<const unsigned>(e.data(), domain.dim())) / domain.measure();
    }
};

} // namespace kernel

// ---------------------------------------------------------------------------
// Tensor assembly

struct IdentifiedTensors {
    std::size_t dim;
    double L;
    Tensor<4> C;
    Tensor<5> M;
    Tensor<6> D;
    std::vector<std::string> warnings;
};

namespace detail {

template <std::size_t Rank, class Kernel>
Tensor<Rank> integrate_tensor(const StiffnessDistribution& dist, const QuadratureRule& rule, double prefactor,
                              Kernel&& kern) {
    if (rule.domain.dim() != dist.dim) throw ShapeError("quadrature rule and distribution dimensions differ");
    Tensor<Rank> T(dist.dim);
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const Orientation& c = rule.nodes[n];
        const double ke = dist.k_eta(c);
        const double kt = dist.k_tau(c);
        if (!std::isfinite(ke) || !std::isfinite(kt))
            throw EvaluationError("stiffness not finite at quadrature node " + std::to_string(n), n);
        const double w = rule.weights[n] * prefactor;
        const kernel::PointMonomial mono{c};
        T.for_each_index([&](const auto& idx) {
            const auto [P, Q] = kern(idx, mono);
            T[idx] += w * ((ke - 4.0 * kt) * P + kt * Q);
        });
    }
    return T;
}

template <std::size_t Rank, class Kernel>
Tensor<Rank> moment_tensor(std::size_t dim, const IsotropicStiffness& k, double prefactor, Kernel&& kern) {
    Tensor<Rank> T(dim);
    const kernel::AveragedMonomial mono{OrientationDomain(dim)};
    T.for_each_index([&](const auto& idx) {
        const auto [P, Q] = kern(idx, mono);
        T[idx] = prefactor * ((k.kbar_eta - 4.0 * k.kbar_tau) * P + k.kbar_tau * Q);
    });
    return T;
}

inline auto c_kern() {
    return [](const auto& x, const auto& mono) { return kernel::c(x[0], x[1], x[2], x[3], mono); };
}
inline auto m_kern(DisplacementMode mode) {
    return [mode](const auto& x, const auto& mono) { return kernel::m(x[0], x[1], x[2], x[3], x[4], mode, mono); };
}
inline auto d_kern(DisplacementMode mode) {
    return [mode](const auto& x, const auto& mono) {
        return kernel::d(x[0], x[1], x[2], x[3], x[4], x[5], mode, mono);
    };
}

} // namespace detail

inline QuadratureRule default_rule(std::size_t dim) { return build_rule(OrientationDomain(dim)); }

/// C_abij = L^2 int [(k_eta - 4 k_tau) c_i c_j c_a c_b
///                   + k_tau (d_ia c_b c_j + d_ja c_b c_i + d_ib c_a c_j + d_jb c_a c_i)] dS
inline Tensor<4> c_tensor(const StiffnessDistribution& dist, double L, const QuadratureRule& rule) {
    require_positive_length(L);
    return detail::integrate_tensor<4>(dist, rule, L * L, detail::c_kern());
}
inline Tensor<4> c_tensor(const StiffnessDistribution& dist, double L) {
    return c_tensor(dist, L, default_rule(dist.dim));
}

/// M_abijh = L^3/4 int [(k_eta - 4 k_tau) c_a c_b c_i c_j c_h + k_tau Q_M] dS
inline Tensor<5> m_tensor(const StiffnessDistribution& dist, double L, const QuadratureRule& rule,
                          DisplacementMode mode = DisplacementMode::corrected) {
    require_positive_length(L);
    return detail::integrate_tensor<5>(dist, rule, L * L * L / 4.0, detail::m_kern(mode));
}
inline Tensor<5> m_tensor(const StiffnessDistribution& dist, double L,
                          DisplacementMode mode = DisplacementMode::corrected) {
    return m_tensor(dist, L, default_rule(dist.dim), mode);
}

/// D_abcijh = L^4/16 int [(k_eta - 4 k_tau) c_i c_j c_h c_a c_b c_c + k_tau Q_D] dS
inline Tensor<6> d_tensor(const StiffnessDistribution& dist, double L, const QuadratureRule& rule,
                          DisplacementMode mode = DisplacementMode::corrected) {
    require_positive_length(L);
    const double L4 = L * L * L * L;
    return detail::integrate_tensor<6>(dist, rule, L4 / 16.0, detail::d_kern(mode));
}
inline Tensor<6> d_tensor(const StiffnessDistribution& dist, double L,
                          DisplacementMode mode = DisplacementMode::corrected) {
    return d_tensor(dist, L, default_rule(dist.dim), mode);
}

/// C, M, D by quadrature together with admissibility warnings.
inline IdentifiedTensors identify(const StiffnessDistribution& dist, double L,
                                  DisplacementMode mode = DisplacementMode::corrected,
                                  unsigned degree = kDefaultQuadratureDegree) {
    const auto rule = build_rule(OrientationDomain(dist.dim), degree);
    return {dist.dim,
            L,
            c_tensor(dist, L, rule),
            m_tensor(dist, L, rule, mode),
            d_tensor(dist, L, rule, mode),
            admissibility_warnings(dist, rule)};
}

/// Isotropic C, M, D from exact double-factorial moments.
inline IdentifiedTensors isotropic_tensors_by_moments(std::size_t dim, double L, const IsotropicStiffness& k,
                                                      DisplacementMode mode = DisplacementMode::corrected) {
    require_dim(dim);
    require_positive_length(L);
    return {dim,
            L,
            detail::moment_tensor<4>(dim, k, L * L, detail::c_kern()),
            detail::moment_tensor<5>(dim, k, L * L * L / 4.0, detail::m_kern(mode)),
            detail::moment_tensor<6>(dim, k, L * L * L * L / 16.0, detail::d_kern(mode)),
            {}};
}

// ---------------------------------------------------------------------------
// Isotropic closed forms

struct NamedValue {
    std::string name;
    double value;
};

struct IsotropicClosedForms {
    IdentifiedTensors tensors;
    std::vector<NamedValue> c_groups;  // C_1111, C_1122, C_1212
    std::vector<NamedValue> d_groups;  // d1..d6 (2D) or d1..d7 (3D)
};

/// Fills every nonzero component of C and D from the published group table;
/// M vanishes identically for isotropic distributions.
inline IsotropicClosedForms isotropic_closed_forms(std::size_t dim, double L, double kbar_eta, double kbar_tau) {
    require_dim(dim);
    require_positive_length(L);
    IsotropicClosedForms out{{dim, L, Tensor<4>(dim), Tensor<5>(dim), Tensor<6>(dim), {}}, {}, {}};
    for (const auto& g : c_groups(dim)) {
        const double v = g.value(L, kbar_eta, kbar_tau);
        out.c_groups.push_back({std::string(g.name), v});
        for (const auto& row : g.rows)
            for (const auto& e : row.components) out.tensors.C[parse_index<4>(e.index, dim)] = row.multiplier * v;
    }
    for (const auto& g : d_groups(dim)) {
        const double v = g.value(L, kbar_eta, kbar_tau);
        out.d_groups.push_back({std::string(g.name), v});
        for (const auto& row : g.rows)
            for (const auto& e : row.components) out.tensors.D[parse_index<6>(e.index, dim)] = row.multiplier * v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parameter conversions

struct LameParameters {
    double lambda;
    double mu;
};

/// lambda = C_1122, mu = 1/2 (C_1111 - C_1122) from the closed-form C groups.
inline LameParameters lame_from_k(std::size_t dim, double L, double kbar_eta, double kbar_tau) {
    require_dim(dim);
    require_positive_length(L);
    const auto& g = c_groups(dim);
    const double c1111 = g[0].value(L, kbar_eta, kbar_tau);
    const double c1122 = g[1].value(L, kbar_eta, kbar_tau);
    return {c1122, 0.5 * (c1111 - c1122)};
}

struct EngineeringConstants {
    double young;
    double nu;
};

/// 2D: Y = L^2 ke (ke + 4 kt) / (3 ke + 4 kt),  nu = (ke - 4 kt) / (3 ke + 4 kt)
/// 3D: Y = L^2 ke (ke + 6 kt) / (6 (ke + kt)),  nu = (ke - 4 kt) / (4 (ke + kt))
inline EngineeringConstants engineering_from_k(std::size_t dim, double L, double kbar_eta, double kbar_tau) {
    require_dim(dim);
    require_positive_length(L);
    const double ke = kbar_eta, kt = kbar_tau;
    if (dim == 2) {
        const double den = 3.0 * ke + 4.0 * kt;
        if (!(den > 0.0)) throw ValidationError("engineering_from_k: 3 kbar_eta + 4 kbar_tau must be positive");
        return {L * L * ke * (ke + 4.0 * kt) / den, (ke - 4.0 * kt) / den};
    }
    const double den = ke + kt;
    if (!(den > 0.0)) throw ValidationError("engineering_from_k: kbar_eta + kbar_tau must be positive");
    return {L * L * ke * (ke + 6.0 * kt) / (6.0 * den), (ke - 4.0 * kt) / (4.0 * den)};
}

struct IntegratedStiffness {
    double kbar_eta;
    double kbar_tau;
    std::vector<std::string> warnings;  // set when a result is negative
    bool admissible() const noexcept { return warnings.empty(); }
};

/// Inverse of engineering_from_k.
/// 2D: ke = -2Y / (L^2 (nu - 1)),   kt = (3 nu - 1) Y / (2 L^2 (nu^2 - 1))
/// 3D: ke = 3Y / (L^2 (1 - 2 nu)),  kt = (4 nu - 1) 3Y / (4 L^2 (2 nu^2 + nu - 1))
inline IntegratedStiffness k_from_engineering(std::size_t dim, double L, double young, double nu) {
    require_dim(dim);
    require_positive_length(L);
    if (!(young > 0.0) || !std::isfinite(young)) throw ValidationError("Young's modulus must be positive");
    if (!std::isfinite(nu)) throw ValidationError("Poisson ratio must be finite");
    const double L2 = L * L;
    IntegratedStiffness k{};
    if (dim == 2) {
        if (nu == 1.0 || nu == -1.0) throw ValidationError("2D Poisson ratio must differ from 1 and -1");
        k.kbar_eta = -2.0 * young / (L2 * (nu - 1.0));
        k.kbar_tau = (3.0 * nu - 1.0) * young / (2.0 * L2 * (nu * nu - 1.0));
    } else {
        if (nu == 0.5 || nu == -1.0) throw ValidationError("3D Poisson ratio must differ from 1/2 and -1");
        k.kbar_eta = 3.0 * young / (L2 * (1.0 - 2.0 * nu));
        k.kbar_tau = (4.0 * nu - 1.0) * 3.0 * young / (4.0 * L2 * (2.0 * nu * nu + nu - 1.0));
    }
    if (k.kbar_eta < 0.0) k.warnings.push_back("kbar_eta is negative: physically inadmissible");
    if (k.kbar_tau < 0.0) k.warnings.push_back("kbar_tau is negative: physically inadmissible");
    return k;
}

// ---------------------------------------------------------------------------
// Five-parameter isotropic representation of D (3D)

struct IsoCoefficients {
    double c3 = 0.0, c4 = 0.0, c5 = 0.0, c6 = 0.0, c7 = 0.0;
};

/// D_ijklmn = c3 (d_ij d_kl d_mn + d_in d_jk d_lm + d_ij d_km d_ln + d_ik d_jn d_lm)
///          + c4 d_ij d_kn d_ml
///          + c5 (d_ik d_jl d_mn + d_im d_jk d_ln + d_ik d_jm d_ln + d_il d_jk d_mn)
///          + c6 (d_il d_jm d_kn + d_im d_jl d_kn)
///          + c7 (d_il d_jn d_mk + d_im d_jn d_lk + d_in d_jl d_km + d_in d_jm d_kl)
inline Tensor<6> d_from_iso_params(const IsoCoefficients& c) {
    Tensor<6> D(3);
    const auto d = kronecker;
    D.for_each_index([&](const auto& x) {
        const auto [i, j, k, l, m, n] = x;
        D[x] = c.c3 * (d(i, j) * d(k, l) * d(m, n) + d(i, n) * d(j, k) * d(l, m) + d(i, j) * d(k, m) * d(l, n) +
                       d(i, k) * d(j, n) * d(l, m)) +
               c.c4 * d(i, j) * d(k, n) * d(m, l) +
               c.c5 * (d(i, k) * d(j, l) * d(m, n) + d(i, m) * d(j, k) * d(l, n) + d(i, k) * d(j, m) * d(l, n) +
                       d(i, l) * d(j, k) * d(m, n)) +
               c.c6 * (d(i, l) * d(j, m) * d(k, n) + d(i, m) * d(j, l) * d(k, n)) +
               c.c7 * (d(i, l) * d(j, n) * d(m, k) + d(i, m) * d(j, n) * d(l, k) + d(i, n) * d(j, l) * d(k, m) +
                       d(i, n) * d(j, m) * d(k, l));
    });
    return D;
}

inline constexpr double kDefaultTolerance = 1e-10;

/// c3..c7 from the probe components D_112233, D_111221, D_111111, D_221122,
/// D_221221. Throws NotIsotropicError when the five-parameter form does not
/// reproduce D within tol * max(1, max|D|).
inline IsoCoefficients iso_params_from_d(const Tensor<6>& D, double tol = kDefaultTolerance) {
    if (D.dim() != 3) throw ShapeError("iso_params_from_d: the isotropic representation is three-dimensional");
    const double d111111 = D(0, 0, 0, 0, 0, 0);
    const double d221221 = D(1, 1, 0, 1, 1, 0);
    const double d111221 = D(0, 0, 0, 1, 1, 0);
    const double d221122 = D(1, 1, 0, 0, 1, 1);
    const double d112233 = D(0, 0, 1, 1, 2, 2);
    IsoCoefficients c;
    c.c3 = d112233;
    c.c4 = d111221 - 2.0 * d112233;
    c.c5 = 0.25 * (d111111 - 2.0 * d112233 - 2.0 * d221122 - d221221);
    c.c6 = 0.5 * (-d111221 + 2.0 * d112233 + d221221);
    c.c7 = 0.5 * (-d112233 + d221122);

    const Tensor<6> R = d_from_iso_params(c);
    double worst = 0.0;
    std::array<std::size_t, 6> worst_idx{};
    D.for_each_index([&](const auto& x) {
        const double e = std::abs(D[x] - R[x]);
        if (e > worst) {
            worst = e;
            worst_idx = x;
        }
    });
    if (worst > tol * std::max(1.0, D.max_abs()))
        throw NotIsotropicError("D is not isotropic: worst component " + index_name("D", worst_idx) +
                                    " deviates by " + std::to_string(worst),
                                index_name("D", worst_idx), worst);
    return c;
}

struct MindlinCoefficients {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
};

/// a1 = 2 c3, a2 = 2 c4, a3 = 2 c5, a4 = c6, a5 = 2 c7
inline MindlinCoefficients mindlin_from_c(const IsoCoefficients& c) {
    return {2.0 * c.c3, 2.0 * c.c4, 2.0 * c.c5, c.c6, 2.0 * c.c7};
}

// ---------------------------------------------------------------------------
// Everything derivable from (dim, L, kbar_eta, kbar_tau)

struct IsotropicMaterial {
    std::size_t dim;
    double L;
    double kbar_eta;
    double kbar_tau;
    double lambda;
    double mu;
    std::optional<EngineeringConstants> engineering;  // empty when the denominator degenerates
    std::optional<IsoCoefficients> c;                 // 3D only
    std::optional<MindlinCoefficients> a;             // 3D only
    std::vector<NamedValue> d_groups;
    std::vector<std::string> warnings;
};

inline IsotropicMaterial isotropic_material(std::size_t dim, double L, double kbar_eta, double kbar_tau) {
    const auto lame = lame_from_k(dim, L, kbar_eta, kbar_tau);
    IsotropicMaterial mat{dim, L, kbar_eta, kbar_tau, lame.lambda, lame.mu, std::nullopt, std::nullopt,
                          std::nullopt, isotropic_closed_forms(dim, L, kbar_eta, kbar_tau).d_groups, {}};
    try {
        mat.engineering = engineering_from_k(dim, L, kbar_eta, kbar_tau);
    } catch (const ValidationError& e) {
        mat.warnings.push_back(e.what());
    }
    if (dim == 3) {
        IsoCoefficients c;
        const auto& f = iso_coefficients_3d();
        c.c3 = f[0].value(L, kbar_eta, kbar_tau);
        c.c4 = f[1].value(L, kbar_eta, kbar_tau);
        c.c5 = f[2].value(L, kbar_eta, kbar_tau);
        c.c6 = f[3].value(L, kbar_eta, kbar_tau);
        c.c7 = f[4].value(L, kbar_eta, kbar_tau);
        mat.c = c;
        mat.a = mindlin_from_c(c);
    }
    if (kbar_eta < 0.0) mat.warnings.push_back("kbar_eta is negative: physically inadmissible");
    if (kbar_tau < 0.0) mat.warnings.push_back("kbar_tau is negative: physically inadmissible");
    if (mat.lambda < 0.0) mat.warnings.push_back("lambda is negative");
    return mat;
}

} // namespace sgm
