#pragma once

// Finite-deformation kinematics of a grain pair: placement gradients, the
// Green-Saint-Venant strain and its gradient, the H tensor, the objective
// relative displacement and its normal/tangential projections.

#include "sgm/orientation.hpp"
#include "sgm/tensor.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace sgm {

// ---------------------------------------------------------------------------
// Polynomial placement fields

using Exponent = std::array<unsigned, kMaxDim>;

inline unsigned total_degree(const Exponent& e) noexcept { return e[0] + e[1] + e[2]; }

// Polynomial in up to three variables; zero exponents beyond dim.
class Polynomial {
public:
    static constexpr unsigned kMaxDegree = 3;

    explicit Polynomial(std::size_t dim) : dim_(dim) { require_dim(dim); }

    std::size_t dim() const noexcept { return dim_; }
    const std::map<Exponent, double>& terms() const noexcept { return terms_; }

    Polynomial& add_term(const Exponent& e, double coeff) {
        if (total_degree(e) > kMaxDegree)
            throw ValidationError("placement polynomial degree exceeds 3");
        for (std::size_t k = dim_; k < kMaxDim; ++k)
            if (e[k] != 0) throw ValidationError("exponent on a variable beyond the dimension");
        if (!std::isfinite(coeff)) throw ValidationError("non-finite polynomial coefficient");
        terms_[e] += coeff;
        return *this;
    }

    double evaluate(const Vector& x) const { return eval_derivative(x, {}); }

    double derivative(const Vector& x, std::size_t k) const { return eval_derivative(x, {k}); }

    double second_derivative(const Vector& x, std::size_t k, std::size_t l) const {
        return eval_derivative(x, {k, l});
    }

private:
    // Exact derivative with respect to the listed variables, evaluated at x.
    double eval_derivative(const Vector& x, std::initializer_list<std::size_t> wrt) const {
        if (x.dim() != dim_) throw ShapeError("evaluation point has wrong dimension");
        double sum = 0.0;
        for (const auto& [exp, coeff] : terms_) {
            Exponent e = exp;
            double c = coeff;
            for (std::size_t k : wrt) {
                if (e[k] == 0) {
                    c = 0.0;
                    break;
                }
                c *= e[k];
                --e[k];
            }
            if (c == 0.0) continue;
            for (std::size_t k = 0; k < dim_; ++k)
                for (unsigned p = 0; p < e[k]; ++p) c *= x(k);
            sum += c;
        }
        return sum;
    }

    std::size_t dim_;
    std::map<Exponent, double> terms_;
};

// chi: X -> x, one polynomial per spatial component.
class PlacementField {
public:
    explicit PlacementField(std::size_t dim) : dim_(dim), components_(dim, Polynomial(dim)) {
        require_dim(dim);
    }

    static PlacementField identity(std::size_t dim) {
        PlacementField chi(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            Exponent e{};
            e[a] = 1;
            chi.component(a).add_term(e, 1.0);
        }
        return chi;
    }

    std::size_t dim() const noexcept { return dim_; }
    Polynomial& component(std::size_t a) { return components_.at(a); }
    const Polynomial& component(std::size_t a) const { return components_.at(a); }

private:
    std::size_t dim_;
    std::vector<Polynomial> components_;
};

// ---------------------------------------------------------------------------
// Kinematic state at a material point

struct KinematicState {
    Tensor<2> F;      // F_ab = chi_a,b
    Tensor<3> gradF;  // F_ab,c, symmetric in (b,c)
    Tensor<2> G;      // 1/2 (F^T F - I)
    Tensor<3> gradG;  // G_ij,h, symmetric in (i,j)
};

inline Tensor<2> green_strain(const Tensor<2>& F) {
    const std::size_t d = F.dim();
    Tensor<2> G(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += F(k, i) * F(k, j);
            G(i, j) = 0.5 * (s - kronecker(i, j));
        }
    return G;
}

// G_ij,h = 1/2 (F_ki,h F_kj + F_ki F_kj,h)
inline Tensor<3> green_strain_gradient(const Tensor<2>& F, const Tensor<3>& gradF) {
    const std::size_t d = F.dim();
    if (gradF.dim() != d) throw ShapeError("F and gradF dimensions differ");
    Tensor<3> gG(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t h = 0; h < d; ++h) {
                double s = 0.0;
                for (std::size_t k = 0; k < d; ++k)
                    s += gradF(k, i, h) * F(k, j) + F(k, i) * gradF(k, j, h);
                gG(i, j, h) = 0.5 * s;
            }
    return gG;
}

inline KinematicState kinematic_state(const PlacementField& chi, const Vector& X) {
    const std::size_t d = chi.dim();
    if (X.dim() != d) throw ShapeError("evaluation point has wrong dimension");
    if (!X.all_finite()) throw ValidationError("evaluation point is not finite");
    Tensor<2> F(d);
    Tensor<3> gradF(d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            F(a, b) = chi.component(a).derivative(X, b);
            for (std::size_t c = 0; c < d; ++c)
                gradF(a, b, c) = chi.component(a).second_derivative(X, b, c);
        }
    Tensor<2> G = green_strain(F);
    Tensor<3> gradG = green_strain_gradient(F, gradF);
    return {F, gradF, G, gradG};
}

// ---------------------------------------------------------------------------
// H tensor, two routes

/// H_ibc = F_ai F_ab,c, straight from the placement derivatives.
inline Tensor<3> h_tensor_direct(const KinematicState& s) {
    const std::size_t d = s.F.dim();
    Tensor<3> H(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c) {
                double v = 0.0;
                for (std::size_t a = 0; a < d; ++a) v += s.F(a, i) * s.gradF(a, b, c);
                H(i, b, c) = v;
            }
    return H;
}

/// H_ibc = G_ib,c + G_ic,b - G_bc,i, from the strain gradient alone.
inline Tensor<3> h_tensor_from_strain(const Tensor<3>& gradG) {
    const std::size_t d = gradG.dim();
    Tensor<3> H(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c)
                H(i, b, c) = gradG(i, b, c) + gradG(i, c, b) - gradG(b, c, i);
    return H;
}

inline Tensor<3> h_tensor_from_strain(const KinematicState& s) { return h_tensor_from_strain(s.gradG); }

// ---------------------------------------------------------------------------
// Objective relative displacement and projections

// corrected: second-order term built from the H combination.
// legacy:    the pre-correction identification using G_ib,c alone.
enum class DisplacementMode { corrected, legacy };

inline const char* to_string(DisplacementMode m) noexcept {
    return m == DisplacementMode::corrected ? "corrected" : "legacy";
}

inline void require_positive_length(double L) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw ValidationError("grain-pair distance L must be positive and finite");
}

inline void require_same_dim(std::size_t a, std::size_t b) {
    if (a != b) throw ShapeError("dimension mismatch between strain and orientation");
}

/// u^np_i = 2 G_ij c_j L + L^2/2 X_ibc c_b c_c, with X = H(gradG) in corrected
/// mode and X_ibc = G_ib,c in legacy mode.
inline Vector objective_relative_displacement(const Tensor<2>& G, const Tensor<3>& gradG,
                                              const Orientation& c, double L,
                                              DisplacementMode mode = DisplacementMode::corrected) {
    require_positive_length(L);
    const std::size_t d = G.dim();
    require_same_dim(d, c.dim());
    require_same_dim(d, gradG.dim());
    Vector u(d);
    for (std::size_t i = 0; i < d; ++i) {
        double first = 0.0;
        for (std::size_t j = 0; j < d; ++j) first += G(i, j) * c[j];
        double second = 0.0;
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t cc = 0; cc < d; ++cc) {
                double x = gradG(i, b, cc);
                if (mode == DisplacementMode::corrected) x += gradG(i, cc, b) - gradG(b, cc, i);
                second += x * c[cc] * c[b];
            }
        u(i) = 2.0 * first * L + 0.5 * L * L * second;
    }
    return u;
}

inline Vector objective_relative_displacement(const KinematicState& s, const Orientation& c, double L,
                                              DisplacementMode mode = DisplacementMode::corrected) {
    return objective_relative_displacement(s.G, s.gradG, c, L, mode);
}

struct PairProjection {
    double u_eta;  // 1/2 u^np . c
    Vector u_tau;  // u^np - 2 u_eta c
};

inline PairProjection project_displacement(const Vector& u_np, const Orientation& c) {
    require_same_dim(u_np.dim(), c.dim());
    const double u_eta = 0.5 * dot(u_np, c.vector());
    Vector u_tau = u_np - (2.0 * u_eta) * c.vector();
    return {u_eta, u_tau};
}

struct SquaredProjections {
    double u_eta_sq;
    double u_tau_sq;
};

/// Squared normal and tangential displacements from their expanded
/// polynomial forms in G and gradG (corrected kinematics). Assumes G symmetric
/// and gradG symmetric in its first two indices.
inline SquaredProjections squared_projections_closed_form(const Tensor<2>& G, const Tensor<3>& gradG,
                                                          const Orientation& chat, double L) {
    require_positive_length(L);
    const std::size_t d = G.dim();
    require_same_dim(d, chat.dim());
    require_same_dim(d, gradG.dim());
    const auto c = [&](std::size_t k) { return chat[k]; };
    const auto dl = kronecker;
    const double L2 = L * L, L3 = L2 * L, L4 = L3 * L;

    // u_eta^2 = L^2 G_ij G_ab cccc + L^3/2 G_ij G_ab,c ccccc + L^4/16 G_ij,h G_ab,c cccccc
    double eta2 = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) {
                    const double c4 = c(i) * c(j) * c(a) * c(b);
                    eta2 += L2 * G(i, j) * G(a, b) * c4;
                    for (std::size_t k = 0; k < d; ++k) {
                        eta2 += 0.5 * L3 * G(i, j) * gradG(a, b, k) * c4 * c(k);
                        for (std::size_t h = 0; h < d; ++h)
                            eta2 += L4 / 16.0 * gradG(i, j, h) * gradG(a, b, k) * c4 * c(h) * c(k);
                    }
                }

    double tau2 = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    tau2 += L2 * G(a, b) * G(i, j) *
                            (dl(i, a) * c(b) * c(j) + dl(j, a) * c(b) * c(i) + dl(i, b) * c(a) * c(j) +
                             dl(j, b) * c(a) * c(i) - 4.0 * c(i) * c(j) * c(a) * c(b));
                    for (std::size_t h = 0; h < d; ++h) {
                        tau2 += 0.5 * L3 * G(a, b) * gradG(i, j, h) *
                                (2.0 * dl(i, a) * c(b) * c(h) * c(j) + 2.0 * dl(j, a) * c(b) * c(h) * c(i) -
                                 2.0 * dl(h, a) * c(b) * c(j) * c(i) + 2.0 * dl(i, b) * c(a) * c(h) * c(j) +
                                 2.0 * dl(j, b) * c(a) * c(h) * c(i) - 2.0 * dl(h, b) * c(a) * c(j) * c(i) -
                                 4.0 * c(i) * c(j) * c(a) * c(b) * c(h));
                        for (std::size_t k = 0; k < d; ++k) {
                            // k plays the role of the third index of G_ab,c
                            const double w =
                                (dl(i, a) * c(k) * c(b) * c(h) * c(j) + dl(j, a) * c(k) * c(b) * c(h) * c(i) -
                                 dl(h, a) * c(k) * c(b) * c(j) * c(i)) +
                                (dl(i, b) * c(k) * c(a) * c(h) * c(j) + dl(j, b) * c(k) * c(a) * c(h) * c(i) -
                                 dl(h, b) * c(k) * c(a) * c(j) * c(i)) -
                                (dl(i, k) * c(b) * c(a) * c(h) * c(j) + dl(j, k) * c(b) * c(a) * c(h) * c(i) -
                                 dl(h, k) * c(b) * c(a) * c(j) * c(i)) -
                                c(i) * c(j) * c(h) * c(a) * c(b) * c(k);
                            tau2 += 0.25 * L4 * gradG(a, b, k) * gradG(i, j, h) * w;
                        }
                    }
                }
    return {eta2, tau2};
}

inline SquaredProjections squared_projections_closed_form(const KinematicState& s, const Orientation& c,
                                                          double L) {
    return squared_projections_closed_form(s.G, s.gradG, c, L);
}

} // namespace sgm
