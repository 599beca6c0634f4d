#pragma once

// Integration over orientation space (S^1 in 2D, S^2 in 3D): exact monomial
// moments by double factorials, and product quadrature rules.

#include "sgm/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sgm {

class OrientationDomain {
public:
    explicit OrientationDomain(std::size_t dim) : dim_(dim) { require_dim(dim); }

    static OrientationDomain circle() { return OrientationDomain(2); }
    static OrientationDomain sphere() { return OrientationDomain(3); }

    std::size_t dim() const noexcept { return dim_; }
    // 2 pi for S^1, 4 pi for S^2
    double measure() const noexcept { return dim_ == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

private:
    std::size_t dim_;
};

inline constexpr unsigned kMaxMomentDegree = 8;

// n!! with (-1)!! = 0!! = 1
constexpr double double_factorial(int n) noexcept {
    double r = 1.0;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

/// Exact integral of prod_k c_k^{e_k} over the orientation domain.
/// S^1: 2 pi prod (e_k - 1)!! / (sum e)!!;  S^2: 4 pi prod (e_k - 1)!! / (sum e + 1)!!.
/// Odd exponents give exactly zero.
inline double monomial_moment(const OrientationDomain& domain, std::span<const unsigned> exponents) {
    if (exponents.size() != domain.dim())
        throw ShapeError("monomial_moment: need one exponent per axis");
    unsigned total = 0;
    for (unsigned e : exponents) total += e;
    if (total > kMaxMomentDegree)
        throw UnsupportedDegreeError("monomial_moment: total degree " + std::to_string(total) +
                                     " exceeds " + std::to_string(kMaxMomentDegree));
    double num = 1.0;
    for (unsigned e : exponents) {
        if (e % 2 != 0) return 0.0;
        num *= double_factorial(static_cast<int>(e) - 1);
    }
    const int top = domain.dim() == 2 ? static_cast<int>(total) : static_cast<int>(total) + 1;
    return domain.measure() * num / double_factorial(top);
}

inline double monomial_moment(const OrientationDomain& domain, std::initializer_list<unsigned> exponents) {
    return monomial_moment(domain, std::span<const unsigned>(exponents.begin(), exponents.size()));
}

struct QuadratureRule {
    OrientationDomain domain;
    std::vector<Orientation> nodes;
    std::vector<double> weights;
    unsigned exact_degree;  // every polynomial of total degree <= this is integrated exactly
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
    // (P_n(z), P_n'(z)) by the three-term recurrence
    const auto legendre = [n](double z) {
        double p0 = 1.0, p1 = z;
        for (std::size_t k = 2; k <= n; ++k) {
            const double kd = static_cast<double>(k);
            const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        return std::pair{p1, static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0)};
    };
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = legendre(z).second;
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

inline constexpr unsigned kDefaultQuadratureDegree = 10;

/// S^1: equally spaced angles, count target_degree + 1 rounded up to even.
/// S^2: Gauss-Legendre in cos(theta) with ceil((target_degree + 1) / 2) nodes
///      times the S^1 rule in the azimuth.
inline QuadratureRule build_rule(const OrientationDomain& domain,
                                 unsigned target_degree = kDefaultQuadratureDegree) {
    if (target_degree < 1) throw ValidationError("build_rule: target degree must be >= 1");
    std::size_t n_phi = target_degree + 1;
    if (n_phi % 2 != 0) ++n_phi;
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(n_phi);

    QuadratureRule rule{domain, {}, {}, target_degree};
    if (domain.dim() == 2) {
        for (std::size_t k = 0; k < n_phi; ++k) {
            rule.nodes.push_back(Orientation::from_angle(dphi * static_cast<double>(k)));
            rule.weights.push_back(dphi);
        }
        rule.exact_degree = static_cast<unsigned>(n_phi - 1);
        return rule;
    }

    const std::size_t n_theta = (target_degree + 2) / 2;
    const auto [z, wz] = gauss_legendre(n_theta);
    for (std::size_t i = 0; i < n_theta; ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
        for (std::size_t k = 0; k < n_phi; ++k) {
            const double phi = dphi * static_cast<double>(k);
            rule.nodes.emplace_back(make_vector({s * std::cos(phi), s * std::sin(phi), z[i]}), 1e-14);
            rule.weights.push_back(wz[i] * dphi);
        }
    }
    rule.exact_degree = static_cast<unsigned>(std::min(2 * n_theta - 1, n_phi - 1));
    return rule;
}

/// sum_i w_i f(c_i). f must be pure; a non-finite value aborts with the node index.
template <class F>
double integrate(const QuadratureRule& rule, F&& f) {
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double v = f(rule.nodes[k]);
        if (!std::isfinite(v))
            throw EvaluationError("integrand is not finite at quadrature node " + std::to_string(k), k);
        sum += rule.weights[k] * v;
    }
    return sum;
}

} // namespace sgm
