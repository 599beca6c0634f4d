#pragma once

// Named stiffness distributions selectable from the command line.
//   isotropic    k_eta = kbar_eta / |S|, k_tau = kbar_tau / |S|
//   biased-c1    k_eta = kappa (1 + beta c_1)
//   fabric-c1sq  k_eta = kappa (1 + beta c_1^2)
// The anisotropic ones take k_tau = ktau_ratio * k_eta.

#include "sgm/identification.hpp"

#include <map>
#include <string>
#include <vector>

namespace sgm {

using DistParams = std::map<std::string, double>;

inline std::vector<std::string> distribution_names() { return {"isotropic", "biased-c1", "fabric-c1sq"}; }

namespace detail {

inline double param_or(const DistParams& p, const std::string& key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline void require_known_params(const DistParams& p, const std::vector<std::string>& known,
                                 const std::string& name) {
    for (const auto& [k, v] : p) {
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw ValidationError("distribution '" + name + "' has no parameter '" + k + "'");
        if (!std::isfinite(v)) throw ValidationError("distribution parameter '" + k + "' must be finite");
    }
}

} // namespace detail

/// kbar_eta and kbar_tau are required for "isotropic".
inline StiffnessDistribution make_distribution(std::size_t dim, const std::string& name, const DistParams& params) {
    require_dim(dim);
    if (name == "isotropic") {
        detail::require_known_params(params, {"kbar_eta", "kbar_tau"}, name);
        if (!params.count("kbar_eta") || !params.count("kbar_tau"))
            throw ValidationError("distribution 'isotropic' needs kbar_eta and kbar_tau");
        return StiffnessDistribution::make_isotropic(dim, params.at("kbar_eta"), params.at("kbar_tau"));
    }
    if (name == "biased-c1" || name == "fabric-c1sq") {
        detail::require_known_params(params, {"kappa", "beta", "ktau_ratio"}, name);
        const double kappa = detail::param_or(params, "kappa", 1.0);
        const double beta = detail::param_or(params, "beta", 1.0);
        const double ratio = detail::param_or(params, "ktau_ratio", 0.0);
        const bool squared = name == "fabric-c1sq";
        auto ke = [=](const Orientation& c) { return kappa * (1.0 + beta * (squared ? c[0] * c[0] : c[0])); };
        auto kt = [=](const Orientation& c) { return ratio * ke(c); };
        return StiffnessDistribution::make_anisotropic(dim, ke, kt);
    }
    throw ValidationError("unknown distribution '" + name + "'");
}

} // namespace sgm
