#pragma once

#include "sgm/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace sgm {

inline constexpr double kUnitTolerance = 1e-12;

// Unit vector c-hat in R^d. Construction validates unit length; inputs are
// never renormalized.
class Orientation {
public:
    explicit Orientation(const Vector& v, double tol = kUnitTolerance) : v_(v) {
        const double n = norm(v);
        if (!(std::abs(n - 1.0) <= tol))
            throw ValidationError("orientation is not a unit vector (|c| = " + std::to_string(n) + ")");
    }

    // cos(theta), sin(theta) on the unit circle.
    static Orientation from_angle(double theta) {
        return Orientation(make_vector({std::cos(theta), std::sin(theta)}));
    }

    // Polar angle from the x3 axis, azimuth in the x1-x2 plane.
    static Orientation from_spherical(double polar, double azimuth) {
        const double s = std::sin(polar);
        return Orientation(make_vector({s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)}));
    }

    std::size_t dim() const noexcept { return v_.dim(); }
    double operator[](std::size_t i) const noexcept { return v_(i); }
    const Vector& vector() const noexcept { return v_; }

private:
    Vector v_;
};

} // namespace sgm
