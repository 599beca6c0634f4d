#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgm {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Index position out of range or overlapping symmetrization positions.
class IndexError : public Error {
public:
    using Error::Error;
};

// Tensor dimension/rank mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Precondition on an input value violated (non-unit orientation, L <= 0, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Monomial moment requested above the supported total degree.
class UnsupportedDegreeError : public Error {
public:
    using Error::Error;
};

// Integrand produced a non-finite value at a quadrature node.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

// A rank-6 tensor is not reproduced by the five-parameter isotropic form.
class NotIsotropicError : public Error {
public:
    NotIsotropicError(const std::string& what, std::string worst_component, double mismatch)
        : Error(what), worst_(std::move(worst_component)), mismatch_(mismatch) {}
    const std::string& worst_component() const noexcept { return worst_; }
    double mismatch() const noexcept { return mismatch_; }

private:
    std::string worst_;
    double mismatch_;
};

} // namespace sgm
