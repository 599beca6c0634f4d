#pragma once

// Dense multi-index tensors of rank 1..6 over dimension 2 or 3, plus the
// index-symmetrization operators used by the stiffness identification.
//
// Storage is row-major in canonical index order (first index slowest) and is
// always dense: a rank-6 tensor in 3D holds all 729 entries. Symmetries are
// asserted by check_symmetry, never exploited for compression.

#include "sgm/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sgm {

inline constexpr std::size_t kMaxDim = 3;

constexpr std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < exp; ++k) r *= base;
    return r;
}

inline void require_dim(std::size_t dim) {
    if (dim != 2 && dim != 3)
        throw ValidationError("dimension must be 2 or 3, got " + std::to_string(dim));
}

template <std::size_t Rank>
class Tensor {
    static_assert(Rank >= 1 && Rank <= 6, "supported ranks are 1..6");

public:
    static constexpr std::size_t rank = Rank;
    static constexpr std::size_t capacity = ipow(kMaxDim, Rank);
    using Index = std::array<std::size_t, Rank>;

    explicit Tensor(std::size_t dim) : dim_(dim), size_(ipow(dim, Rank)) {
        require_dim(dim);
        data_.fill(0.0);
    }

    static Tensor from_values(std::size_t dim, std::span<const double> values) {
        Tensor t(dim);
        if (values.size() != t.size_)
            throw ShapeError("expected " + std::to_string(t.size_) + " entries, got " +
                             std::to_string(values.size()));
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (!std::isfinite(values[k]))
                throw ValidationError("non-finite tensor entry at flat offset " + std::to_string(k));
            t.data_[k] = values[k];
        }
        return t;
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return size_; }

    std::size_t flat(const Index& idx) const noexcept {
        std::size_t off = 0;
        for (std::size_t p = 0; p < Rank; ++p) off = off * dim_ + idx[p];
        return off;
    }

    Index unflat(std::size_t off) const noexcept {
        Index idx{};
        for (std::size_t p = Rank; p-- > 0;) {
            idx[p] = off % dim_;
            off /= dim_;
        }
        return idx;
    }

    double& operator[](const Index& idx) noexcept { return data_[flat(idx)]; }
    double operator[](const Index& idx) const noexcept { return data_[flat(idx)]; }

    template <class... I>
        requires(sizeof...(I) == Rank)
    double& operator()(I... i) noexcept {
        return (*this)[Index{static_cast<std::size_t>(i)...}];
    }
    template <class... I>
        requires(sizeof...(I) == Rank)
    double operator()(I... i) const noexcept {
        return (*this)[Index{static_cast<std::size_t>(i)...}];
    }

    double at(const Index& idx) const {
        for (std::size_t p = 0; p < Rank; ++p)
            if (idx[p] >= dim_) throw IndexError("tensor index out of range");
        return (*this)[idx];
    }

    std::span<const double> values() const noexcept { return {data_.data(), size_}; }
    std::span<double> values() noexcept { return {data_.data(), size_}; }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.begin() + size_,
                           [](double v) { return std::isfinite(v); });
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (std::size_t k = 0; k < size_; ++k) m = std::max(m, std::abs(data_[k]));
        return m;
    }

    // Calls f(index) for every multi-index in canonical order.
    template <class F>
    void for_each_index(F&& f) const {
        for (std::size_t off = 0; off < size_; ++off) f(unflat(off));
    }

    Tensor& operator+=(const Tensor& o) {
        same_shape(o);
        for (std::size_t k = 0; k < size_; ++k) data_[k] += o.data_[k];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        same_shape(o);
        for (std::size_t k = 0; k < size_; ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Tensor& operator*=(double s) noexcept {
        for (std::size_t k = 0; k < size_; ++k) data_[k] *= s;
        return *this;
    }

    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(Tensor a, double s) { return a *= s; }
    friend Tensor operator*(double s, Tensor a) { return a *= s; }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.dim_ == b.dim_ &&
               std::equal(a.data_.begin(), a.data_.begin() + a.size_, b.data_.begin());
    }

private:
    void same_shape(const Tensor& o) const {
        if (o.dim_ != dim_) throw ShapeError("tensor dimension mismatch");
    }

    std::size_t dim_;
    std::size_t size_;
    std::array<double, capacity> data_;
};

using Vector = Tensor<1>;

inline double dot(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw ShapeError("vector dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a(i) * b(i);
    return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline Vector make_vector(std::initializer_list<double> v) {
    return Vector::from_values(v.size(), std::span<const double>(v.begin(), v.size()));
}

template <std::size_t Rank>
double max_abs_diff(const Tensor<Rank>& a, const Tensor<Rank>& b) {
    if (a.dim() != b.dim()) throw ShapeError("max_abs_diff: dimension mismatch");
    double m = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
    return m;
}

// ---------------------------------------------------------------------------
// Component names. Human-facing indices are 1-based: (0,0,1,1) -> "C_1122".

template <std::size_t Rank>
std::string index_name(std::string_view symbol, const std::array<std::size_t, Rank>& idx) {
    std::string s(symbol);
    s += '_';
    for (std::size_t p : idx) s += static_cast<char>('1' + p);
    return s;
}

template <std::size_t Rank>
std::array<std::size_t, Rank> parse_index(std::string_view digits, std::size_t dim) {
    if (digits.size() != Rank)
        throw IndexError("index string '" + std::string(digits) + "' has wrong length");
    std::array<std::size_t, Rank> idx{};
    for (std::size_t p = 0; p < Rank; ++p) {
        const int v = digits[p] - '1';
        if (v < 0 || static_cast<std::size_t>(v) >= dim)
            throw IndexError("index string '" + std::string(digits) + "' out of range");
        idx[p] = static_cast<std::size_t>(v);
    }
    return idx;
}

// ---------------------------------------------------------------------------
// Index permutations and symmetrization.

template <std::size_t Rank>
using Permutation = std::array<std::size_t, Rank>;

template <std::size_t Rank>
constexpr Permutation<Rank> identity_permutation() {
    Permutation<Rank> p{};
    for (std::size_t k = 0; k < Rank; ++k) p[k] = k;
    return p;
}

// Index seen at position k after permuting: out[k] = idx[perm[k]].
template <std::size_t Rank>
std::array<std::size_t, Rank> apply_permutation(const Permutation<Rank>& perm,
                                                const std::array<std::size_t, Rank>& idx) {
    std::array<std::size_t, Rank> out{};
    for (std::size_t k = 0; k < Rank; ++k) out[k] = idx[perm[k]];
    return out;
}

// result(i_0..i_{R-1}) = t(i_{perm[0]}, .., i_{perm[R-1]})
template <std::size_t Rank>
Tensor<Rank> permuted(const Tensor<Rank>& t, const Permutation<Rank>& perm) {
    Tensor<Rank> r(t.dim());
    t.for_each_index([&](const auto& idx) { r[idx] = t[apply_permutation(perm, idx)]; });
    return r;
}

template <std::size_t Rank>
Permutation<Rank> transposition(std::size_t i, std::size_t j) {
    auto p = identity_permutation<Rank>();
    std::swap(p[i], p[j]);
    return p;
}

/// A_(i..j) = 1/2 (A + A with positions i, j interchanged).
template <std::size_t Rank>
Tensor<Rank> symmetrize_single(const Tensor<Rank>& t, std::size_t i, std::size_t j) {
    if (i >= Rank || j >= Rank) throw IndexError("symmetrize_single: position out of range");
    if (i == j) throw IndexError("symmetrize_single: positions must differ");
    Tensor<Rank> r = t + permuted(t, transposition<Rank>(i, j));
    return r *= 0.5;
}

/// Nested rule A_(a(bc)d) = 1/4 (A_abcd + A_acbd + A_dbca + A_dcba), with the
/// outer pair at positions (a, d) and the inner pair at (b, c).
template <std::size_t Rank>
Tensor<Rank> symmetrize_nested(const Tensor<Rank>& t, std::pair<std::size_t, std::size_t> outer,
                               std::pair<std::size_t, std::size_t> inner) {
    const std::array<std::size_t, 4> pos{outer.first, outer.second, inner.first, inner.second};
    for (std::size_t k = 0; k < 4; ++k) {
        if (pos[k] >= Rank) throw IndexError("symmetrize_nested: position out of range");
        for (std::size_t m = k + 1; m < 4; ++m)
            if (pos[k] == pos[m]) throw IndexError("symmetrize_nested: positions overlap");
    }
    const auto swap_in = transposition<Rank>(inner.first, inner.second);
    const auto swap_out = transposition<Rank>(outer.first, outer.second);
    const auto swap_both = apply_permutation(swap_out, swap_in);
    Tensor<Rank> r = t + permuted(t, swap_in) + permuted(t, swap_out) + permuted(t, swap_both);
    return r *= 0.25;
}

// Interchange symmetries a tensor is expected to carry.
//   groups:     index positions that may be freely permuted among themselves
//   pair_swaps: equal-length blocks of positions that may be exchanged
//               wholesale, e.g. {{0,1},{2,3}} for the major symmetry of C
struct SymmetrySpec {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> pair_swaps;

    template <std::size_t Rank>
    void validate() const {
        std::set<std::size_t> seen;
        for (const auto& g : groups) {
            for (std::size_t p : g) {
                if (p >= Rank) throw IndexError("symmetry group position out of range");
                if (!seen.insert(p).second)
                    throw IndexError("position " + std::to_string(p) + " appears in two groups");
            }
        }
        for (const auto& [a, b] : pair_swaps) {
            if (a.size() != b.size()) throw IndexError("pair swap blocks differ in length");
            std::set<std::size_t> used;
            for (std::size_t p : a)
                if (p >= Rank || !used.insert(p).second) throw IndexError("invalid pair swap block");
            for (std::size_t p : b)
                if (p >= Rank || !used.insert(p).second) throw IndexError("invalid pair swap block");
        }
    }

    template <std::size_t Rank>
    std::vector<Permutation<Rank>> generators() const {
        validate<Rank>();
        std::vector<Permutation<Rank>> gens;
        for (const auto& g : groups)
            for (std::size_t k = 0; k < g.size(); ++k)
                for (std::size_t m = k + 1; m < g.size(); ++m)
                    gens.push_back(transposition<Rank>(g[k], g[m]));
        for (const auto& [a, b] : pair_swaps) {
            auto p = identity_permutation<Rank>();
            for (std::size_t k = 0; k < a.size(); ++k) std::swap(p[a[k]], p[b[k]]);
            gens.push_back(p);
        }
        return gens;
    }
};

template <std::size_t Rank>
struct SymmetryReport {
    bool symmetric = true;
    double max_violation = 0.0;
    std::optional<std::array<std::size_t, Rank>> worst;
};

/// True iff every entry matches each of its images under the spec's
/// generators within the absolute tolerance.
template <std::size_t Rank>
SymmetryReport<Rank> check_symmetry(const Tensor<Rank>& t, const SymmetrySpec& spec, double tol) {
    SymmetryReport<Rank> rep;
    const auto gens = spec.generators<Rank>();
    t.for_each_index([&](const auto& idx) {
        for (const auto& g : gens) {
            const double v = std::abs(t[idx] - t[apply_permutation(g, idx)]);
            if (v > rep.max_violation) {
                rep.max_violation = v;
                rep.worst = idx;
            }
        }
    });
    rep.symmetric = rep.max_violation <= tol;
    if (rep.symmetric) rep.worst.reset();
    return rep;
}

/// Projects t onto the spec's symmetry class: each orbit of the generated
/// permutation group is replaced by its mean, so the result is exactly
/// symmetric.
template <std::size_t Rank>
Tensor<Rank> symmetrize(const Tensor<Rank>& t, const SymmetrySpec& spec) {
    const auto gens = spec.generators<Rank>();
    Tensor<Rank> r(t.dim());
    std::vector<bool> done(t.size(), false);
    for (std::size_t off = 0; off < t.size(); ++off) {
        if (done[off]) continue;
        std::vector<std::size_t> orbit{off};
        done[off] = true;
        for (std::size_t k = 0; k < orbit.size(); ++k) {
            const auto idx = t.unflat(orbit[k]);
            for (const auto& g : gens) {
                const std::size_t img = t.flat(apply_permutation(g, idx));
                if (!done[img]) {
                    done[img] = true;
                    orbit.push_back(img);
                }
            }
        }
        double mean = 0.0;
        for (std::size_t o : orbit) mean += t.values()[o];
        mean /= static_cast<double>(orbit.size());
        for (std::size_t o : orbit) r.values()[o] = mean;
    }
    return r;
}

// Declared symmetries of the identified stiffness tensors.
inline SymmetrySpec c_symmetry() { return {{{0, 1}, {2, 3}}, {{{0, 1}, {2, 3}}}}; }
inline SymmetrySpec m_symmetry() { return {{{0, 1}, {2, 3}}, {}}; }
inline SymmetrySpec d_symmetry() { return {{{0, 1}, {3, 4}}, {{{0, 1, 2}, {3, 4, 5}}}}; }

inline double kronecker(std::size_t i, std::size_t j) noexcept { return i == j ? 1.0 : 0.0; }

} // namespace sgm
