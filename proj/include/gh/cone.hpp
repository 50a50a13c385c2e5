#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "gh/config.hpp"
#include "gh/error.hpp"
#include "gh/metric_space.hpp"

namespace gh {

/// Number of unordered pairs of n points.
constexpr std::size_t pair_count(std::size_t n) noexcept { return n * (n - 1) / 2; }

/// Slot of the unordered pair {i, j} in canonical lexicographic order
/// (0,1), (0,2), ..., (0,n-1), (1,2), ...
constexpr std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// A point of R^{n choose 2}, coordinates indexed by unordered pairs.
struct DistanceVector {
    std::size_t n = 0;
    std::vector<double> v;

    DistanceVector() = default;
    DistanceVector(std::size_t points, std::vector<double> coords) : n(points), v(std::move(coords)) {
        if (points < 2) throw DomainError("distance vectors need at least two points");
        if (v.size() != pair_count(points))
            throw StructuralError("distance vector for " + std::to_string(points) + " points needs " +
                                  std::to_string(pair_count(points)) + " coordinates");
        for (double c : v)
            if (!std::isfinite(c)) throw StructuralError("distance vector has a non-finite coordinate");
    }

    double operator()(std::size_t i, std::size_t j) const noexcept { return v[pair_index(n, i, j)]; }

    bool operator==(const DistanceVector&) const = default;
};

/// A bijection from slot indices {0..n-1} to the points of a space.
class Enumeration {
public:
    explicit Enumeration(std::vector<std::size_t> order) : order_(std::move(order)) {
        std::vector<char> seen(order_.size(), 0);
        for (auto p : order_) {
            if (p >= order_.size() || seen[p]) throw DomainError("enumeration is not a permutation");
            seen[p] = 1;
        }
    }

    static Enumeration identity(std::size_t n) {
        std::vector<std::size_t> o(n);
        std::iota(o.begin(), o.end(), std::size_t{0});
        return Enumeration(std::move(o));
    }

    std::size_t size() const noexcept { return order_.size(); }
    std::size_t operator[](std::size_t slot) const noexcept { return order_[slot]; }

private:
    std::vector<std::size_t> order_;
};

/// Half the largest coordinate gap; the metric of R^N used for the cone.
inline double half_sup_dist(const DistanceVector& a, const DistanceVector& b) {
    if (a.n != b.n) throw DomainError("distance vectors have different point counts");
    double m = 0.0;
    for (std::size_t k = 0; k < a.v.size(); ++k) m = std::max(m, std::abs(a.v[k] - b.v[k]));
    return m / 2;
}

/// Plain sup-metric on R^n, the one the Kuratowski map is isometric for.
inline double sup_dist(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw DomainError("vectors have different lengths");
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

namespace detail {
template <class Accept>
bool cone_check(const DistanceVector& v, Accept accept) {
    const std::size_t n = v.n;
    for (double c : v.v)
        if (!accept(c)) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = i + 1; k < n; ++k) {
                if (k == j) continue;
                if (!accept(v(i, j) + v(j, k) - v(i, k))) return false;
            }
        }
    return true;
}
}  // namespace detail

/// Positive coordinates and every triangle inequality (up to tol.metric).
inline bool in_cone(const DistanceVector& v, const Tolerances& tol = {}) {
    for (double c : v.v)
        if (!(c > 0.0)) return false;
    return detail::cone_check(v, [&](double c) { return c >= -tol.metric; });
}

/// Every coordinate and every triangle excess exceeds tol.metric.
inline bool in_cone_interior(const DistanceVector& v, const Tolerances& tol = {}) {
    return detail::cone_check(v, [&](double c) { return c > tol.metric; });
}

inline DistanceVector distance_vector(const FiniteMetricSpace& x, const Enumeration& eta) {
    if (eta.size() != x.size()) throw DomainError("enumeration size does not match the space");
    const std::size_t n = x.size();
    std::vector<double> v;
    v.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) v.push_back(x(eta[i], eta[j]));
    return DistanceVector(n, std::move(v));
}

/// The canonical projection: the n-point space with |ij| = v_ij.
inline FiniteMetricSpace project(const DistanceVector& v, const Tolerances& tol = {}) {
    if (!in_cone(v, tol)) throw DomainError("vector is not in the metric cone");
    const std::size_t n = v.n;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = v(i, j);
    return FiniteMetricSpace::from_flat(n, std::move(d));
}

/// Kuratowski map: point i goes to its row of distances, f(x_i)_j = |x_i x_j|.
inline std::vector<std::vector<double>> kuratowski(const FiniteMetricSpace& x) { return x.rows(); }

}  // namespace gh
