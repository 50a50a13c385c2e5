#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gh/gh.hpp"

namespace ghtest {

// Off-diagonal entries uniform in [lo, 2 lo]; any such matrix is a metric.
inline gh::FiniteMetricSpace random_band_space(std::size_t n, gh::Rng& rng, double lo = 1.0) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = rng.uniform(lo, 2 * lo);
    return gh::FiniteMetricSpace::from_flat(n, std::move(d));
}

// Random points in the plane with the Euclidean metric.
inline gh::FiniteMetricSpace random_planar_space(std::size_t n, gh::Rng& rng, double side = 1.0) {
    std::vector<double> x(n), y(n), d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(0, side), y[i] = rng.uniform(0, side);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::hypot(x[i] - x[j], y[i] - y[j]);
    return gh::FiniteMetricSpace::from_flat(n, std::move(d));
}

// Alternates the two generators so that suites see both flavours.
inline gh::FiniteMetricSpace random_space(std::size_t n, gh::Rng& rng) {
    return rng.index(2) == 0 ? random_band_space(n, rng) : random_planar_space(n, rng);
}

inline gh::FiniteMetricSpace line(std::initializer_list<double> pts) {
    std::vector<double> p(pts);
    std::vector<double> d(p.size() * p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) d[i * p.size() + j] = std::abs(p[i] - p[j]);
    return gh::FiniteMetricSpace::from_flat(p.size(), std::move(d));
}

inline gh::FiniteMetricSpace path3() { return gh::FiniteMetricSpace::from_rows({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}); }

}  // namespace ghtest
