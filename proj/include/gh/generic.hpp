#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gh/config.hpp"
#include "gh/error.hpp"
#include "gh/metric_space.hpp"

namespace gh {

/// Seedable generator that can derive independent child streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Child stream `stream` of this seed; deterministic, independent of draws made so far.
    Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x9e3779b97f4a7c15ULL))); }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() noexcept { return engine_; }

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

struct GeneratedSpace {
    FiniteMetricSpace space;
    GenericityReport report;
    std::uint64_t seed = 0;
    unsigned attempts = 0;
};

inline constexpr unsigned kMaxGenerationAttempts = 1000;
inline constexpr double kDistinctResolution = 1e-12;

/// Delta_n with every distance perturbed by a distinct uniform draw from
/// (-amplitude, amplitude). Redraws until s >= 1 - amplitude and t, e > 0.
inline GeneratedSpace perturbed_generic(std::size_t n, std::uint64_t seed, double amplitude = 1.0 / 3,
                                        std::size_t e_budget = SolverLimits{}.e_search_max_points,
                                        const Tolerances& tol = {}) {
    if (n < 3) throw DomainError("generic spaces need at least 3 points");
    if (!(amplitude > 0.0 && amplitude <= 1.0 / 3)) throw DomainError("amplitude must lie in (0, 1/3]");
    if (n > e_budget)
        throw DomainError("e(X) can only be verified for spaces of at most " + std::to_string(e_budget) +
                          " points; lower n");

    Rng rng(seed);
    const std::size_t pairs = n * (n - 1) / 2;
    for (unsigned attempt = 1; attempt <= kMaxGenerationAttempts; ++attempt) {
        std::vector<double> delta(pairs);
        for (auto& v : delta) v = rng.uniform(-amplitude, amplitude);
        std::vector<double> sorted = delta;
        std::sort(sorted.begin(), sorted.end());
        bool distinct = true;
        for (std::size_t k = 1; k < sorted.size(); ++k)
            if (sorted[k] - sorted[k - 1] <= kDistinctResolution) distinct = false;
        if (!distinct) continue;

        std::vector<double> d(n * n, 0.0);
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++k) d[i * n + j] = d[j * n + i] = 1.0 + delta[k];
        auto space = FiniteMetricSpace::from_flat(n, std::move(d));
        if (!validate(space, tol).valid()) continue;
        auto report = characteristics(space, e_budget, tol);
        if (report.s >= 1.0 - amplitude && report.is_generic)
            return GeneratedSpace{std::move(space), std::move(report), seed, attempt};
    }
    throw GenerationError("perturbed_generic: " + std::to_string(kMaxGenerationAttempts) +
                          " consecutive rejections");
}

/// Finite-order variant of the graph H: each base edge x < y becomes the path
/// x - u - v - y with a pendant w at v.
struct ShramovGraph {
    std::size_t base_size = 0;
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::vector<std::string> labels;

    std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> deg(vertex_count, 0);
        for (auto [a, b] : edges) ++deg[a], ++deg[b];
        return deg;
    }

    bool adjacent(std::size_t a, std::size_t b) const {
        for (auto [x, y] : edges)
            if ((x == a && y == b) || (x == b && y == a)) return true;
        return false;
    }
};

inline ShramovGraph shramov_graph(std::size_t m) {
    if (m < 2) throw DomainError("the base set needs at least 2 points");
    ShramovGraph g;
    g.base_size = m;
    for (std::size_t x = 0; x < m; ++x) g.labels.push_back("x" + std::to_string(x));
    std::size_t next = m;
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = x + 1; y < m; ++y) {
            const std::size_t u = next++, v = next++, w = next++;
            const std::string tag = "(" + std::to_string(x) + "," + std::to_string(y) + ")";
            g.labels.push_back("u" + tag);
            g.labels.push_back("v" + tag);
            g.labels.push_back("w" + tag);
            g.edges.insert(g.edges.end(), {{x, u}, {u, v}, {v, y}, {v, w}});
        }
    g.vertex_count = next;
    return g;
}

struct ShramovSpace {
    ShramovGraph graph;
    FiniteMetricSpace space;
    GenericityReport report;  ///< e left empty beyond the e-search budget
};

/// Vertices of the graph, distance 1 + eps between adjacent and 1 between
/// non-adjacent vertices. e(V) is searched, never assumed; small instances
/// can have graph automorphisms (m = 2 swaps the pendant w with y).
inline ShramovSpace shramov_space(std::size_t m, double eps, std::size_t e_budget = SolverLimits{}.e_search_max_points,
                                  const Tolerances& tol = {}) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
    auto g = shramov_graph(m);
    const std::size_t n = g.vertex_count;
    std::vector<double> d(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    for (auto [a, b] : g.edges) d[a * n + b] = d[b * n + a] = 1.0 + eps;
    auto space = FiniteMetricSpace::from_flat(n, std::move(d), g.labels);
    auto report = characteristics(space, e_budget, tol);
    return ShramovSpace{std::move(g), std::move(space), std::move(report)};
}

struct ScaledGeneric {
    GeneratedSpace generated;  ///< the scaled space with its recomputed report
    double lambda = 1.0;       ///< factor applied to the raw perturbed space
    double amplitude = 0.0;
};

inline constexpr double kAnchorAmplitude = 0.1;

/// A generic n-point space M with s(M) > 8d and e(M) > 8d, obtained by
/// scaling a perturbed one-distance space by 9d / min(s, e).
inline ScaledGeneric scaled_generic_for(double target_diam, std::size_t n, std::uint64_t seed,
                                        std::size_t e_budget = SolverLimits{}.e_search_max_points,
                                        const Tolerances& tol = {}) {
    if (!(target_diam > 0.0) || !std::isfinite(target_diam)) throw DomainError("target diameter must be positive");
    auto raw = perturbed_generic(n, seed, kAnchorAmplitude, e_budget, tol);
    const double lambda = 9.0 * target_diam / std::min(raw.report.s, *raw.report.e);
    auto space = scale(raw.space, lambda);
    auto report = characteristics(space, e_budget, tol);
    if (!(report.s > 8 * target_diam) || !report.e || !(*report.e > 8 * target_diam) || !report.is_generic)
        throw ConsistencyError("scaled anchor misses s, e > 8d");
    return ScaledGeneric{GeneratedSpace{std::move(space), std::move(report), seed, raw.attempts}, lambda,
                         kAnchorAmplitude};
}

}  // namespace gh
