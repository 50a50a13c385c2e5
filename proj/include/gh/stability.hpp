#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gh/cone.hpp"
#include "gh/config.hpp"
#include "gh/correspondence.hpp"
#include "gh/error.hpp"
#include "gh/generic.hpp"
#include "gh/ghdist.hpp"
#include "gh/metric_space.hpp"

namespace gh {

/// Strict-inequality margin applied when epsilon is derived from e(M).
inline constexpr double kEpsilonMargin = 1e-6;

// ---------------------------------------------------------------------------
// Blow-ups

struct BlowUp {
    FiniteMetricSpace space;
    std::vector<std::size_t> cluster_of;  ///< anchor point each new point replaces
};

/// Replaces anchor point i by cluster_sizes[i] points at mutual distance
/// `delta`; cross-cluster distances are |ij| plus a uniform jitter of at most
/// 0.45 * delta. Throws DomainError if the result is not a metric.
inline BlowUp blow_up(const FiniteMetricSpace& anchor, const std::vector<std::size_t>& cluster_sizes, double delta,
                      std::uint64_t seed, const Tolerances& tol = {}) {
    if (cluster_sizes.size() != anchor.size()) throw DomainError("one cluster size per anchor point is required");
    if (!(delta > 0.0)) throw DomainError("blow-up cluster diameter must be positive");
    BlowUp out;
    for (std::size_t i = 0; i < cluster_sizes.size(); ++i) {
        if (cluster_sizes[i] == 0) throw DomainError("clusters must be non-empty");
        out.cluster_of.insert(out.cluster_of.end(), cluster_sizes[i], i);
    }
    const std::size_t n = out.cluster_of.size();
    Rng rng(seed);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t i = out.cluster_of[a], j = out.cluster_of[b];
            d[a * n + b] = d[b * n + a] = i == j ? delta : anchor(i, j) + rng.uniform(-0.45 * delta, 0.45 * delta);
        }
    out.space = FiniteMetricSpace::from_flat(n, std::move(d));
    require_valid(out.space, tol);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical partition

struct CanonicalPartition {
    double epsilon = 0.0;
    std::vector<std::vector<std::size_t>> blocks;  ///< blocks[i] = R(i), a subset of X
    Correspondence witness;                        ///< between M and X, dis < 2 epsilon
    double witness_distortion = 0.0;
    bool uniqueness_checked = false;      ///< epsilon <= s(M)/4, so every R below 2 eps was enumerated
    std::size_t correspondences_below = 0;
    std::optional<bool> unique_correspondence;  ///< set when additionally epsilon < e(M)/4
};

namespace detail {
inline std::vector<std::vector<std::size_t>> blocks_of(const Correspondence& r) {
    std::vector<std::vector<std::size_t>> out(r.p());
    for (std::size_t i = 0; i < r.p(); ++i) {
        const std::size_t one[] = {i};
        out[i] = image(r.relation(), one);
    }
    return out;
}
}  // namespace detail

/// Partition of X induced by a correspondence from a totally discrete M with
/// distortion below 2 eps, with every structural claim re-checked.
inline CanonicalPartition canonical_partition(const FiniteMetricSpace& m, const FiniteMetricSpace& x, double eps,
                                              const SolverLimits& limits = {}, const Tolerances& tol = {}) {
    const auto rep = characteristics(m, limits.e_search_max_points, tol);
    if (!(rep.s > 0.0)) throw DomainError("anchor is not totally discrete");
    if (!(eps > 0.0 && eps <= rep.s / 2)) throw DomainError("epsilon must lie in (0, s(M)/2]");
    const auto g = gh_exact(m, x, limits);
    if (!(g.distance < eps)) throw DomainError("d_GH(M, X) is not below epsilon");
    if (!(g.distortion < 2 * eps)) throw ConsistencyError("optimal correspondence is not below 2 epsilon");

    CanonicalPartition cp{eps, detail::blocks_of(g.optimal), g.optimal, g.distortion, false, 0, std::nullopt};

    std::vector<int> owner(x.size(), -1);
    for (std::size_t i = 0; i < cp.blocks.size(); ++i)
        for (auto a : cp.blocks[i]) {
            if (owner[a] != -1) throw TheoremViolation("canonical partition blocks overlap");
            owner[a] = static_cast<int>(i);
        }
    for (auto o : owner)
        if (o == -1) throw TheoremViolation("canonical partition blocks do not cover X");
    for (std::size_t i = 0; i < cp.blocks.size(); ++i) {
        for (auto a : cp.blocks[i])
            for (auto b : cp.blocks[i])
                if (!(x(a, b) < 2 * eps)) throw TheoremViolation("a block has diameter >= 2 epsilon");
        for (std::size_t j = 0; j < cp.blocks.size(); ++j) {
            if (j == i) continue;
            for (auto a : cp.blocks[i])
                for (auto b : cp.blocks[j])
                    if (!(std::abs(x(a, b) - m(i, j)) < 2 * eps))
                        throw TheoremViolation("cross-block distance differs from |ij| by >= 2 epsilon");
        }
    }

    if (eps <= rep.s / 4) {
        cp.uniqueness_checked = true;
        bool same_partition = true;
        bool only_witness = true;
        cp.correspondences_below =
            for_each_correspondence_below(m, x, 2 * eps, [&](const Correspondence& r, double) {
                auto b = detail::blocks_of(r);
                auto sorted = b;
                auto mine = cp.blocks;
                std::sort(sorted.begin(), sorted.end());
                std::sort(mine.begin(), mine.end());
                if (sorted != mine) same_partition = false;
                if (!(r == cp.witness)) only_witness = false;
            });
        if (!same_partition) throw TheoremViolation("canonical partition is not unique");
        if (rep.e && eps < *rep.e / 4) {
            cp.unique_correspondence = only_witness && cp.correspondences_below == 1;
            if (!*cp.unique_correspondence)
                throw TheoremViolation("more than one correspondence has distortion below 2 epsilon");
        }
    }
    return cp;
}

// ---------------------------------------------------------------------------
// Block decomposition

struct BlockDecomposition {
    std::vector<std::size_t> sigma;                 ///< block i of X is matched with block sigma[i] of Y
    std::vector<std::vector<IndexPair>> blocks;     ///< R_i, pairs in original (x, y) indices
    bool sigma_is_identity = false;
    bool identity_required = false;                 ///< e(M) > 0 and eps < e(M)/8
};

/// Splits a correspondence R between two spaces near M into per-block
/// correspondences R_i between X_i and Y_sigma(i).
inline BlockDecomposition block_decomposition(const FiniteMetricSpace& m, const FiniteMetricSpace& x,
                                              const FiniteMetricSpace& y, double eps, const Correspondence& r,
                                              const SolverLimits& limits = {}, const Tolerances& tol = {}) {
    const auto rep = characteristics(m, limits.e_search_max_points, tol);
    if (!(rep.s > 0.0)) throw DomainError("anchor is not totally discrete");
    if (!(eps > 0.0 && eps <= rep.s / 8)) throw DomainError("epsilon must lie in (0, s(M)/8]");
    if (r.p() != x.size() || r.q() != y.size()) throw StructuralError("correspondence does not match X and Y");
    if (!(distortion(x, y, r) < 4 * eps)) throw DomainError("dis R must be below 4 epsilon");

    const auto px = canonical_partition(m, x, eps, limits, tol);
    const auto py = canonical_partition(m, y, eps, limits, tol);
    std::vector<std::size_t> y_block(y.size());
    for (std::size_t i = 0; i < py.blocks.size(); ++i)
        for (auto b : py.blocks[i]) y_block[b] = i;

    const std::size_t k = m.size();
    BlockDecomposition out;
    out.sigma.assign(k, k);
    out.blocks.assign(k, {});
    std::vector<std::size_t> x_block(x.size());
    for (std::size_t i = 0; i < k; ++i)
        for (auto a : px.blocks[i]) x_block[a] = i;

    for (auto [a, b] : r.pairs()) {
        const std::size_t i = x_block[a], j = y_block[b];
        if (out.sigma[i] == k) out.sigma[i] = j;
        if (out.sigma[i] != j) {
            std::ostringstream os;
            os << "block X_" << i << " is related to more than one block of Y";
            throw TheoremViolation(os.str());
        }
        out.blocks[i].emplace_back(a, b);
    }
    std::vector<char> hit(k, 0);
    for (auto s : out.sigma) {
        if (s == k || hit[s]) throw TheoremViolation("block matching is not a bijection");
        hit[s] = 1;
    }
    for (std::size_t i = 0; i < k; ++i) {
        // R_i must be total on X_i and onto Y_sigma(i).
        for (auto a : px.blocks[i])
            if (std::none_of(out.blocks[i].begin(), out.blocks[i].end(), [&](auto& pr) { return pr.first == a; }))
                throw TheoremViolation("R_i is not left-total");
        for (auto b : py.blocks[out.sigma[i]])
            if (std::none_of(out.blocks[i].begin(), out.blocks[i].end(), [&](auto& pr) { return pr.second == b; }))
                throw TheoremViolation("R_i is not right-total");
    }
    out.sigma_is_identity = true;
    for (std::size_t i = 0; i < k; ++i) out.sigma_is_identity &= out.sigma[i] == i;
    out.identity_required = rep.e && *rep.e > 0.0 && eps < *rep.e / 8;
    if (out.identity_required && !out.sigma_is_identity)
        throw TheoremViolation("block matching is not the identity although eps < e(M)/8");
    return out;
}

// ---------------------------------------------------------------------------
// Sampling harnesses

struct Counterexample {
    std::size_t sample = 0;
    DistanceVector a, b;  ///< b is empty for single-vector checks
    double lhs = 0.0, rhs = 0.0, deviation = 0.0;
    std::string note;
};

struct VerificationReport {
    std::string kind;
    bool pass = true;
    double max_deviation = 0.0;
    std::size_t samples = 0;
    std::size_t probes = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    GenericityReport anchor;
    std::vector<Counterexample> counterexamples;
};

namespace detail {
inline GenericityReport require_generic(const FiniteMetricSpace& m, const SolverLimits& limits,
                                        const Tolerances& tol) {
    auto rep = characteristics(m, limits.e_search_max_points, tol);
    if (!rep.e) throw DomainError("anchor exceeds the e-search budget; genericity cannot be verified");
    if (!rep.is_generic) throw DomainError("anchor is not generic (s, t, e must all be positive)");
    return rep;
}

// Box sample around w with every coordinate within 2 * inner of w, so that
// half_sup_dist(v, w) < inner < eps; redrawn until it lands in the cone.
inline DistanceVector sample_near(const DistanceVector& w, double eps, Rng& rng, const Tolerances& tol) {
    const double inner = eps * (1 - kEpsilonMargin);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        DistanceVector v = w;
        for (auto& c : v.v) c += rng.uniform(-2 * inner, 2 * inner);
        if (half_sup_dist(v, w) < eps && in_cone(v, tol)) return v;
    }
    throw GenerationError("could not sample the epsilon-ball inside the cone");
}
}  // namespace detail

/// Default epsilon for the local isometry: min(s/8, e/8) shrunk by the margin.
inline double local_isometry_epsilon(const GenericityReport& rep) {
    return std::min(rep.s / 8, *rep.e / 8 * (1 - kEpsilonMargin));
}

/// Samples pairs a, b in the epsilon-ball around w = rho_M (inside the cone)
/// and checks d_GH(pi(a), pi(b)) = half_sup_dist(a, b) for each.
inline VerificationReport verify_local_isometry(const FiniteMetricSpace& m, std::size_t samples, std::uint64_t seed,
                                                std::optional<double> eps_override = {},
                                                const SolverLimits& limits = {}, const Tolerances& tol = {}) {
    VerificationReport out;
    out.kind = "local-isometry";
    out.seed = seed;
    out.anchor = detail::require_generic(m, limits, tol);
    const auto& rep = out.anchor;
    double eps = local_isometry_epsilon(rep);
    if (eps_override) {
        if (!(*eps_override > 0.0 && *eps_override <= rep.s / 8 && *eps_override < *rep.e / 8))
            throw DomainError("epsilon must satisfy 0 < eps <= s(M)/8 and eps < e(M)/8");
        eps = *eps_override;
    }
    out.epsilon = eps;
    const auto w = distance_vector(m, Enumeration::identity(m.size()));
    Rng rng(seed);
    for (std::size_t k = 0; k < samples; ++k) {
        const auto a = detail::sample_near(w, eps, rng, tol);
        const auto b = detail::sample_near(w, eps, rng, tol);
        const double lhs = gh_exact(project(a, tol), project(b, tol), limits).distance;
        const double rhs = half_sup_dist(a, b);
        const double dev = std::abs(lhs - rhs);
        out.max_deviation = std::max(out.max_deviation, dev);
        if (dev > tol.eq) {
            out.pass = false;
            out.counterexamples.push_back({k, a, b, lhs, rhs, dev, "d_GH(pi(a), pi(b)) != |ab|"});
        }
        ++out.samples;
    }
    return out;
}

/// Default epsilon for interiority: min(s/8, t/6) kept strictly below e/8.
inline double interiority_epsilon(const GenericityReport& rep) {
    return std::min({rep.s / 8, rep.t / 6, *rep.e / 8 * (1 - kEpsilonMargin)});
}

/// Samples the epsilon-ball around w and probes each coordinate shifted by
/// +-2 eps (1 - 1e-9); every vector must be in the cone interior and meet
/// v_ij > s - 2 eps and every triangle excess > t - 6 eps.
inline VerificationReport verify_interiority(const FiniteMetricSpace& m, std::size_t samples, std::uint64_t seed,
                                             std::optional<double> eps_override = {},
                                             const SolverLimits& limits = {}, const Tolerances& tol = {}) {
    VerificationReport out;
    out.kind = "interior";
    out.seed = seed;
    out.anchor = detail::require_generic(m, limits, tol);
    const auto& rep = out.anchor;
    double eps = interiority_epsilon(rep);
    if (eps_override) {
        if (!(*eps_override > 0.0 && *eps_override <= std::min(rep.s / 8, rep.t / 6) && *eps_override < *rep.e / 8))
            throw DomainError("epsilon must satisfy 0 < eps <= min(s(M)/8, t(M)/6) and eps < e(M)/8");
        eps = *eps_override;
    }
    out.epsilon = eps;
    const auto w = distance_vector(m, Enumeration::identity(m.size()));
    const std::size_t n = m.size();

    auto check = [&](const DistanceVector& v, std::size_t index) {
        double shortfall = 0.0;
        std::string note;
        for (double c : v.v)
            if (!(c > rep.s - 2 * eps)) {
                shortfall = std::max(shortfall, rep.s - 2 * eps - c);
                note = "coordinate not above s - 2 eps";
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                for (std::size_t k = i + 1; k < n; ++k) {
                    if (k == j) continue;
                    const double excess = v(i, j) + v(j, k) - v(i, k);
                    if (!(excess > rep.t - 6 * eps)) {
                        shortfall = std::max(shortfall, rep.t - 6 * eps - excess);
                        note = "triangle excess not above t - 6 eps";
                    }
                }
            }
        if (!in_cone_interior(v, tol)) note = note.empty() ? "not in the cone interior" : note;
        out.max_deviation = std::max(out.max_deviation, shortfall);
        if (!note.empty()) {
            out.pass = false;
            out.counterexamples.push_back({index, v, {}, 0.0, 0.0, shortfall, note});
        }
    };

    Rng rng(seed);
    for (std::size_t k = 0; k < samples; ++k) {
        DistanceVector v = w;
        const double inner = eps * (1 - kEpsilonMargin);
        for (auto& c : v.v) c += rng.uniform(-2 * inner, 2 * inner);
        check(v, k);
        ++out.samples;
    }
    for (std::size_t c = 0; c < w.v.size(); ++c)
        for (double sign : {-1.0, 1.0}) {
            DistanceVector v = w;
            v.v[c] += sign * 2 * eps * (1 - 1e-9);
            check(v, samples + out.probes);
            ++out.probes;
        }
    return out;
}

}  // namespace gh
