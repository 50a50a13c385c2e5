#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "gh/config.hpp"
#include "gh/correspondence.hpp"
#include "gh/error.hpp"
#include "gh/metric_space.hpp"

namespace gh {

enum class GhMethod { oracle, star_search };

inline const char* to_string(GhMethod m) { return m == GhMethod::oracle ? "oracle" : "star_search"; }

/// Exact Gromov-Hausdorff distance with one optimal correspondence.
struct GhResult {
    double distance = 0.0;    ///< half the minimum distortion
    double distortion = 0.0;  ///< distortion of `optimal`
    Correspondence optimal;
    std::uint64_t nodes_explored = 0;
    GhMethod method = GhMethod::star_search;
};

/// Brute force over every correspondence (|X|*|Y| <= 30). The witness is the
/// first minimizer in increasing word order.
inline GhResult gh_oracle(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    const std::size_t p = x.size(), q = y.size();
    if (p * q > kOracleMaxCells) throw ResourceError("gh_oracle is capped at |X|*|Y| <= 30");

    // Discrepancy between cells a = (i, j) and b = (i', j') of the p x q grid.
    const std::size_t cells = p * q;
    std::vector<double> gap(cells * cells);
    for (std::size_t a = 0; a < cells; ++a)
        for (std::size_t b = 0; b < cells; ++b)
            gap[a * cells + b] = std::abs(x(a / q, b / q) - y(a % q, b % q));

    CorrespondenceStream stream(p, q);
    std::uint64_t w = 0, best_word = 0, visited = 0;
    double best = std::numeric_limits<double>::infinity();
    while (stream.next_word(w)) {
        ++visited;
        double dis = 0.0;
        for (std::uint64_t m = w; m && dis < best; m &= m - 1) {
            const std::size_t a = std::countr_zero(m);
            for (std::uint64_t m2 = m & (m - 1); m2; m2 &= m2 - 1)
                dis = std::max(dis, gap[a * cells + std::countr_zero(m2)]);
        }
        if (dis < best) {
            best = dis;
            best_word = w;
        }
    }
    return GhResult{best / 2, best, Correspondence(Relation::from_word(p, q, best_word)), visited,
                    GhMethod::oracle};
}

namespace detail {

// Branch and bound over star correspondences.
//
// Rows of X are assigned in decreasing eccentricity. Each row takes either a
// single column (which other single rows may share) or an exclusive set of
// at least two columns nobody else touches; every star correspondence is
// reached exactly once this way. cost[i][j] holds the largest discrepancy
// pair (i, j) would have against the pairs already placed, so any completion
// pays at least min_j cost[i][j] for each unassigned row and
// min_i cost[i][j] for each still-uncovered column.
class StarSearch {
public:
    StarSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y)
        : x_(x), y_(y), p_(x.size()), q_(y.size()), cost_(p_ * q_, 0.0), col_state_(q_, kFree),
          rows_(p_, 0) {
        order_.resize(p_);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::vector<double> ecc(p_);
        for (std::size_t i = 0; i < p_; ++i) {
            auto r = x.row(i);
            ecc[i] = *std::max_element(r.begin(), r.end());
        }
        std::stable_sort(order_.begin(), order_.end(),
                         [&](std::size_t a, std::size_t b) { return ecc[a] > ecc[b]; });

        const double dx = diameter(x), dy = diameter(y);
        lower_ = std::abs(dx - dy);
        upper_ = std::min(std::max(dx, dy), heuristic_bound());
    }

    GhResult run() {
        search(0, 0.0);
        if (!found_) throw ConsistencyError("star search finished without a correspondence");
        Relation r(p_, q_);
        for (std::size_t i = 0; i < p_; ++i)
            for (std::uint64_t m = best_rows_[i]; m; m &= m - 1) r.insert(i, std::countr_zero(m));
        return GhResult{best_ / 2, best_, Correspondence(std::move(r)), nodes_, GhMethod::star_search};
    }

private:
    enum : char { kFree = 0, kShared = 1, kExclusive = 2 };

    struct Option {
        double value;
        bool multi;
        std::uint64_t mask;
    };

    // Identity-like map i -> i mod q plus j -> j mod p for uncovered columns;
    // only its distortion is used, as an upper bound.
    double heuristic_bound() const {
        Relation r(p_, q_);
        for (std::size_t i = 0; i < p_; ++i) r.insert(i, i % q_);
        for (std::size_t j = 0; j < q_; ++j) r.insert(j % p_, j);
        return distortion(x_, y_, r);
    }

    double& cost(std::size_t i, std::size_t j) { return cost_[i * q_ + j]; }

    double lookahead(std::size_t depth, double partial) {
        double lb = partial;
        std::uint64_t free_cols = 0;
        for (std::size_t j = 0; j < q_; ++j)
            if (col_state_[j] == kFree) free_cols |= std::uint64_t{1} << j;
        for (std::size_t k = depth; k < p_; ++k) {
            const std::size_t i = order_[k];
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < q_; ++j)
                if (col_state_[j] != kExclusive) m = std::min(m, cost(i, j));
            lb = std::max(lb, m);
        }
        for (std::uint64_t f = free_cols; f; f &= f - 1) {
            const std::size_t j = std::countr_zero(f);
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t k = depth; k < p_; ++k) m = std::min(m, cost(order_[k], j));
            lb = std::max(lb, m);
        }
        return lb;
    }

    bool pruned(double bound) const { return bound > upper_ || bound >= best_; }

    void search(std::size_t depth, double partial) {
        if (stop_) return;
        ++nodes_;
        if (depth == p_) {
            if (partial < best_) {
                best_ = partial;
                best_rows_ = rows_;
                found_ = true;
                if (best_ <= lower_) stop_ = true;
            }
            return;
        }
        if (pruned(lookahead(depth, partial))) return;

        const std::size_t i = order_[depth];
        std::vector<std::size_t> free_list;
        for (std::size_t j = 0; j < q_; ++j)
            if (col_state_[j] == kFree) free_list.push_back(j);
        const bool last = depth + 1 == p_;

        std::vector<Option> options;
        if (!last || free_list.size() <= 1) {
            for (std::size_t j = 0; j < q_; ++j) {
                if (col_state_[j] == kExclusive) continue;
                if (last && free_list.size() == 1 && j != free_list[0]) continue;
                options.push_back({cost(i, j), false, std::uint64_t{1} << j});
            }
        }
        const std::size_t nf = free_list.size();
        if (nf >= 2) {
            const std::uint64_t limit = std::uint64_t{1} << nf;
            for (std::uint64_t sub = 1; sub < limit; ++sub) {
                if (std::popcount(sub) < 2) continue;
                if (last && sub != limit - 1) continue;
                std::uint64_t mask = 0;
                double v = 0.0;
                for (std::uint64_t s = sub; s; s &= s - 1) {
                    const std::size_t j = free_list[std::countr_zero(s)];
                    v = std::max(v, cost(i, j));
                    for (std::uint64_t t = mask; t; t &= t - 1) v = std::max(v, y_(j, std::countr_zero(t)));
                    mask |= std::uint64_t{1} << j;
                }
                options.push_back({v, true, mask});
            }
        }
        std::stable_sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
            if (a.value != b.value) return a.value < b.value;
            if (a.multi != b.multi) return !a.multi;
            return a.mask < b.mask;
        });

        const std::vector<double> saved_cost = cost_;
        const std::vector<char> saved_state = col_state_;
        for (const auto& opt : options) {
            if (stop_) return;
            const double next_partial = std::max(partial, opt.value);
            if (pruned(next_partial)) continue;
            rows_[i] = opt.mask;
            for (std::uint64_t m = opt.mask; m; m &= m - 1) {
                const std::size_t j = std::countr_zero(m);
                col_state_[j] = opt.multi ? kExclusive : kShared;
                for (std::size_t a = 0; a < p_; ++a) {
                    const double dxa = x_(a, i);
                    for (std::size_t b = 0; b < q_; ++b)
                        cost(a, b) = std::max(cost(a, b), std::abs(dxa - y_(b, j)));
                }
            }
            search(depth + 1, next_partial);
            cost_ = saved_cost;
            col_state_ = saved_state;
            rows_[i] = 0;
        }
    }

    const FiniteMetricSpace& x_;
    const FiniteMetricSpace& y_;
    std::size_t p_, q_;
    std::vector<std::size_t> order_;
    std::vector<double> cost_;
    std::vector<char> col_state_;
    std::vector<std::uint64_t> rows_, best_rows_;
    double lower_ = 0.0, upper_ = 0.0;
    double best_ = std::numeric_limits<double>::infinity();
    std::uint64_t nodes_ = 0;
    bool found_ = false, stop_ = false;
};

}  // namespace detail

/// Production solver: branch and bound over star correspondences.
///
/// Agrees with `gh_oracle` exactly wherever both run. Initial bounds come
/// from |diam X - diam Y| <= dis R <= max(diam X, diam Y); the search stops as
/// soon as the lower bound is met.
inline GhResult gh_exact(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const SolverLimits& limits = {}) {
    if (x.size() > limits.gh_max_points || y.size() > limits.gh_max_points)
        throw ResourceError("gh_exact budget is " + std::to_string(limits.gh_max_points) +
                            " points per side; got " + std::to_string(x.size()) + " and " +
                            std::to_string(y.size()));
    if (y.size() > kMaxColumns) throw ResourceError("relation supports at most 64 columns");
    return detail::StarSearch(x, y).run();
}

/// Collapses points at distance <= threshold onto the earliest such point.
/// Returns the quotient space and, for each original point, its class index.
inline std::pair<FiniteMetricSpace, std::vector<std::size_t>> quotient(const FiniteMetricSpace& s,
                                                                       double threshold = 1e-12) {
    const std::size_t n = s.size();
    std::vector<std::size_t> cls(n, n), reps;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < reps.size(); ++r)
            if (s(i, reps[r]) <= threshold) {
                cls[i] = r;
                break;
            }
        if (cls[i] == n) {
            cls[i] = reps.size();
            reps.push_back(i);
        }
    }
    std::vector<double> d(reps.size() * reps.size());
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < reps.size(); ++a) {
        for (std::size_t b = 0; b < reps.size(); ++b) d[a * reps.size() + b] = s(reps[a], reps[b]);
        if (!s.labels().empty()) labels.push_back(s.labels()[reps[a]]);
    }
    return {FiniteMetricSpace::from_flat(reps.size(), std::move(d), std::move(labels)), std::move(cls)};
}

/// The point R_t of the shortest curve from X to Y through the optimal
/// correspondence R: points are the pairs of R with
/// |(x,y)(x',y')|_t = (1-t)|xx'| + t|yy'|, quotiented at zero distance.
inline FiniteMetricSpace geodesic_point(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                        const Correspondence& r, double t, const SolverLimits& limits = {},
                                        const Tolerances& tol = {}) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic parameter t must lie in [0, 1]");
    if (r.p() != x.size() || r.q() != y.size()) throw StructuralError("correspondence does not match the spaces");
    const double dis = distortion(x, y, r);
    const double gh2 = 2 * gh_exact(x, y, limits).distance;
    if (std::abs(dis - gh2) > tol.eq)
        throw DomainError("correspondence is not optimal: dis R = " + std::to_string(dis) +
                          " but 2 d_GH = " + std::to_string(gh2));

    const auto ps = r.pairs();
    const std::size_t k = ps.size();
    std::vector<double> d(k * k);
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b)
            d[a * k + b] = (1 - t) * x(ps[a].first, ps[b].first) + t * y(ps[a].second, ps[b].second);
        labels.push_back("(" + std::to_string(ps[a].first) + "," + std::to_string(ps[a].second) + ")");
    }
    auto [q, cls] = quotient(FiniteMetricSpace::from_flat(k, std::move(d), std::move(labels)));
    require_valid(q, tol);
    return q;
}

}  // namespace gh
