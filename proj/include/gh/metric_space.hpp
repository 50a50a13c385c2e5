#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gh/config.hpp"
#include "gh/error.hpp"

namespace gh {

/// A finite set of points with an n x n distance matrix.
///
/// Construction only checks shape (square, finite entries, label count).
/// The metric axioms are checked separately by `validate`, so that a bad
/// matrix can still be loaded and reported on.
class FiniteMetricSpace {
public:
    /// The one-point space.
    FiniteMetricSpace() : n_(1), d_(1, 0.0) {}

    static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> labels = {}) {
        const std::size_t n = rows.size();
        if (n == 0) throw StructuralError("distance matrix is empty");
        std::vector<double> flat;
        flat.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rows[i].size() != n) {
                throw StructuralError("distance matrix is not square: row " + std::to_string(i) +
                                      " has " + std::to_string(rows[i].size()) +
                                      " entries, expected " + std::to_string(n));
            }
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return from_flat(n, std::move(flat), std::move(labels));
    }

    static FiniteMetricSpace from_flat(std::size_t n, std::vector<double> d,
                                       std::vector<std::string> labels = {}) {
        if (n == 0) throw StructuralError("distance matrix is empty");
        if (d.size() != n * n) {
            throw StructuralError("flat distance matrix has " + std::to_string(d.size()) +
                                  " entries, expected " + std::to_string(n * n));
        }
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (!std::isfinite(d[k])) {
                throw StructuralError("non-finite distance at (" + std::to_string(k / n) + ", " +
                                      std::to_string(k % n) + ")");
            }
        }
        if (!labels.empty() && labels.size() != n) {
            throw StructuralError("expected " + std::to_string(n) + " labels, got " +
                                  std::to_string(labels.size()));
        }
        FiniteMetricSpace s;
        s.n_ = n;
        s.d_ = std::move(d);
        s.labels_ = std::move(labels);
        return s;
    }

    /// Delta_n: n points, all pairwise distances equal to `value`.
    static FiniteMetricSpace one_distance(std::size_t n, double value = 1.0) {
        if (n == 0) throw DomainError("one-distance space needs at least one point");
        std::vector<double> d(n * n, value);
        for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
        return from_flat(n, std::move(d));
    }

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }

    double at(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_) throw StructuralError("point index out of range");
        return d_[i * n_ + j];
    }

    std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }
    std::span<const double> flat() const noexcept { return d_; }

    std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i].assign(d_.begin() + i * n_, d_.begin() + (i + 1) * n_);
        return out;
    }

    const std::vector<std::string>& labels() const noexcept { return labels_; }

    bool operator==(const FiniteMetricSpace&) const = default;

private:
    std::size_t n_;
    std::vector<double> d_;
    std::vector<std::string> labels_;
};

// ---------------------------------------------------------------------------
// Validation

enum class Axiom { zero_diagonal, symmetry, positivity, triangle };

inline const char* to_string(Axiom a) {
    switch (a) {
        case Axiom::zero_diagonal: return "zero_diagonal";
        case Axiom::symmetry: return "symmetry";
        case Axiom::positivity: return "positivity";
        case Axiom::triangle: return "triangle";
    }
    return "unknown";
}

/// One failed axiom. For `triangle`, d(i,k) > d(i,j) + d(j,k) + tolerance and
/// `amount` is the excess. Unused indices repeat the last meaningful one.
struct Violation {
    Axiom axiom;
    std::size_t i, j, k;
    double amount;
};

struct ValidationVerdict {
    std::vector<Violation> violations;

    bool valid() const noexcept { return violations.empty(); }

    std::string describe() const {
        if (valid()) return "valid";
        std::ostringstream os;
        for (std::size_t v = 0; v < violations.size(); ++v) {
            const auto& x = violations[v];
            if (v) os << "; ";
            os << to_string(x.axiom) << " violation at (" << x.i << "," << x.j;
            if (x.axiom == Axiom::triangle) os << "," << x.k;
            os << ")";
        }
        return os.str();
    }
};

/// Checks d(i,i) = 0, exact symmetry, d(i,j) > 0 off the diagonal, and every
/// triangle inequality up to `tol.metric`. Triangle violations are reported
/// once per unordered endpoint pair {i, k} with i < k, for every via-point j.
inline ValidationVerdict validate(const FiniteMetricSpace& x, const Tolerances& tol = {}) {
    ValidationVerdict out;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (x(i, i) != 0.0) out.violations.push_back({Axiom::zero_diagonal, i, i, i, std::abs(x(i, i))});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x(i, j) != x(j, i)) {
                out.violations.push_back({Axiom::symmetry, i, j, j, std::abs(x(i, j) - x(j, i))});
            }
            if (x(i, j) <= 0.0 || x(j, i) <= 0.0) {
                out.violations.push_back({Axiom::positivity, i, j, j, std::min(x(i, j), x(j, i))});
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                const double excess = x(i, k) - (x(i, j) + x(j, k));
                if (excess > tol.metric) out.violations.push_back({Axiom::triangle, i, j, k, excess});
            }
        }
    }
    return out;
}

/// Throws DomainError listing every violation when `x` is not a metric.
inline void require_valid(const FiniteMetricSpace& x, const Tolerances& tol = {}) {
    const auto verdict = validate(x, tol);
    if (!verdict.valid()) throw DomainError("not a metric: " + verdict.describe());
}

// ---------------------------------------------------------------------------
// Elementary operations

inline double diameter(const FiniteMetricSpace& x) {
    const auto f = x.flat();
    return *std::max_element(f.begin(), f.end());
}

/// Hausdorff distance between two non-empty subsets of the same space.
inline double hausdorff(const FiniteMetricSpace& x, std::span<const std::size_t> a,
                        std::span<const std::size_t> b) {
    if (a.empty() || b.empty()) throw DomainError("hausdorff distance needs non-empty subsets");
    for (auto p : a)
        if (p >= x.size()) throw StructuralError("subset index out of range");
    for (auto p : b)
        if (p >= x.size()) throw StructuralError("subset index out of range");

    auto directed = [&x](std::span<const std::size_t> from, std::span<const std::size_t> to) {
        double sup = 0.0;
        for (auto p : from) {
            double inf = std::numeric_limits<double>::infinity();
            for (auto q : to) inf = std::min(inf, x(p, q));
            sup = std::max(sup, inf);
        }
        return sup;
    };
    return std::max(directed(a, b), directed(b, a));
}

/// Multiplies every distance by `lambda`; lambda = 0 yields the one-point space.
inline FiniteMetricSpace scale(const FiniteMetricSpace& x, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("scale factor must be a finite real >= 0");
    if (lambda == 0.0) return FiniteMetricSpace{};
    std::vector<double> d(x.flat().begin(), x.flat().end());
    for (auto& v : d) v *= lambda;
    return FiniteMetricSpace::from_flat(x.size(), std::move(d), x.labels());
}

/// Entrywise alpha*d1 + beta*d2 over a shared point set.
inline FiniteMetricSpace combine(double alpha, const FiniteMetricSpace& d1, double beta,
                                 const FiniteMetricSpace& d2) {
    if (d1.size() != d2.size()) throw DomainError("combine needs spaces on the same point set");
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw DomainError("combine coefficients must be finite and non-negative");
    if (alpha + beta <= 0.0) throw DomainError("combine needs a non-trivial combination");
    std::vector<double> d(d1.size() * d1.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = alpha * d1.flat()[k] + beta * d2.flat()[k];
    return FiniteMetricSpace::from_flat(d1.size(), std::move(d), d1.labels());
}

// ---------------------------------------------------------------------------
// Bijection search

namespace detail {

struct BijectionSearch {
    double distortion = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> mapping;  // mapping[i] = image of point i
    std::uint64_t nodes = 0;
    bool found = false;
};

// Lexicographic depth-first search over bijections a -> b minimizing
// max |a(i,k) - b(f(i),f(k))|. A prefix is abandoned as soon as its partial
// distortion reaches the incumbent, so the first minimizer in lexicographic
// order is the one reported.
inline BijectionSearch min_distortion_bijection(const FiniteMetricSpace& a, const FiniteMetricSpace& b,
                                                bool exclude_identity) {
    BijectionSearch best;
    const std::size_t n = a.size();
    if (n != b.size()) return best;
    std::vector<std::size_t> f(n);
    std::vector<char> used(n, 0);

    auto rec = [&](auto&& self, std::size_t k, double partial, bool identity_so_far) -> void {
        ++best.nodes;
        if (k == n) {
            if (exclude_identity && identity_so_far) return;
            best.distortion = partial;
            best.mapping = f;
            best.found = true;
            return;
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            double local = partial;
            for (std::size_t k2 = 0; k2 < k && local < best.distortion; ++k2)
                local = std::max(local, std::abs(a(k, k2) - b(c, f[k2])));
            if (local >= best.distortion) continue;
            used[c] = 1;
            f[k] = c;
            self(self, k + 1, local, identity_so_far && c == k);
            used[c] = 0;
        }
    };
    rec(rec, 0, 0.0, true);
    return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// s / t / e characteristics

/// s(X), t(X), e(X) with lexicographically first witnesses.
struct GenericityReport {
    std::size_t n = 0;
    double diam = 0.0;
    double s = 0.0;
    std::array<std::size_t, 2> s_witness{};  ///< pair i < j with d(i,j) = s
    double t = 0.0;
    std::array<std::size_t, 3> t_witness{};  ///< ordered triple (x, x', x'') achieving t
    std::optional<double> e;                 ///< empty when the space exceeds the e-search budget
    std::vector<std::size_t> e_witness;      ///< non-identity permutation achieving e
    std::uint64_t e_nodes = 0;
    bool is_generic = false;  ///< s, t, e all exceed the metric tolerance; false when e is unknown
};

inline GenericityReport characteristics(const FiniteMetricSpace& x, std::size_t e_budget = SolverLimits{}.e_search_max_points,
                                        const Tolerances& tol = {}) {
    const std::size_t n = x.size();
    if (n < 3) throw DomainError("s, t, e are defined for spaces with at least 3 points");

    GenericityReport r;
    r.n = n;
    r.diam = diameter(x);

    r.s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (x(i, j) < r.s) {
                r.s = x(i, j);
                r.s_witness = {i, j};
            }

    r.t = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == a || c == b) continue;
                const double excess = x(a, b) + x(b, c) - x(a, c);
                if (excess < r.t) {
                    r.t = excess;
                    r.t_witness = {a, b, c};
                }
            }
        }

    if (n <= e_budget) {
        auto search = detail::min_distortion_bijection(x, x, /*exclude_identity=*/true);
        r.e = search.distortion;
        r.e_witness = std::move(search.mapping);
        r.e_nodes = search.nodes;
    }
    r.is_generic = r.s > tol.metric && r.t > tol.metric && r.e.has_value() && *r.e > tol.metric;
    return r;
}

}  // namespace gh
