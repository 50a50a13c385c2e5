#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "gh/cone.hpp"
#include "gh/config.hpp"
#include "gh/error.hpp"
#include "gh/generic.hpp"
#include "gh/ghdist.hpp"
#include "gh/metric_space.hpp"

namespace gh {

/// Isometric copy of X inside the n-point spaces under d_GH, plus the data
/// needed to audit every step.
struct EmbeddingResult {
    FiniteMetricSpace input;
    double diam = 0.0;
    ScaledGeneric anchor;
    double epsilon = 0.0;
    DistanceVector w;                                ///< rho_M under the identity enumeration
    std::vector<std::size_t> slot_of_coordinate;     ///< pair slot carrying Kuratowski coordinate j
    std::vector<std::vector<double>> kuratowski;     ///< f(x_i) in R^n
    std::vector<DistanceVector> translates;          ///< z_i = w + 2 f(x_i) injected into pair slots
    std::vector<FiniteMetricSpace> images;           ///< Z_i = pi(z_i)
    std::vector<std::vector<double>> achieved;       ///< d_GH(Z_i, Z_j)
    std::vector<std::vector<double>> verification;   ///< achieved - |x_i x_j|

    double max_abs_deviation() const {
        double m = 0.0;
        for (const auto& row : verification)
            for (double v : row) m = std::max(m, std::abs(v));
        return m;
    }
};

/// Kuratowski coordinate j lives in the pair slot {j, j+1 mod n}; these n
/// slots are distinct for n >= 3. Remaining slots keep w's value.
inline std::vector<std::size_t> kuratowski_slots(std::size_t n) {
    if (n < 3) throw DomainError("slot injection needs n >= 3");
    std::vector<std::size_t> slots(n);
    for (std::size_t j = 0; j < n; ++j) slots[j] = pair_index(n, j, (j + 1) % n);
    return slots;
}

/// z = w + 2 f, the factor 2 turning the half-sup metric back into the sup-metric.
inline DistanceVector inject_translate(const DistanceVector& w, const std::vector<double>& f,
                                       const std::vector<std::size_t>& slots) {
    DistanceVector z = w;
    for (std::size_t j = 0; j < f.size(); ++j) z.v[slots[j]] += 2 * f[j];
    return z;
}

/// Recomputes the pairwise GH distances of the images and the deviations.
inline void reverify(EmbeddingResult& r, const SolverLimits& limits = {}) {
    const std::size_t n = r.images.size();
    r.achieved.assign(n, std::vector<double>(n, 0.0));
    r.verification.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double g = gh_exact(r.images[i], r.images[j], limits).distance;
            r.achieved[i][j] = r.achieved[j][i] = g;
            r.verification[i][j] = r.verification[j][i] = g - r.input(i, j);
        }
}

inline EmbeddingResult embed(const FiniteMetricSpace& x, std::uint64_t seed, const SolverLimits& limits = {},
                             const Tolerances& tol = {}) {
    require_valid(x, tol);
    const std::size_t n = x.size();
    if (n < 3) throw DomainError("embedding needs at least 3 points");
    if (n > limits.gh_max_points || n > limits.e_search_max_points)
        throw DomainError("n = " + std::to_string(n) + " exceeds the solver budget; lower n");

    EmbeddingResult r;
    r.input = x;
    r.diam = diameter(x);
    r.anchor = scaled_generic_for(r.diam, n, seed, limits.e_search_max_points, tol);
    const auto& rep = r.anchor.generated.report;
    const double ceiling = std::min(rep.s, *rep.e) / 8;
    r.epsilon = (r.diam + ceiling) / 2;
    if (!(r.diam < r.epsilon && r.epsilon < ceiling))
        throw ConsistencyError("empty epsilon window: diam X must be below min(s, e)/8");

    r.w = distance_vector(r.anchor.generated.space, Enumeration::identity(n));
    r.slot_of_coordinate = kuratowski_slots(n);
    r.kuratowski = kuratowski(x);
    for (std::size_t i = 0; i < n; ++i) {
        auto z = inject_translate(r.w, r.kuratowski[i], r.slot_of_coordinate);
        if (!(half_sup_dist(z, r.w) < r.epsilon - 1e-12))
            throw ConsistencyError("translate " + std::to_string(i) + " leaves the epsilon-ball around w");
        if (!in_cone(z, tol)) throw ConsistencyError("translate " + std::to_string(i) + " leaves the metric cone");
        r.translates.push_back(std::move(z));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double kur = sup_dist(r.kuratowski[i], r.kuratowski[j]);
            if (std::abs(kur - x(i, j)) > tol.eq)
                throw ConsistencyError("Kuratowski map is not isometric");
            if (std::abs(half_sup_dist(r.translates[i], r.translates[j]) - kur) > tol.eq)
                throw ConsistencyError("slot injection does not preserve distances");
        }
    for (const auto& z : r.translates) r.images.push_back(project(z, tol));
    reverify(r, limits);
    return r;
}

// ---------------------------------------------------------------------------

struct EmbedReport {
    struct Row {
        std::size_t i = 0, j = 0;
        double target = 0.0, achieved = 0.0, deviation = 0.0;
    };
    std::string status;  ///< "isometric", "violated" or "error"
    std::string message;
    double max_dev = 0.0;
    double tolerance = 0.0;
    double epsilon = 0.0;
    double diam = 0.0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    GenericityReport anchor;
    std::vector<Row> table;
    std::vector<Row> offending;
};

inline EmbedReport embed_report(const EmbeddingResult& r, const Tolerances& tol = {}) {
    EmbedReport rep;
    rep.tolerance = tol.eq;
    const std::size_t n = r.images.size();
    if (n == 0 || r.verification.size() != n || r.input.size() != n) {
        rep.status = "error";
        rep.message = "embedding result is empty or incomplete";
        return rep;
    }
    rep.epsilon = r.epsilon;
    rep.diam = r.diam;
    rep.lambda = r.anchor.lambda;
    rep.seed = r.anchor.generated.seed;
    rep.anchor = r.anchor.generated.report;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            EmbedReport::Row row{i, j, r.input(i, j), r.achieved[i][j], r.verification[i][j]};
            rep.table.push_back(row);
            if (std::abs(row.deviation) > tol.eq) rep.offending.push_back(row);
        }
    rep.max_dev = r.max_abs_deviation();
    rep.status = rep.max_dev <= tol.eq ? "isometric" : "violated";
    if (rep.status == "violated") rep.message = std::to_string(rep.offending.size()) + " pair(s) off target";
    return rep;
}

inline std::string to_text(const EmbedReport& rep) {
    std::ostringstream os;
    os << "status: " << rep.status << '\n';
    if (!rep.message.empty()) os << "message: " << rep.message << '\n';
    if (rep.status == "error") return os.str();
    os << std::setprecision(12);
    os << "diam X = " << rep.diam << ", epsilon = " << rep.epsilon << ", lambda = " << rep.lambda
       << ", seed = " << rep.seed << '\n';
    os << "anchor: s = " << rep.anchor.s << ", t = " << rep.anchor.t << ", e = " << rep.anchor.e.value_or(NAN) << '\n';
    os << "  i  j        target      achieved     deviation\n";
    for (const auto& row : rep.table)
        os << std::setw(3) << row.i << std::setw(3) << row.j << std::setw(14) << row.target << std::setw(14)
           << row.achieved << std::setw(14) << row.deviation << '\n';
    os << "max |deviation| = " << rep.max_dev << " (tolerance " << rep.tolerance << ")\n";
    return os.str();
}

}  // namespace gh
