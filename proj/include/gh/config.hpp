#pragma once

#include <cstddef>

namespace gh {

/// Numeric tolerances shared by validation and equality checks.
struct Tolerances {
    double metric = 1e-9;  ///< slack allowed in triangle inequalities
    double eq = 1e-9;      ///< slack allowed when asserting two reals are equal
};

/// Hard caps. Enumeration beyond these is refused, never truncated.
inline constexpr std::size_t kOracleMaxCells = 30;   // p*q for full correspondence enumeration
inline constexpr std::size_t kStarMaxSide = 8;       // p, q for star enumeration
inline constexpr std::size_t kMaxColumns = 64;       // one machine word per relation row

/// Soft budgets; callers may raise them at their own (exponential) cost.
struct SolverLimits {
    std::size_t gh_max_points = 8;        ///< per-side cap for gh_exact
    std::size_t e_search_max_points = 8;  ///< largest space whose e(X) is searched exactly
};

}  // namespace gh
