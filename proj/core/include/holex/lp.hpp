#pragma once

// Dense two-phase primal simplex for equality-constrained LPs over x >= 0:
//
//   optimize c.x  subject to  A x = b,  x >= 0
//
// Sized for probability polytopes: few rows (one per rule), many columns (one
// per world). Pivoting is Dantzig's rule with a switch to Bland's rule after a
// run of degenerate pivots, so results are deterministic for a given input.

#include <cstddef>
#include <span>
#include <vector>

namespace holex {

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
    std::span<const double> coeffs;
    double rhs = 0.0;
};

struct LpOptions {
    double tolerance = 1e-9;
    std::size_t degenerate_limit = 50;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
};

/// An empty objective (or one of all zeros) makes this a pure feasibility check.
/// Throws InternalError if the iteration budget is exhausted.
LpResult solve_lp(std::span<const LpRow> rows, std::span<const double> objective, LpSense sense,
                  const LpOptions& options = {});

}  // namespace holex
