#pragma once

// Brute-force reference answers for small constraint systems. Exponential by
// construction; used by tests and the CLI's --verify flag, never for queries.

#include "holex/criteria_solver.hpp"
#include "holex/world_semantics.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace holex::oracle {

inline constexpr std::size_t kMaxWorlds = 64;
inline constexpr std::size_t kMaxConstraints = 16;
inline constexpr std::uint64_t kMaxBases = 20'000'000;

struct VertexSet {
    std::vector<Distribution> vertices;  // sorted lexicographically by probabilities
};

/// Every basic feasible solution of the polytope, found by solving the square
/// system for each choice of basis columns. Empty iff the system is
/// infeasible. Throws OracleScaleError beyond the oracle's size limits.
VertexSet enumerate_vertices(const ConstraintSystem& cs);

/// Exact extremum of Pr(phi) over all vertices. Throws InfeasibleError when
/// there are none.
double oracle_extremal(const ConstraintSystem& cs, const Atom& phi, Direction direction);

/// `count` feasible points, each a random convex combination of the
/// vertices; deterministic for a given seed. Throws InfeasibleError when
/// there are no vertices.
std::vector<Distribution> sample_feasible(const ConstraintSystem& cs, std::size_t count,
                                          std::uint64_t seed);

}  // namespace holex::oracle
