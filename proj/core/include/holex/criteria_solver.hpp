#pragma once

// Holistic explanations: consistent distributions over an explanandum's
// related factors, selected by maximizing Pr(phi) (optimistic), minimizing it
// (pessimistic), or maximizing entropy (Laplace).

#include "holex/rule_compiler.hpp"
#include "holex/system_model.hpp"
#include "holex/world_semantics.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace holex {

enum class Criterion { Optimistic, Pessimistic, Laplace };
enum class Direction { Maximize, Minimize };

/// "optimistic" | "pessimistic" | "laplace"
const char* to_string(Criterion c) noexcept;
std::optional<Criterion> parse_criterion(std::string_view text) noexcept;

/// Probability per world, indexed by the world bit pattern over `atoms`.
struct Distribution {
    std::vector<Atom> atoms;
    std::vector<double> probs;

    double prob(const Assignment& assignment) const;
    /// Pr(a) = sum over worlds where a holds.
    double marginal(const Atom& a) const;
    /// -sum p ln p, with 0 ln 0 = 0.
    double entropy() const;
};

double entropy(std::span<const double> probs);

struct SolverOptions {
    double feasibility_tol = 1e-9;
    /// Max-ent stops once every constraint residual is below this.
    double maxent_residual_tol = 1e-11;
    std::size_t maxent_max_iterations = 200;
    /// 0 starts the dual iteration at zero; other values pick a seeded random start.
    std::uint64_t maxent_seed = 0;
};

struct FeasibilityResult {
    bool feasible = false;
    std::optional<Distribution> witness;
    /// Labels of an irreducible infeasible subset of rule constraints.
    std::vector<std::string> core;
};

FeasibilityResult check_feasible(const ConstraintSystem& cs, const SolverOptions& options = {});

struct ExtremalSolution {
    double value = 0.0;
    Distribution distribution;
};

/// Optimum of Pr(phi) over the feasible polytope. Throws InfeasibleError
/// (with core) when no consistent distribution exists.
ExtremalSolution solve_extremal(const ConstraintSystem& cs, const Atom& phi, Direction direction,
                                const SolverOptions& options = {});

struct MaxEntSolution {
    Distribution distribution;
    double constraint_residual = 0.0;
    double stationarity_residual = 0.0;
    std::size_t iterations = 0;
    /// Worlds that no consistent distribution can give positive mass.
    std::size_t forced_zero_worlds = 0;
};

inline constexpr double kMaxEntConstraintTarget = 1e-8;
inline constexpr double kMaxEntStationarityTarget = 1e-6;

/// The unique entropy-maximizing consistent distribution. Throws
/// InfeasibleError or ConvergenceError.
MaxEntSolution solve_maxent(const ConstraintSystem& cs, const SolverOptions& options = {});

struct HolisticExplanation {
    Atom explanandum;
    Criterion criterion = Criterion::Laplace;
    Distribution distribution;
    double objective = 0.0;  // Pr(explanandum)
    double entropy = 0.0;
    std::vector<std::pair<Atom, double>> marginals;  // in distribution atom order
    std::vector<Atom> pruned_language;
};

struct QueryOptions {
    std::size_t atom_cap = kDefaultAtomCap;
    bool pruning = true;
    SolverOptions solver;
};

/// compile -> reachable_set(phi) -> build_constraints -> criterion. Throws
/// PreconditionError if phi is not a final output of the system.
HolisticExplanation holistic_explanation(const MultiModelSystem& system, const Atom& phi,
                                         Criterion criterion, const QueryOptions& options = {});

/// Solves an already-compiled rule base; `phi` must be in its language.
HolisticExplanation explain(const RuleBase& rb, const Atom& phi, Criterion criterion,
                            const QueryOptions& options = {});

}  // namespace holex
