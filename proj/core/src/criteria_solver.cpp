#include "holex/criteria_solver.hpp"

#include "holex/errors.hpp"
#include "holex/lp.hpp"
#include "solver_detail.hpp"

#include <algorithm>
#include <cmath>

namespace holex {

namespace detail {

std::vector<LpRow> lp_rows(const ConstraintSystem& cs, const std::vector<bool>* active) {
    std::vector<LpRow> rows;
    rows.reserve(cs.constraints.size());
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        if (active && !(*active)[i]) continue;
        rows.push_back({cs.constraints[i].coeffs, cs.constraints[i].rhs});
    }
    return rows;
}

namespace {

bool rows_feasible(const ConstraintSystem& cs, const std::vector<bool>& active, const LpOptions& lp) {
    const auto rows = lp_rows(cs, &active);
    return solve_lp(rows, {}, LpSense::Minimize, lp).status == LpStatus::Optimal;
}

}  // namespace

// Deletion filter: drop each rule row whose removal keeps the system
// infeasible. What remains is irreducible. Normalization is never dropped.
std::vector<std::string> infeasible_core(const ConstraintSystem& cs, const LpOptions& lp) {
    std::vector<bool> active(cs.constraints.size(), true);
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        if (cs.constraints[i].origin.is_normalization()) continue;
        active[i] = false;
        if (rows_feasible(cs, active, lp)) active[i] = true;
    }
    std::vector<std::string> core;
    for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
        if (active[i] && !cs.constraints[i].origin.is_normalization()) {
            core.push_back(cs.constraints[i].origin.label());
        }
    }
    return core;
}

namespace {

std::string core_message(const std::vector<std::string>& core) {
    std::string msg = "no consistent probability distribution exists";
    if (!core.empty()) {
        msg += "; conflicting rules:";
        for (const auto& c : core) msg += "\n  " + c;
    }
    return msg;
}

}  // namespace

void throw_infeasible(const ConstraintSystem& cs, const LpOptions& lp) {
    auto core = infeasible_core(cs, lp);
    auto message = core_message(core);
    throw InfeasibleError(std::move(message), std::move(core));
}

}  // namespace detail

namespace {

std::size_t world_index(const Distribution& d, const Assignment& a) {
    return static_cast<std::size_t>(world_of(a, d.atoms).bits);
}

}  // namespace

const char* to_string(Criterion c) noexcept {
    switch (c) {
        case Criterion::Optimistic: return "optimistic";
        case Criterion::Pessimistic: return "pessimistic";
        case Criterion::Laplace: return "laplace";
    }
    return "unknown";
}

std::optional<Criterion> parse_criterion(std::string_view text) noexcept {
    if (text == "optimistic") return Criterion::Optimistic;
    if (text == "pessimistic") return Criterion::Pessimistic;
    if (text == "laplace") return Criterion::Laplace;
    return std::nullopt;
}

double Distribution::prob(const Assignment& assignment) const {
    return probs.at(world_index(*this, assignment));
}

double Distribution::marginal(const Atom& a) const {
    auto it = std::find(atoms.begin(), atoms.end(), a);
    if (it == atoms.end()) throw LookupError("atom '" + a.name + "' is not in the distribution");
    const std::size_t bit = std::size_t{1} << (it - atoms.begin());
    double sum = 0.0;
    for (std::size_t w = 0; w < probs.size(); ++w) {
        if (w & bit) sum += probs[w];
    }
    return sum;
}

double entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double Distribution::entropy() const { return holex::entropy(probs); }

FeasibilityResult check_feasible(const ConstraintSystem& cs, const SolverOptions& options) {
    const LpOptions lp{options.feasibility_tol};
    const auto rows = detail::lp_rows(cs);
    auto result = solve_lp(rows, {}, LpSense::Minimize, lp);

    FeasibilityResult out;
    if (result.status == LpStatus::Optimal) {
        out.feasible = true;
        out.witness = Distribution{cs.atoms, std::move(result.x)};
    } else {
        out.core = detail::infeasible_core(cs, lp);
    }
    return out;
}

ExtremalSolution solve_extremal(const ConstraintSystem& cs, const Atom& phi, Direction direction,
                                const SolverOptions& options) {
    std::vector<double> objective(cs.num_worlds, 0.0);
    for (auto w : cs.worlds_entailing(phi)) objective[w] = 1.0;

    const LpOptions lp{options.feasibility_tol};
    const auto rows = detail::lp_rows(cs);
    auto result = solve_lp(rows, objective,
                           direction == Direction::Maximize ? LpSense::Maximize : LpSense::Minimize, lp);

    switch (result.status) {
        case LpStatus::Infeasible: detail::throw_infeasible(cs, lp);
        case LpStatus::Unbounded:
            throw InternalError("LP over the probability simplex reported unbounded");
        case LpStatus::Optimal: break;
    }

    ExtremalSolution out;
    out.distribution = Distribution{cs.atoms, std::move(result.x)};
    out.value = out.distribution.marginal(phi);
    return out;
}

HolisticExplanation explain(const RuleBase& rb, const Atom& phi, Criterion criterion,
                            const QueryOptions& options) {
    if (!rb.contains(phi)) throw LookupError("atom '" + phi.name + "' is not in the language");

    const RuleBase used = options.pruning ? reachable_set(phi, rb) : rb;
    auto cs = build_constraints(used, options.atom_cap);
    cs.objective_support = cs.worlds_entailing(phi);

    HolisticExplanation out;
    out.explanandum = phi;
    out.criterion = criterion;
    out.pruned_language = used.language;

    switch (criterion) {
        case Criterion::Optimistic:
            out.distribution = solve_extremal(cs, phi, Direction::Maximize, options.solver).distribution;
            break;
        case Criterion::Pessimistic:
            out.distribution = solve_extremal(cs, phi, Direction::Minimize, options.solver).distribution;
            break;
        case Criterion::Laplace:
            out.distribution = solve_maxent(cs, options.solver).distribution;
            break;
    }

    out.objective = out.distribution.marginal(phi);
    out.entropy = out.distribution.entropy();
    for (const auto& a : out.distribution.atoms) out.marginals.emplace_back(a, out.distribution.marginal(a));
    return out;
}

HolisticExplanation holistic_explanation(const MultiModelSystem& system, const Atom& phi,
                                         Criterion criterion, const QueryOptions& options) {
    const auto finals = final_outputs(system);
    if (std::find(finals.begin(), finals.end(), phi) == finals.end()) {
        throw PreconditionError("explanandum '" + phi.name +
                                "' is not a final output of the system; only outputs of models "
                                "with no outgoing link can be explained");
    }
    return explain(compile(system), phi, criterion, options);
}

}  // namespace holex
