#include "holex/criteria_solver.hpp"
#include "holex/errors.hpp"
#include "holex/oracle.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>

using namespace holex;
using namespace holex::testing;

namespace {

ConstraintSystem brain_cs() { return build_constraints(reachable_set(atom("AD"), compile(brain_system()))); }

ConstraintSystem cs_of(std::vector<Atom> language, std::vector<PRule> rules) {
    return build_constraints(RuleBase{std::move(language), std::move(rules)});
}

}  // namespace

TEST_CASE("criterion names") {
    for (auto c : {Criterion::Optimistic, Criterion::Pessimistic, Criterion::Laplace}) {
        CHECK(parse_criterion(to_string(c)) == c);
    }
    CHECK_FALSE(parse_criterion("hurwicz").has_value());
}

TEST_CASE("feasibility") {
    SUBCASE("brain system is feasible") {
        const auto cs = brain_cs();
        const auto r = check_feasible(cs);
        REQUIRE(r.feasible);
        REQUIRE(r.witness.has_value());
        CHECK(max_residual(cs, r.witness->probs) <= 1e-9);
        CHECK(r.core.empty());
    }
    SUBCASE("contradictory facts") {
        const auto r = check_feasible(cs_of(atoms({"X"}), {fact("X", 0.7), fact("X", 0.6)}));
        CHECK_FALSE(r.feasible);
        CHECK(r.core == std::vector<std::string>{"X <- : [0.7]", "X <- : [0.6]"});
    }
    SUBCASE("certain X, impossible Y given X, certain Y") {
        const auto cs = cs_of(atoms({"X", "Y"}), {fact("X", 1.0), cond("Y", {"X"}, 0.0), fact("Y", 1.0)});
        const auto r = check_feasible(cs);
        CHECK_FALSE(r.feasible);
        CHECK(r.core.size() == 3);
        CHECK(oracle::enumerate_vertices(cs).vertices.empty());
    }
    SUBCASE("core excludes rules not involved in the conflict") {
        const auto cs = cs_of(atoms({"X", "Y"}), {fact("Y", 0.4), fact("X", 0.2), fact("X", 0.9)});
        const auto r = check_feasible(cs);
        CHECK_FALSE(r.feasible);
        CHECK(r.core == std::vector<std::string>{"X <- : [0.2]", "X <- : [0.9]"});
    }
}

TEST_CASE("extremal solutions on the brain system") {
    const auto cs = brain_cs();
    const auto hi = solve_extremal(cs, atom("AD"), Direction::Maximize);
    const auto lo = solve_extremal(cs, atom("AD"), Direction::Minimize);
    CHECK(hi.value == doctest::Approx(0.70).epsilon(1e-6));
    CHECK(lo.value == doctest::Approx(0.42).epsilon(1e-6));
    CHECK(std::abs(hi.value - 0.70) <= 1e-6);
    CHECK(std::abs(lo.value - 0.42) <= 1e-6);
    CHECK(max_residual(cs, hi.distribution.probs) <= 1e-9);
    CHECK(max_residual(cs, lo.distribution.probs) <= 1e-9);
    CHECK(hi.distribution.marginal(atom("AD")) == doctest::Approx(hi.value));

    // The reference optimistic and pessimistic tables attain the same optima.
    CHECK(Distribution{cs.atoms, table_probs(kOptimisticTable, cs.atoms)}.marginal(atom("AD")) ==
          doctest::Approx(0.70));
    CHECK(Distribution{cs.atoms, table_probs(kPessimisticTable, cs.atoms)}.marginal(atom("AD")) ==
          doctest::Approx(0.42));
}

TEST_CASE("extremal edge cases") {
    const auto cs = cs_of(atoms({"X"}), {fact("X", 0.3)});
    CHECK(solve_extremal(cs, atom("X"), Direction::Maximize).value == doctest::Approx(0.3));
    CHECK(solve_extremal(cs, atom("X"), Direction::Minimize).value == doctest::Approx(0.3));

    const auto bad = cs_of(atoms({"X"}), {fact("X", 0.7), fact("X", 0.6)});
    try {
        (void)solve_extremal(bad, atom("X"), Direction::Maximize);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.core().size() == 2);
    }
    CHECK_THROWS_AS(solve_extremal(cs, atom("Q"), Direction::Maximize), LookupError);
}

TEST_CASE("maximum entropy on the brain system") {
    const auto cs = brain_cs();
    const auto sol = solve_maxent(cs);
    const auto& d = sol.distribution;
    for (const auto& [bits, p] : kLaplaceTable.worlds) {
        CHECK_MESSAGE(std::abs(d.prob(labelled_assignment(bits)) - p) <= 0.005, bits);
    }
    CHECK(sol.constraint_residual <= 1e-8);
    CHECK(sol.stationarity_residual <= 1e-6);
    CHECK(sol.forced_zero_worlds == 0);

    // Entropy of the reference table, recomputed from its eight values.
    const auto reference = table_probs(kLaplaceTable, cs.atoms);
    CHECK(entropy(reference) == doctest::Approx(1.952).epsilon(5e-4));
    CHECK(d.entropy() >= entropy(reference) - 1e-6);
    CHECK(d.entropy() == doctest::Approx(entropy(reference)).epsilon(1e-3));
}

TEST_CASE("maximum entropy is unique across starting points") {
    const auto cs = brain_cs();
    SolverOptions seeded;
    seeded.maxent_seed = 12345;
    const auto a = solve_maxent(cs).distribution;
    const auto b = solve_maxent(cs, seeded).distribution;
    for (std::size_t w = 0; w < a.probs.size(); ++w) CHECK(std::abs(a.probs[w] - b.probs[w]) <= 1e-6);
}

TEST_CASE("maximum entropy edge cases") {
    SUBCASE("no rules gives the uniform distribution") {
        for (std::size_t n = 1; n <= 4; ++n) {
            std::vector<Atom> lang;
            for (std::size_t i = 0; i < n; ++i) lang.push_back(Atom{"A" + std::to_string(i)});
            const auto d = solve_maxent(build_constraints(RuleBase{lang, {}})).distribution;
            for (double p : d.probs) CHECK(p == doctest::Approx(1.0 / static_cast<double>(1u << n)));
        }
    }
    SUBCASE("certain fact forces a zero world") {
        const auto sol = solve_maxent(cs_of(atoms({"X"}), {fact("X", 1.0)}));
        CHECK(sol.distribution.probs[0] == 0.0);
        CHECK(sol.distribution.probs[1] == doctest::Approx(1.0));
        CHECK(sol.forced_zero_worlds == 1);
    }
    SUBCASE("theta 0 and 1 conditionals") {
        const auto cs = cs_of(atoms({"X", "Y", "Z"}),
                              {fact("X", 0.5), cond("Y", {"X"}, 1.0), cond("Z", {"Y"}, 0.0)});
        const auto sol = solve_maxent(cs);
        CHECK(sol.constraint_residual <= 1e-8);
        CHECK(sol.stationarity_residual <= 1e-6);
        CHECK(sol.forced_zero_worlds > 0);
        CHECK(sol.distribution.marginal(atom("X")) == doctest::Approx(0.5));
    }
    SUBCASE("zeros forced by a combination of rows") {
        // Pr(X) = Pr(Y) and X implies Y, so X and Y agree almost surely.
        const auto sol = solve_maxent(cs_of(atoms({"X", "Y"}), {fact("X", 0.5), cond("Y", {"X"}, 1.0), fact("Y", 0.5)}));
        CHECK(sol.forced_zero_worlds == 2);
        CHECK(sol.distribution.probs[0] == doctest::Approx(0.5));
        CHECK(sol.distribution.probs[3] == doctest::Approx(0.5));
    }
    SUBCASE("duplicate rules with equal theta") {
        const auto sol = solve_maxent(cs_of(atoms({"X"}), {fact("X", 0.3), fact("X", 0.3)}));
        CHECK(sol.distribution.probs[1] == doctest::Approx(0.3));
    }
    SUBCASE("infeasible") {
        CHECK_THROWS_AS(solve_maxent(cs_of(atoms({"X"}), {fact("X", 0.7), fact("X", 0.6)})), InfeasibleError);
    }
}

TEST_CASE("holistic explanations of the brain system") {
    const auto s = brain_system();

    const auto lap = holistic_explanation(s, atom("AD"), Criterion::Laplace);
    CHECK(std::abs(lap.objective - 0.548) <= 1e-3);
    CHECK(lap.pruned_language == atoms({"BA", "CA", "AD"}));
    CHECK(lap.entropy == doctest::Approx(lap.distribution.entropy()));

    const auto opt = holistic_explanation(s, atom("AD"), Criterion::Optimistic);
    const auto pes = holistic_explanation(s, atom("AD"), Criterion::Pessimistic);
    CHECK(std::abs(opt.objective - 0.70) <= 1e-6);
    CHECK(std::abs(pes.objective - 0.42) <= 1e-6);

    for (const auto* e : {&lap, &opt, &pes}) {
        CHECK(e->objective == doctest::Approx(e->distribution.marginal(atom("AD"))).epsilon(1e-12));
        for (const auto& [a, p] : e->marginals) CHECK(std::abs(p - e->distribution.marginal(a)) <= 1e-9);
    }

    // sandwich and entropy dominance
    CHECK(pes.objective <= lap.objective + 1e-6);
    CHECK(lap.objective <= opt.objective + 1e-6);
    CHECK(lap.entropy >= opt.entropy - 1e-6);
    CHECK(lap.entropy >= pes.entropy - 1e-6);

    const auto hr = holistic_explanation(s, atom("HR"), Criterion::Optimistic);
    CHECK(hr.pruned_language == atoms({"BA", "HR"}));
    CHECK(hr.objective == doctest::Approx(0.44));
    CHECK(holistic_explanation(s, atom("HR"), Criterion::Pessimistic).objective == doctest::Approx(0.14));
}

TEST_CASE("explanandum must be a final output") {
    const auto s = brain_system();
    CHECK_THROWS_AS(holistic_explanation(s, atom("BA"), Criterion::Laplace), PreconditionError);
    CHECK_THROWS_AS(holistic_explanation(s, atom("nope"), Criterion::Laplace), PreconditionError);
}

TEST_CASE("pruning does not change LP optima on the brain system") {
    const auto s = brain_system();
    QueryOptions full;
    full.pruning = false;
    for (auto c : {Criterion::Optimistic, Criterion::Pessimistic}) {
        const auto pruned = holistic_explanation(s, atom("AD"), c);
        const auto whole = holistic_explanation(s, atom("AD"), c, full);
        CHECK(whole.pruned_language.size() == 4);
        CHECK(std::abs(pruned.objective - whole.objective) <= 1e-6);
    }
}

TEST_CASE("pruning can change LP optima when an excluded head constrains included atoms") {
    // A2 lies outside A3's reachable set, but its three rules jointly restrict
    // the (A0, A1) marginal. Dropping them loosens the polytope.
    const RuleBase rb{atoms({"A0", "A1", "A2", "A3"}),
                      {fact("A0", 0.303), cond("A1", {"A0"}, 0.39), fact("A2", 0.588), cond("A2", {"A1"}, 0.264),
                       cond("A2", {"A0"}, 0.836), cond("A3", {"A1"}, 0.331)}};
    const auto phi = atom("A3");
    const auto full = build_constraints(rb);
    const auto pruned = build_constraints(reachable_set(phi, rb));
    REQUIRE(check_feasible(full).feasible);

    const double full_max = solve_extremal(full, phi, Direction::Maximize).value;
    const double pruned_max = solve_extremal(pruned, phi, Direction::Maximize).value;
    CHECK(full_max == doctest::Approx(0.826470523).epsilon(1e-6));
    CHECK(pruned_max == doctest::Approx(0.92094427).epsilon(1e-6));
    CHECK(full_max == doctest::Approx(oracle::oracle_extremal(full, phi, Direction::Maximize)));
}

TEST_CASE("solves are deterministic") {
    const auto s = brain_system();
    for (auto c : {Criterion::Optimistic, Criterion::Pessimistic, Criterion::Laplace}) {
        const auto a = holistic_explanation(s, atom("AD"), c);
        const auto b = holistic_explanation(s, atom("AD"), c);
        CHECK(a.distribution.probs == b.distribution.probs);
    }
}

TEST_CASE("degenerate LPs at 1024 worlds") {
    // Mostly homogeneous rows: phase 1 starts at a highly degenerate vertex.
    const auto rb = layered_rule_base(10, 7);
    const auto cs = build_constraints(rb);
    const auto phi = atom("A9");
    const double theta = rb.rules[rb.rules.size() - 4].theta;
    REQUIRE(rb.rules[rb.rules.size() - 4].is_fact());
    for (auto dir : {Direction::Maximize, Direction::Minimize}) {
        const auto sol = solve_extremal(cs, phi, dir);
        CHECK(sol.value == doctest::Approx(theta).epsilon(1e-9));
        CHECK(max_residual(cs, sol.distribution.probs) <= 1e-9);
    }
    const auto me = solve_maxent(cs);
    CHECK(me.constraint_residual <= 1e-8);
}
