#pragma once

#include "holex/criteria_solver.hpp"
#include "holex/rule_compiler.hpp"
#include "holex/system_model.hpp"
#include "holex/world_semantics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace holex::testing {

inline Atom atom(const char* name) { return Atom{name}; }

inline std::vector<Atom> atoms(std::initializer_list<const char*> names) {
    std::vector<Atom> out;
    for (auto n : names) out.push_back(Atom{n});
    return out;
}

/// The brain-disease diagnostic system: MRI and cognitive-test analyzers (a, b)
/// feeding a risk model (c) and a diagnosis model (d).
inline std::vector<Model> brain_models() {
    return {
        Model{"a", atoms({"MRI"}), {}, atoms({"BA"}), {{atom("BA"), atoms({"MRI"}), 0.7}}},
        Model{"b", atoms({"CT"}), {}, atoms({"CA"}), {{atom("CA"), atoms({"CT"}), 0.6}}},
        Model{"c", {}, atoms({"BA"}), atoms({"HR"}), {{atom("HR"), atoms({"BA"}), 0.2}}},
        Model{"d", {}, atoms({"BA", "CA"}), atoms({"AD"}),
              {{atom("AD"), atoms({"BA"}), 0.6}, {atom("AD"), atoms({"CA"}), 0.5}}},
    };
}

inline MultiModelSystem brain_system() { return make_system(brain_models()); }

inline PRule fact(const char* head, double theta) { return PRule{atom(head), {}, theta}; }
inline PRule cond(const char* head, std::initializer_list<const char*> body, double theta) {
    return PRule{atom(head), atoms(body), theta};
}

/// Reference distributions for the brain system, keyed by three-character
/// strings whose characters give the truth of AD, BA, CA in that order.
struct ReferenceTable {
    const char* name;
    std::array<std::pair<const char*, double>, 8> worlds;
};

inline const ReferenceTable kOptimisticTable{
    "optimistic",
    {{{"000", 0.0}, {"001", 0.02}, {"010", 0.0}, {"011", 0.28},
      {"100", 0.15}, {"101", 0.13}, {"110", 0.25}, {"111", 0.17}}}};

inline const ReferenceTable kPessimisticTable{
    "pessimistic",
    {{{"000", 0.14}, {"001", 0.16}, {"010", 0.14}, {"011", 0.14},
      {"100", 0.0}, {"101", 0.0}, {"110", 0.12}, {"111", 0.3}}}};

inline const ReferenceTable kLaplaceTable{
    "laplace",
    {{{"000", 0.058}, {"001", 0.114}, {"010", 0.094}, {"011", 0.186},
      {"100", 0.058}, {"101", 0.07}, {"110", 0.19}, {"111", 0.23}}}};

inline Assignment labelled_assignment(const std::string& bits) {
    return {{"AD", bits[0] == '1'}, {"BA", bits[1] == '1'}, {"CA", bits[2] == '1'}};
}

/// Re-indexes a reference table onto the world encoding of `language`.
inline std::vector<double> table_probs(const ReferenceTable& table, const std::vector<Atom>& language) {
    std::vector<double> probs(std::size_t{1} << language.size(), 0.0);
    for (const auto& [bits, p] : table.worlds) probs[world_of(labelled_assignment(bits), language).bits] = p;
    return probs;
}

// The brain system equations for AD, written out by hand with worlds as
// AD,BA,CA strings. Returns the largest residual.
inline double reference_equation_residual(const std::vector<double>& probs, const std::vector<Atom>& language) {
    auto pi = [&](const char* bits) { return probs[world_of(labelled_assignment(bits), language).bits]; };
    const double eqs[] = {
        (pi("010") + pi("011") + pi("110") + pi("111")) * 0.6 - (pi("111") + pi("110")),
        (pi("001") + pi("011") + pi("101") + pi("111")) * 0.5 - (pi("111") + pi("101")),
        0.7 - (pi("010") + pi("011") + pi("110") + pi("111")),
        0.6 - (pi("001") + pi("011") + pi("101") + pi("111")),
        1.0 - (pi("000") + pi("001") + pi("010") + pi("011") + pi("100") + pi("101") + pi("110") + pi("111")),
    };
    double worst = 0.0;
    for (double e : eqs) worst = std::max(worst, std::abs(e));
    return worst;
}

/// Random acyclic rule bases over atoms A0..A{n-1}: bodies only use
/// lower-numbered atoms. When `consistent`, every theta is the exact
/// conditional of a hidden random distribution (some worlds at zero mass), so
/// the system is feasible by construction; otherwise thetas are drawn from
/// {0, 0.1, ..., 1}.
struct RandomSystem {
    RuleBase rb;
    bool consistent_by_construction = false;
};

inline RandomSystem random_rule_base(std::uint64_t seed, std::size_t max_atoms = 4, std::size_t max_rules = 6) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };

    RandomSystem out;
    const std::size_t n = pick(1, max_atoms);
    for (std::size_t i = 0; i < n; ++i) out.rb.language.push_back(Atom{"A" + std::to_string(i)});
    out.consistent_by_construction = uniform(0.0, 1.0) < 0.75;

    const std::size_t worlds = std::size_t{1} << n;
    std::vector<double> hidden(worlds);
    double total = 0.0;
    for (auto& p : hidden) {
        p = uniform(0.0, 1.0) < 0.2 ? 0.0 : uniform(0.0, 1.0);
        total += p;
    }
    if (total == 0.0) {
        hidden[0] = 1.0;
        total = 1.0;
    }
    for (auto& p : hidden) p /= total;

    const std::size_t rules = pick(1, max_rules);
    for (std::size_t r = 0; r < rules; ++r) {
        const std::size_t head = pick(0, n - 1);
        PRule rule{out.rb.language[head], {}, 0.0};
        for (std::size_t j = 0; j < head; ++j) {
            if (uniform(0.0, 1.0) < 0.45) rule.body.push_back(out.rb.language[j]);
        }
        if (out.consistent_by_construction) {
            std::uint64_t body_mask = 0;
            for (const auto& b : rule.body) body_mask |= std::uint64_t{1} << out.rb.index_of(b);
            const std::uint64_t joint_mask = body_mask | (std::uint64_t{1} << head);
            double body = 0.0;
            double joint = 0.0;
            for (std::size_t w = 0; w < worlds; ++w) {
                if ((w & body_mask) == body_mask) body += hidden[w];
                if ((w & joint_mask) == joint_mask) joint += hidden[w];
            }
            rule.theta = body > 0.0 ? joint / body : uniform(0.0, 1.0);
        } else {
            rule.theta = static_cast<double>(pick(0, 10)) / 10.0;
        }
        out.rb.rules.push_back(std::move(rule));
    }
    return out;
}

/// n atoms, each with up to three lower-numbered parents. Thetas are exact
/// conditionals of a random product distribution, so the system is feasible.
inline RuleBase layered_rule_base(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    RuleBase rb;
    std::vector<double> marginal(n);
    for (std::size_t i = 0; i < n; ++i) {
        rb.language.push_back(Atom{"A" + std::to_string(i)});
        marginal[i] = unit(rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
        rb.rules.push_back(PRule{rb.language[i], {}, marginal[i]});
        for (std::size_t k = 1; k <= 3 && k <= i; ++k) {
            rb.rules.push_back(PRule{rb.language[i], {rb.language[i - k]}, marginal[i]});
        }
    }
    return rb;
}

/// Atoms that occur in no rule body (the rule-graph sinks).
inline std::vector<Atom> sink_atoms(const RuleBase& rb) {
    std::vector<Atom> out;
    for (const auto& a : rb.language) {
        bool used = false;
        for (const auto& r : rb.rules) {
            for (const auto& b : r.body) used = used || b == a;
        }
        if (!used) out.push_back(a);
    }
    return out;
}

}  // namespace holex::testing
