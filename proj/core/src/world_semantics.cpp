#include "holex/world_semantics.hpp"

#include "holex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holex {

namespace {

std::size_t position(std::span<const Atom> atoms, const Atom& a) {
    auto it = std::find(atoms.begin(), atoms.end(), a);
    if (it == atoms.end()) throw LookupError("atom '" + a.name + "' is not in the language");
    return static_cast<std::size_t>(it - atoms.begin());
}

void check_size(std::size_t n, std::size_t cap) {
    if (n == 0) throw std::invalid_argument("language is empty");
    const auto limit = std::min(cap, kHardAtomLimit);
    if (n > limit) {
        throw ResourceLimitError("language has " + std::to_string(n) + " atoms, over the cap of " +
                                 std::to_string(limit) +
                                 "; prune to the explanandum's reachable set or raise the cap");
    }
}

}  // namespace

Assignment assignment_of(const World& w, std::span<const Atom> atoms) {
    Assignment out;
    for (std::size_t i = 0; i < atoms.size(); ++i) out[atoms[i].name] = w.holds(i);
    return out;
}

World world_of(const Assignment& assignment, std::span<const Atom> atoms) {
    World w{0, atoms.size()};
    for (const auto& [name, value] : assignment) {
        const auto i = position(atoms, Atom{name});
        if (value) w.bits |= std::uint64_t{1} << i;
    }
    if (assignment.size() != atoms.size()) {
        throw LookupError("assignment does not cover every atom of the language");
    }
    return w;
}

std::vector<World> cc_set(std::span<const Atom> atoms, std::size_t atom_cap) {
    check_size(atoms.size(), atom_cap);
    const std::uint64_t count = std::uint64_t{1} << atoms.size();
    std::vector<World> worlds;
    worlds.reserve(count);
    for (std::uint64_t bits = 0; bits < count; ++bits) worlds.push_back({bits, atoms.size()});
    return worlds;
}

std::uint64_t conjunction_mask(std::span<const Atom> conj, std::span<const Atom> atoms) {
    std::uint64_t mask = 0;
    for (const auto& a : conj) mask |= std::uint64_t{1} << position(atoms, a);
    return mask;
}

bool entails(const World& w, std::span<const Atom> conj, std::span<const Atom> atoms) {
    const auto mask = conjunction_mask(conj, atoms);
    return (w.bits & mask) == mask;
}

std::string ConstraintOrigin::label() const {
    return rule ? to_string(*rule) : std::string("normalization");
}

std::size_t ConstraintSystem::atom_index(const Atom& a) const { return position(atoms, a); }

std::vector<std::size_t> ConstraintSystem::worlds_entailing(const Atom& phi) const {
    const std::uint64_t bit = std::uint64_t{1} << atom_index(phi);
    std::vector<std::size_t> out;
    out.reserve(num_worlds / 2);
    for (std::size_t w = 0; w < num_worlds; ++w) {
        if (w & bit) out.push_back(w);
    }
    return out;
}

ConstraintSystem build_constraints(const RuleBase& rb, std::size_t atom_cap) {
    check_size(rb.language.size(), atom_cap);

    ConstraintSystem cs;
    cs.atoms = rb.language;
    cs.num_worlds = std::size_t{1} << rb.language.size();
    cs.constraints.reserve(rb.rules.size() + 1);

    cs.constraints.push_back({std::vector<double>(cs.num_worlds, 1.0), 1.0, {}});

    for (std::size_t r = 0; r < rb.rules.size(); ++r) {
        const auto& rule = rb.rules[r];
        const auto head = conjunction_mask(std::span(&rule.head, 1), cs.atoms);
        const auto body = conjunction_mask(rule.body, cs.atoms);

        Constraint row{std::vector<double>(cs.num_worlds, 0.0), 0.0, {rule, r}};
        if (rule.is_fact()) {
            row.rhs = rule.theta;
            for (std::size_t w = 0; w < cs.num_worlds; ++w) {
                if ((w & head) == head) row.coeffs[w] = 1.0;
            }
        } else {
            for (std::size_t w = 0; w < cs.num_worlds; ++w) {
                if ((w & body) != body) continue;
                row.coeffs[w] = (w & head) == head ? rule.theta - 1.0 : rule.theta;
            }
        }
        cs.constraints.push_back(std::move(row));
    }
    return cs;
}

double max_residual(const ConstraintSystem& cs, std::span<const double> probs) {
    if (probs.size() != cs.num_worlds) throw std::invalid_argument("probability vector has wrong size");
    double worst = 0.0;
    for (const auto& c : cs.constraints) {
        double lhs = 0.0;
        for (std::size_t w = 0; w < cs.num_worlds; ++w) lhs += c.coeffs[w] * probs[w];
        worst = std::max(worst, std::abs(lhs - c.rhs));
    }
    return worst;
}

double rule_residual(const PRule& rule, std::span<const Atom> atoms, std::span<const double> probs) {
    const auto worlds = cc_set(atoms, kHardAtomLimit);
    if (probs.size() != worlds.size()) throw std::invalid_argument("probability vector has wrong size");

    std::vector<Atom> head_and_body = rule.body;
    head_and_body.push_back(rule.head);

    double body_mass = 0.0;
    double joint_mass = 0.0;
    for (const auto& w : worlds) {
        if (entails(w, rule.body, atoms)) body_mass += probs[w.bits];
        if (entails(w, head_and_body, atoms)) joint_mass += probs[w.bits];
    }
    if (rule.is_fact()) return rule.theta - joint_mass;
    return body_mass * rule.theta - joint_mass;
}

}  // namespace holex
