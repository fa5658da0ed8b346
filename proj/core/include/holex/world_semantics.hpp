#pragma once

// Possible worlds over a language and the linear system a consistent
// distribution over them must satisfy.
//
// A world over atoms (a_0, ..., a_{n-1}) is stored as an n-bit integer whose
// bit i is the truth value of a_i. World index == bit pattern, so worlds are
// enumerated in ascending integer order. The encoding is internal: anything
// leaving the library labels worlds by explicit atom assignments.

#include "holex/rule_compiler.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace holex {

inline constexpr std::size_t kDefaultAtomCap = 24;
inline constexpr std::size_t kHardAtomLimit = 40;

struct World {
    std::uint64_t bits = 0;
    std::size_t width = 0;

    bool holds(std::size_t atom_index) const noexcept { return (bits >> atom_index) & 1U; }

    friend bool operator==(const World&, const World&) = default;
};

/// Truth assignment keyed by atom name.
using Assignment = std::map<std::string, bool>;

Assignment assignment_of(const World& w, std::span<const Atom> atoms);

/// World matching a full assignment over `atoms`; throws LookupError if the
/// assignment names an unknown atom or leaves one out.
World world_of(const Assignment& assignment, std::span<const Atom> atoms);

/// All 2^n worlds in ascending order. Throws ResourceLimitError when
/// n exceeds `atom_cap`, and std::invalid_argument for an empty language.
std::vector<World> cc_set(std::span<const Atom> atoms, std::size_t atom_cap = kDefaultAtomCap);

/// True iff every atom of `conj` is true in `w`. Throws LookupError for atoms
/// not in `atoms`.
bool entails(const World& w, std::span<const Atom> conj, std::span<const Atom> atoms);

/// Bit mask selecting the atoms of `conj`.
std::uint64_t conjunction_mask(std::span<const Atom> conj, std::span<const Atom> atoms);

struct ConstraintOrigin {
    std::optional<PRule> rule;  // empty for the normalization row
    std::size_t rule_index = 0;

    bool is_normalization() const noexcept { return !rule.has_value(); }
    std::string label() const;
};

/// sum_w coeffs[w] * pi(w) == rhs
struct Constraint {
    std::vector<double> coeffs;
    double rhs = 0.0;
    ConstraintOrigin origin;
};

struct ConstraintSystem {
    std::vector<Atom> atoms;
    std::size_t num_worlds = 0;
    std::vector<Constraint> constraints;  // normalization first, then one row per rule
    std::vector<std::size_t> objective_support;

    std::size_t atom_index(const Atom& a) const;
    /// Indices of worlds in which `phi` is true.
    std::vector<std::size_t> worlds_entailing(const Atom& phi) const;
};

/// Normalization row, then per rule: facts as "sum over head-worlds == theta";
/// conditionals in homogeneous form with coefficient (theta - 1) on
/// head-and-body worlds, theta on body-but-not-head worlds, rhs 0.
ConstraintSystem build_constraints(const RuleBase& rb, std::size_t atom_cap = kDefaultAtomCap);

/// Largest |row . probs - rhs| over all constraints.
double max_residual(const ConstraintSystem& cs, std::span<const double> probs);

/// Residual of a rule in its original (non-rearranged) form:
///   fact:        theta - Pr(head)
///   conditional: Pr(body) * theta - Pr(head and body)
double rule_residual(const PRule& rule, std::span<const Atom> atoms, std::span<const double> probs);

}  // namespace holex
