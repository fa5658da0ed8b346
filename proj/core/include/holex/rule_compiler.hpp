#pragma once

// Compilation of a multi-model system into a language and a set of
// probabilistic rules, plus reachability over the rule graph.

#include "holex/system_model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace holex {

/// head <- body : [theta]. An empty body makes the rule a fact.
struct PRule {
    Atom head;
    std::vector<Atom> body;
    double theta = 0.0;

    bool is_fact() const noexcept { return body.empty(); }

    friend bool operator==(const PRule&, const PRule&) = default;
};

/// Renders as "AD <- BA : [0.6]" (or "BA <- : [0.7]" for facts).
std::string to_string(const PRule& rule);

struct RuleBase {
    std::vector<Atom> language;  // order fixes the world bit encoding
    std::vector<PRule> rules;

    bool contains(const Atom& atom) const noexcept;
    /// Position of `atom` in `language`; throws LookupError when absent.
    std::size_t index_of(const Atom& atom) const;
};

/// Language = every model output, in order of models sorted by id and then
/// declaration order. One rule per table entry: entries conditioned only on
/// external inputs become facts; conditioning external atoms are dropped from
/// mixed entries. Throws ValidationError for an invalid system or a rule whose
/// head is an external input.
RuleBase compile(const MultiModelSystem& system);

/// True iff a chain of rules leads from `source` (in a body) to `target` (as
/// head). Throws LookupError for atoms outside the language.
bool reachable(const Atom& target, const Atom& source, const RuleBase& rb);

/// Neither atom is reachable from the other.
bool independent(const Atom& a, const Atom& b, const RuleBase& rb);

/// `phi` plus every atom `phi` is reachable from, and the rules whose head is
/// in that set. Atom and rule order follow `rb`.
RuleBase reachable_set(const Atom& phi, const RuleBase& rb);

}  // namespace holex
