#include "holex/rule_compiler.hpp"

#include "holex/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace holex {

namespace {

bool contains_atom(const std::vector<Atom>& atoms, const Atom& a) {
    return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
}

void require_atom(const RuleBase& rb, const Atom& a) {
    if (!rb.contains(a)) throw LookupError("atom '" + a.name + "' is not in the language");
}

// head -> body atoms, by language index.
std::vector<std::vector<std::size_t>> dependency_edges(const RuleBase& rb) {
    std::vector<std::vector<std::size_t>> edges(rb.language.size());
    for (const auto& rule : rb.rules) {
        const auto h = rb.index_of(rule.head);
        for (const auto& b : rule.body) edges[h].push_back(rb.index_of(b));
    }
    return edges;
}

// Atoms strictly reachable backwards from `start` (start itself only if on a cycle).
std::vector<bool> ancestors(const RuleBase& rb, std::size_t start) {
    const auto edges = dependency_edges(rb);
    std::vector<bool> seen(rb.language.size(), false);
    std::vector<std::size_t> stack(edges[start].begin(), edges[start].end());
    while (!stack.empty()) {
        const auto node = stack.back();
        stack.pop_back();
        if (seen[node]) continue;
        seen[node] = true;
        stack.insert(stack.end(), edges[node].begin(), edges[node].end());
    }
    return seen;
}

}  // namespace

std::string to_string(const PRule& rule) {
    std::ostringstream os;
    os << rule.head.name << " <-";
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
        os << (i == 0 ? " " : ", ") << rule.body[i].name;
    }
    os << " : [" << rule.theta << "]";
    return os.str();
}

bool RuleBase::contains(const Atom& atom) const noexcept { return contains_atom(language, atom); }

std::size_t RuleBase::index_of(const Atom& atom) const {
    auto it = std::find(language.begin(), language.end(), atom);
    if (it == language.end()) throw LookupError("atom '" + atom.name + "' is not in the language");
    return static_cast<std::size_t>(it - language.begin());
}

RuleBase compile(const MultiModelSystem& system) {
    if (auto report = validate_system(system); !report.valid()) {
        throw ValidationError(report.summary());
    }

    std::vector<const Model*> sorted;
    for (const auto& m : system.models) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(),
              [](const Model* a, const Model* b) { return a->id < b->id; });

    std::set<std::string> external;
    for (const auto& m : system.models) {
        for (const auto& a : m.external_inputs) external.insert(a.name);
    }

    RuleBase rb;
    for (const Model* m : sorted) {
        for (const auto& out : m->outputs) {
            if (!contains_atom(rb.language, out)) rb.language.push_back(out);
        }
    }

    for (const Model* m : sorted) {
        for (const auto& entry : m->table) {
            if (external.contains(entry.output.name)) {
                throw ValidationError("rule head '" + entry.output.name + "' in model '" + m->id +
                                      "' is an external input of the system");
            }
            PRule rule{entry.output, {}, entry.theta};
            for (const auto& g : entry.given) {
                if (contains_atom(m->internal_inputs, g)) rule.body.push_back(g);
            }
            rb.rules.push_back(std::move(rule));
        }
    }
    return rb;
}

bool reachable(const Atom& target, const Atom& source, const RuleBase& rb) {
    require_atom(rb, target);
    require_atom(rb, source);
    return ancestors(rb, rb.index_of(target))[rb.index_of(source)];
}

bool independent(const Atom& a, const Atom& b, const RuleBase& rb) {
    return !reachable(a, b, rb) && !reachable(b, a, rb);
}

RuleBase reachable_set(const Atom& phi, const RuleBase& rb) {
    require_atom(rb, phi);
    const auto phi_index = rb.index_of(phi);
    auto keep = ancestors(rb, phi_index);
    keep[phi_index] = true;

    RuleBase pruned;
    for (std::size_t i = 0; i < rb.language.size(); ++i) {
        if (keep[i]) pruned.language.push_back(rb.language[i]);
    }
    for (const auto& rule : rb.rules) {
        if (keep[rb.index_of(rule.head)]) pruned.rules.push_back(rule);
    }
    return pruned;
}

}  // namespace holex
