#include "holex/system_model.hpp"

#include "holex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace holex {

namespace {

using ProducerMap = std::map<std::string, std::vector<std::string>>;

ProducerMap producers_of(std::span<const Model> models) {
    ProducerMap producers;
    for (const auto& m : models) {
        for (const auto& out : m.outputs) {
            auto& ids = producers[out.name];
            if (std::find(ids.begin(), ids.end(), m.id) == ids.end()) ids.push_back(m.id);
        }
    }
    return producers;
}

std::vector<std::string> other_producers(const ProducerMap& producers, const std::string& atom,
                                         const std::string& consumer) {
    std::vector<std::string> result;
    if (auto it = producers.find(atom); it != producers.end()) {
        for (const auto& id : it->second) {
            if (id != consumer) result.push_back(id);
        }
    }
    return result;
}

// Links for every internal input that has exactly one producer; ambiguous
// atoms are skipped here and reported by validation.
std::vector<Link> unambiguous_links(std::span<const Model> models) {
    const auto producers = producers_of(models);
    std::set<Link> links;
    for (const auto& m : models) {
        for (const auto& in : m.internal_inputs) {
            auto from = other_producers(producers, in.name, m.id);
            if (from.size() == 1) links.insert({from.front(), m.id});
        }
    }
    return {links.begin(), links.end()};
}

bool contains_atom(std::span<const Atom> atoms, const Atom& a) {
    return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
}

std::string link_name(const Link& l) { return "(" + l.from + ", " + l.to + ")"; }

class Reporter {
public:
    void add(ViolationKind kind, std::string subject, std::string message) {
        report_.violations.push_back({kind, std::move(subject), std::move(message)});
    }
    ValidationReport take() { return std::move(report_); }

private:
    ValidationReport report_;
};

void check_atom_list(Reporter& r, const Model& m, std::span<const Atom> atoms, const char* what) {
    std::set<std::string> seen;
    for (const auto& a : atoms) {
        if (a.name.empty()) {
            r.add(ViolationKind::EmptyIdentifier, m.id,
                  "model '" + m.id + "' has an empty atom name in its " + what);
        } else if (!seen.insert(a.name).second) {
            r.add(ViolationKind::DuplicateAtom, a.name,
                  "model '" + m.id + "' lists atom '" + a.name + "' twice in its " + what);
        }
    }
}

void check_model(Reporter& r, const Model& m) {
    if (m.id.empty()) r.add(ViolationKind::EmptyIdentifier, "", "a model has an empty id");

    check_atom_list(r, m, m.external_inputs, "external inputs");
    check_atom_list(r, m, m.internal_inputs, "internal inputs");
    check_atom_list(r, m, m.outputs, "outputs");

    for (const auto& a : m.external_inputs) {
        if (contains_atom(m.internal_inputs, a)) {
            r.add(ViolationKind::InputOverlap, a.name,
                  "model '" + m.id + "' lists '" + a.name + "' as both external and internal input");
        }
    }
    for (const auto& a : m.outputs) {
        if (contains_atom(m.external_inputs, a) || contains_atom(m.internal_inputs, a)) {
            r.add(ViolationKind::OutputIsInput, a.name,
                  "model '" + m.id + "' lists '" + a.name + "' as both output and input");
        }
    }

    std::set<std::pair<std::string, std::vector<std::string>>> keys;
    for (const auto& e : m.table) {
        if (!std::isfinite(e.theta) || e.theta < 0.0 || e.theta > 1.0) {
            std::ostringstream os;
            os << "model '" << m.id << "' entry for '" << e.output.name << "' has probability "
               << e.theta << " outside [0, 1]";
            r.add(ViolationKind::ProbabilityOutOfRange, m.id, os.str());
        }
        if (!contains_atom(m.outputs, e.output)) {
            r.add(ViolationKind::EntryOutputUnknown, e.output.name,
                  "model '" + m.id + "' has a table entry for '" + e.output.name +
                      "', which is not one of its outputs");
        }
        std::vector<std::string> given;
        for (const auto& g : e.given) {
            if (!contains_atom(m.external_inputs, g) && !contains_atom(m.internal_inputs, g)) {
                r.add(ViolationKind::EntryGivenUnknown, g.name,
                      "model '" + m.id + "' conditions on '" + g.name +
                          "', which is not one of its inputs");
            }
            given.push_back(g.name);
        }
        std::sort(given.begin(), given.end());
        if (std::adjacent_find(given.begin(), given.end()) != given.end()) {
            r.add(ViolationKind::DuplicateAtom, e.output.name,
                  "model '" + m.id + "' entry for '" + e.output.name + "' repeats a conditioning atom");
        }
        if (!keys.emplace(e.output.name, given).second) {
            r.add(ViolationKind::DuplicateEntry, e.output.name,
                  "model '" + m.id + "' has two entries for '" + e.output.name +
                      "' with the same conditioning set");
        }
    }
}

// Returns the first cycle found as "a -> b -> a", or empty when acyclic.
std::string find_cycle(const std::vector<std::string>& ids, const std::set<Link>& links) {
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& l : links) succ[l.from].push_back(l.to);

    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> mark;
    for (const auto& id : ids) mark[id] = Mark::White;

    std::vector<std::string> path;
    std::string witness;

    auto visit = [&](auto&& self, const std::string& node) -> bool {
        mark[node] = Mark::Grey;
        path.push_back(node);
        for (const auto& next : succ[node]) {
            if (mark[next] == Mark::Grey) {
                auto start = std::find(path.begin(), path.end(), next);
                for (auto it = start; it != path.end(); ++it) witness += *it + " -> ";
                witness += next;
                return true;
            }
            if (mark[next] == Mark::White && self(self, next)) return true;
        }
        path.pop_back();
        mark[node] = Mark::Black;
        return false;
    };

    for (const auto& id : ids) {
        if (mark[id] == Mark::White && visit(visit, id)) return witness;
    }
    return {};
}

}  // namespace

const char* to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::EmptySystem: return "empty-system";
        case ViolationKind::EmptyIdentifier: return "empty-identifier";
        case ViolationKind::DuplicateModel: return "duplicate-model";
        case ViolationKind::DuplicateAtom: return "duplicate-atom";
        case ViolationKind::InputOverlap: return "input-overlap";
        case ViolationKind::OutputIsInput: return "output-is-input";
        case ViolationKind::ProbabilityOutOfRange: return "probability-out-of-range";
        case ViolationKind::EntryOutputUnknown: return "entry-output-unknown";
        case ViolationKind::EntryGivenUnknown: return "entry-given-unknown";
        case ViolationKind::DuplicateEntry: return "duplicate-entry";
        case ViolationKind::MissingProducer: return "missing-producer";
        case ViolationKind::AmbiguousProducer: return "ambiguous-producer";
        case ViolationKind::ExternalInputProduced: return "external-input-produced";
        case ViolationKind::SelfLink: return "self-link";
        case ViolationKind::UnknownLinkEndpoint: return "unknown-link-endpoint";
        case ViolationKind::LinkWithoutSharedAtom: return "link-without-shared-atom";
        case ViolationKind::LinkMismatch: return "link-mismatch";
        case ViolationKind::Cycle: return "cycle";
        case ViolationKind::NoFinalOutput: return "no-final-output";
    }
    return "unknown";
}

bool ValidationReport::contains(ViolationKind kind) const noexcept {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += '\n';
        out += std::string("[") + to_string(v.kind) + "] " + v.message;
    }
    return out;
}

ValidationReport validate_system(const MultiModelSystem& system) {
    Reporter r;
    if (system.models.empty()) {
        r.add(ViolationKind::EmptySystem, "", "system has no models");
        return r.take();
    }

    std::set<std::string> ids;
    std::vector<std::string> ordered_ids;
    for (const auto& m : system.models) {
        if (!ids.insert(m.id).second) {
            r.add(ViolationKind::DuplicateModel, m.id, "model id '" + m.id + "' is used twice");
        } else {
            ordered_ids.push_back(m.id);
        }
        check_model(r, m);
    }

    const auto producers = producers_of(system.models);
    for (const auto& m : system.models) {
        for (const auto& in : m.internal_inputs) {
            auto from = other_producers(producers, in.name, m.id);
            if (from.empty()) {
                r.add(ViolationKind::MissingProducer, in.name,
                      "internal input '" + in.name + "' of model '" + m.id +
                          "' is not produced by any other model");
            } else if (from.size() > 1) {
                std::string names;
                for (const auto& id : from) names += (names.empty() ? "" : ", ") + id;
                r.add(ViolationKind::AmbiguousProducer, in.name,
                      "internal input '" + in.name + "' of model '" + m.id +
                          "' is produced by several models: " + names);
            }
        }
        for (const auto& ext : m.external_inputs) {
            if (auto it = producers.find(ext.name); it != producers.end()) {
                r.add(ViolationKind::ExternalInputProduced, ext.name,
                      "external input '" + ext.name + "' of model '" + m.id +
                          "' is an output of model '" + it->second.front() + "'");
            }
        }
    }

    const auto inferred_vec = unambiguous_links(system.models);
    const std::set<Link> inferred(inferred_vec.begin(), inferred_vec.end());
    const std::set<Link> given(system.links.begin(), system.links.end());

    for (const auto& l : given) {
        const Model* from = find_model(system, l.from);
        const Model* to = find_model(system, l.to);
        if (l.from == l.to) {
            r.add(ViolationKind::SelfLink, link_name(l), "link " + link_name(l) + " is a self-loop");
        } else if (!from || !to) {
            r.add(ViolationKind::UnknownLinkEndpoint, link_name(l),
                  "link " + link_name(l) + " refers to an unknown model");
        } else if (std::none_of(from->outputs.begin(), from->outputs.end(), [&](const Atom& a) {
                       return contains_atom(to->internal_inputs, a);
                   })) {
            r.add(ViolationKind::LinkWithoutSharedAtom, link_name(l),
                  "link " + link_name(l) + ": no output of '" + l.from +
                      "' is an internal input of '" + l.to + "'");
        } else if (!inferred.contains(l)) {
            r.add(ViolationKind::LinkMismatch, link_name(l),
                  "link " + link_name(l) + " is listed but not implied by the models' inputs");
        }
    }
    for (const auto& l : inferred) {
        if (!given.contains(l)) {
            r.add(ViolationKind::LinkMismatch, link_name(l),
                  "link " + link_name(l) + " is implied by the models' inputs but not listed");
        }
    }

    std::set<Link> graph = inferred;
    for (const auto& l : given) {
        if (ids.contains(l.from) && ids.contains(l.to)) graph.insert(l);
    }
    if (auto cycle = find_cycle(ordered_ids, graph); !cycle.empty()) {
        r.add(ViolationKind::Cycle, cycle, "model graph has a cycle: " + cycle);
    }

    std::set<std::string> has_outgoing;
    for (const auto& l : graph) has_outgoing.insert(l.from);
    if (has_outgoing.size() >= ids.size()) {
        r.add(ViolationKind::NoFinalOutput, "", "every model feeds another model; no final output");
    }

    return r.take();
}

std::vector<Link> infer_links(std::span<const Model> models) {
    const auto producers = producers_of(models);
    std::set<Link> links;
    for (const auto& m : models) {
        for (const auto& in : m.internal_inputs) {
            auto from = other_producers(producers, in.name, m.id);
            if (from.empty()) {
                throw AmbiguityError(in.name, "internal input '" + in.name + "' of model '" + m.id +
                                                  "' has no producer");
            }
            if (from.size() > 1) {
                throw AmbiguityError(in.name, "internal input '" + in.name + "' of model '" + m.id +
                                                  "' has " + std::to_string(from.size()) +
                                                  " producers");
            }
            links.insert({from.front(), m.id});
        }
    }
    return {links.begin(), links.end()};
}

std::vector<Atom> final_outputs(const MultiModelSystem& system) {
    if (auto report = validate_system(system); !report.valid()) {
        throw ValidationError(report.summary());
    }
    std::set<std::string> has_outgoing;
    for (const auto& l : system.links) has_outgoing.insert(l.from);

    std::vector<const Model*> sorted;
    for (const auto& m : system.models) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(),
              [](const Model* a, const Model* b) { return a->id < b->id; });

    std::vector<Atom> result;
    for (const Model* m : sorted) {
        if (has_outgoing.contains(m->id)) continue;
        for (const auto& out : m->outputs) {
            if (!contains_atom(result, out)) result.push_back(out);
        }
    }
    return result;
}

MultiModelSystem make_system(std::vector<Model> models, std::optional<std::vector<Link>> explicit_links) {
    MultiModelSystem system;
    system.links = explicit_links ? std::move(*explicit_links) : unambiguous_links(models);
    system.models = std::move(models);
    std::sort(system.links.begin(), system.links.end());
    system.links.erase(std::unique(system.links.begin(), system.links.end()), system.links.end());

    if (auto report = validate_system(system); !report.valid()) {
        throw ValidationError(report.summary());
    }
    return system;
}

const Model* find_model(const MultiModelSystem& system, std::string_view id) noexcept {
    for (const auto& m : system.models) {
        if (m.id == id) return &m;
    }
    return nullptr;
}

}  // namespace holex
