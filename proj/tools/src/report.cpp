#include "holex/cli.hpp"

#include "holex/errors.hpp"
#include "holex/oracle.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace holex::cli {

namespace {

std::string world_label(const Assignment& assignment, std::span<const Atom> atoms) {
    std::string label;
    for (const auto& a : atoms) {
        if (!label.empty()) label += ' ';
        label += a.name + (assignment.at(a.name) ? "=1" : "=0");
    }
    return label;
}

}  // namespace

Verification verify(const HolisticExplanation& explanation, const RuleBase& used, std::size_t atom_cap) {
    const auto cs = build_constraints(used, atom_cap);
    Verification v;
    if (explanation.criterion == Criterion::Laplace) {
        // Max-ent dominance over sampled feasible points.
        v.method = "sampled-dominance";
        v.solver_value = explanation.entropy;
        const auto samples = oracle::sample_feasible(cs, kVerifySamples, 1);
        double best = 0.0;
        for (const auto& s : samples) best = std::max(best, s.entropy());
        v.oracle_value = best;
        v.gap = std::max(0.0, best - explanation.entropy);
    } else {
        v.method = "vertex-enumeration";
        const auto direction =
            explanation.criterion == Criterion::Optimistic ? Direction::Maximize : Direction::Minimize;
        v.solver_value = explanation.objective;
        v.oracle_value = oracle::oracle_extremal(cs, explanation.explanandum, direction);
        v.gap = std::abs(v.solver_value - v.oracle_value);
    }
    v.agrees = v.gap <= kVerifyTolerance;
    return v;
}

std::string render_json(const HolisticExplanation& e, const std::optional<Verification>& v) {
    using nlohmann::ordered_json;
    const auto& d = e.distribution;

    ordered_json atoms = ordered_json::array();
    for (const auto& a : d.atoms) atoms.push_back(a.name);

    ordered_json worlds = ordered_json::array();
    for (std::size_t w = 0; w < d.probs.size(); ++w) {
        ordered_json assignment = ordered_json::object();
        for (std::size_t i = 0; i < d.atoms.size(); ++i) assignment[d.atoms[i].name] = ((w >> i) & 1U) != 0;
        worlds.push_back({{"assignment", std::move(assignment)}, {"prob", d.probs[w]}});
    }

    ordered_json marginals = ordered_json::object();
    for (const auto& [atom, p] : e.marginals) marginals[atom.name] = p;

    ordered_json pruned = ordered_json::array();
    for (const auto& a : e.pruned_language) pruned.push_back(a.name);

    ordered_json report = {
        {"explanandum", e.explanandum.name},
        {"criterion", to_string(e.criterion)},
        {"atoms", std::move(atoms)},
        {"worlds", std::move(worlds)},
        {"marginals", std::move(marginals)},
        {"objective", e.objective},
        {"entropy", e.entropy},
        {"pruned_language", std::move(pruned)},
        {"feasible", true},
    };
    if (v) {
        report["verification"] = {
            {"method", v->method},
            {"agrees", v->agrees},
            {"solver_value", v->solver_value},
            {"oracle_value", v->oracle_value},
            {"gap", v->gap},
        };
    }
    return report.dump(2) + "\n";
}

std::string render_table(const HolisticExplanation& e, const std::optional<Verification>& v) {
    const auto& d = e.distribution;
    std::string out;
    std::string names;
    for (const auto& a : e.pruned_language) names += (names.empty() ? "" : " ") + a.name;
    const std::string objective_label = "Pr(" + e.explanandum.name + ")";
    const std::size_t key_width = std::max<std::size_t>(11, objective_label.size());
    out += fmt::format("{:<{}}  {}\n", "explanandum", key_width, e.explanandum.name);
    out += fmt::format("{:<{}}  {}\n", "criterion", key_width, to_string(e.criterion));
    out += fmt::format("{:<{}}  {}\n", "language", key_width, names);
    out += fmt::format("{:<{}}  {:.6g}\n", objective_label, key_width, e.objective);
    out += fmt::format("{:<{}}  {:.6g} nats\n\n", "entropy", key_width, e.entropy);

    std::vector<std::size_t> order(d.probs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d.probs[a] > d.probs[b]; });

    std::vector<std::string> labels;
    std::size_t width = 5;
    for (auto w : order) {
        labels.push_back(world_label(assignment_of(World{w, d.atoms.size()}, d.atoms), d.atoms));
        width = std::max(width, labels.back().size());
    }
    out += fmt::format("{:<{}}  {}\n", "world", width, "prob");
    for (std::size_t i = 0; i < order.size(); ++i) {
        out += fmt::format("{:<{}}  {:.6g}\n", labels[i], width, d.probs[order[i]]);
    }

    out += "\nmarginals\n";
    std::size_t name_width = 4;
    for (const auto& [atom, _] : e.marginals) name_width = std::max(name_width, atom.name.size());
    for (const auto& [atom, p] : e.marginals) out += fmt::format("  {:<{}}  {:.6g}\n", atom.name, name_width, p);

    if (v) {
        out += fmt::format("\nverify: {} via {} (solver {:.6g}, oracle {:.6g}, gap {:.3g})\n",
                           v->agrees ? "oracle agrees" : "ORACLE DISAGREES", v->method, v->solver_value,
                           v->oracle_value, v->gap);
    }
    return out;
}

}  // namespace holex::cli
