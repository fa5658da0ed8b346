#pragma once

// Multi-model systems: prediction models wired output-to-input, each carrying
// a tabulated conditional probability mu(output | given inputs).

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace holex {

/// One sentence of the language: a named model output or external input.
/// Equality is by name (case-sensitive).
struct Atom {
    std::string name;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// One tabulated value mu(output | given).
struct ProbEntry {
    Atom output;
    std::vector<Atom> given;
    double theta = 0.0;
};

struct Model {
    std::string id;
    std::vector<Atom> external_inputs;
    std::vector<Atom> internal_inputs;
    std::vector<Atom> outputs;
    std::vector<ProbEntry> table;
};

/// Directed link (from, to): an output of `from` feeds an internal input of `to`.
struct Link {
    std::string from;
    std::string to;

    friend auto operator<=>(const Link&, const Link&) = default;
};

struct MultiModelSystem {
    std::vector<Model> models;
    std::vector<Link> links;
};

enum class ViolationKind {
    EmptySystem,
    EmptyIdentifier,
    DuplicateModel,
    DuplicateAtom,
    InputOverlap,
    OutputIsInput,
    ProbabilityOutOfRange,
    EntryOutputUnknown,
    EntryGivenUnknown,
    DuplicateEntry,
    MissingProducer,
    AmbiguousProducer,
    ExternalInputProduced,
    SelfLink,
    UnknownLinkEndpoint,
    LinkWithoutSharedAtom,
    LinkMismatch,
    Cycle,
    NoFinalOutput,
};

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::string subject;  // offending model id, atom, or link
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const noexcept { return violations.empty(); }
    bool contains(ViolationKind kind) const noexcept;
    /// All violation messages, one per line.
    std::string summary() const;

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Checks every structural invariant of a system. Violations are returned as
/// data; a valid system yields an empty report.
ValidationReport validate_system(const MultiModelSystem& system);

/// Links implied by input/output matching, sorted. Throws AmbiguityError when
/// an internal input has zero or several producers.
std::vector<Link> infer_links(std::span<const Model> models);

/// Outputs of models with no outgoing link, ordered by model id and then
/// declaration order. Throws ValidationError for an invalid system.
std::vector<Atom> final_outputs(const MultiModelSystem& system);

/// Builds a system from models, inferring links and cross-checking them
/// against `explicit_links` when given. Throws ValidationError listing every
/// violation if the result is invalid.
MultiModelSystem make_system(std::vector<Model> models,
                             std::optional<std::vector<Link>> explicit_links = std::nullopt);

const Model* find_model(const MultiModelSystem& system, std::string_view id) noexcept;

}  // namespace holex
