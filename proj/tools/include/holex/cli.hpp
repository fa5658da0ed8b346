#pragma once

// Command-line front end: system description files in, explanation reports out.
//
// System file (UTF-8 JSON):
//   {"models": [{"id": "a", "external_inputs": ["MRI"], "internal_inputs": [],
//                "outputs": ["BA"],
//                "prob": [{"output": "BA", "given": ["MRI"], "theta": 0.7}]}, ...],
//    "links": [["a", "c"], ...]}            // optional; cross-checked when present

#include "holex/criteria_solver.hpp"
#include "holex/system_model.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace holex::cli {

enum class Format { Table, Json };

struct QuerySpec {
    std::string system_path;
    std::string explanandum;
    Criterion criterion = Criterion::Laplace;
    Format format = Format::Table;
    double tolerance = 1e-9;
    std::size_t max_atoms = kDefaultAtomCap;
    bool pruning = true;
    bool verify = false;
};

inline constexpr double kVerifyTolerance = 1e-6;
inline constexpr std::size_t kVerifySamples = 1000;

/// Oracle cross-check of a solved explanation.
struct Verification {
    bool agrees = false;
    std::string method;  // "vertex-enumeration" or "sampled-dominance"
    double solver_value = 0.0;
    double oracle_value = 0.0;
    double gap = 0.0;
};

/// Parses and validates a system description. Throws ValidationError with a
/// line/column or field-path diagnostic.
MultiModelSystem parse_system(std::string_view text);
MultiModelSystem load_system(const std::filesystem::path& path);

Verification verify(const HolisticExplanation& explanation, const RuleBase& used,
                    std::size_t atom_cap);

std::string render_json(const HolisticExplanation& e, const std::optional<Verification>& v = std::nullopt);
std::string render_table(const HolisticExplanation& e, const std::optional<Verification>& v = std::nullopt);

/// Exit codes: 0 success, 1 invalid input or precondition, 2 infeasible,
/// 3 resource, convergence, or verification failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace holex::cli
