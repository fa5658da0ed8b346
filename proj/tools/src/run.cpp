#include "holex/cli.hpp"

#include "holex/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <ostream>
#include <vector>

namespace holex::cli {

namespace {

enum ExitCode : int { kOk = 0, kInvalid = 1, kInfeasible = 2, kResource = 3 };

int execute(const QuerySpec& spec, std::ostream& out, std::ostream& err) {
    const auto system = load_system(spec.system_path);
    const Atom phi{spec.explanandum};

    QueryOptions options;
    options.atom_cap = spec.max_atoms;
    options.pruning = spec.pruning;
    options.solver.feasibility_tol = spec.tolerance;

    try {
        const auto explanation = holistic_explanation(system, phi, spec.criterion, options);

        std::optional<Verification> verification;
        if (spec.verify) {
            const auto rb = compile(system);
            verification = verify(explanation, spec.pruning ? reachable_set(phi, rb) : rb, spec.max_atoms);
        }

        out << (spec.format == Format::Json ? render_json(explanation, verification)
                                            : render_table(explanation, verification));
        if (verification && !verification->agrees) {
            err << "holex: oracle cross-check failed (gap " << verification->gap << ")\n";
            return kResource;
        }
        return kOk;
    } catch (const InfeasibleError& e) {
        if (spec.format == Format::Json) {
            nlohmann::ordered_json report = {
                {"explanandum", spec.explanandum},
                {"criterion", to_string(spec.criterion)},
                {"feasible", false},
                {"conflicting_rules", e.core()},
            };
            out << report.dump(2) << "\n";
        }
        throw;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Reconcile probabilistic model explanations into a holistic explanation.", "holex"};

    QuerySpec spec;
    std::string criterion;
    std::string format = "table";
    bool no_pruning = false;

    app.add_option("--system", spec.system_path, "System description (JSON)")->required();
    app.add_option("--explanandum", spec.explanandum, "Final-output atom to explain")->required();
    app.add_option("--criterion", criterion, "optimistic | pessimistic | laplace")
        ->required()
        ->check(CLI::IsMember({"optimistic", "pessimistic", "laplace"}).description(""))
        ->type_name("NAME");
    app.add_option("--format", format, "table | json")
        ->check(CLI::IsMember({"table", "json"}).description(""))
        ->type_name("NAME")
        ->capture_default_str();
    app.add_option("--max-atoms", spec.max_atoms, "Atom cap for world enumeration")
        ->check(CLI::Range(std::size_t{1}, kHardAtomLimit))
        ->capture_default_str();
    app.add_flag("--no-pruning", no_pruning, "Solve over the full language (testing only)");
    app.add_flag("--verify", spec.verify, "Cross-check against the brute-force oracle (small systems)");
    app.add_option("--tol", spec.tolerance, "Solver feasibility tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "holex: " << e.what() << "\n";
        return kInvalid;
    }
    spec.criterion = *parse_criterion(criterion);
    spec.format = format == "json" ? Format::Json : Format::Table;
    spec.pruning = !no_pruning;

    try {
        return execute(spec, out, err);
    } catch (const InfeasibleError& e) {
        err << "holex: " << e.what() << "\n";
        return kInfeasible;
    } catch (const ResourceLimitError& e) {
        err << "holex: " << e.what() << "\n";
        return kResource;
    } catch (const ConvergenceError& e) {
        err << "holex: " << e.what() << "\n";
        return kResource;
    } catch (const InternalError& e) {
        err << "holex: internal error: " << e.what() << "\n";
        return kResource;
    } catch (const Error& e) {
        err << "holex: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        err << "holex: " << e.what() << "\n";
        return kInvalid;
    }
}

}  // namespace holex::cli
