#include "weakcat/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "weakcat/report.hpp"
#include "weakcat/sdl.hpp"

namespace weakcat {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

struct CliError {
    int code;
    std::string message;  // empty when diagnostics were already printed
};

void emit(const std::string& data) {
    std::fwrite(data.data(), 1, data.size(), stdout);
    std::fflush(stdout);
}

std::uint64_t read_env_seed() {
    const char* raw = std::getenv("WEAKCAT_SEED");
    if (raw == nullptr) return 0;
    std::string_view text(raw);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 10);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw CliError{kExitUsage, "invalid WEAKCAT_SEED '" + std::string(text) +
                                       "': expected a non-negative integer"};
    }
    return value;
}

void print_diagnostics(const std::string& file, const std::vector<sdl::Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        std::cerr << file << ':' << d.line << ':' << d.col << ": "
                  << (d.severity == sdl::Diagnostic::Severity::Error ? "error: " : "warning: ")
                  << d.message << '\n';
    }
}

// `spec` is a path to a .sdl file when one exists, otherwise a built-in
// scenario name.  `interpretation` overrides the document's own flag.
Scenario resolve_scenario(const std::string& spec, std::optional<Interpretation> interpretation) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(spec, ec)) {
        std::ifstream in(spec, std::ios::binary);
        if (!in) {
            throw CliError{kExitUsage, "cannot read file: " + spec};
        }
        std::ostringstream text;
        text << in.rdbuf();
        sdl::LowerResult lowered = sdl::load(text.str(), interpretation);
        print_diagnostics(spec, lowered.diagnostics);
        if (!lowered.ok()) {
            throw CliError{kExitDiagnostics, ""};
        }
        return *std::move(lowered.scenario);
    }
    if (auto builtin =
            builtin_scenario(spec, interpretation.value_or(Interpretation::Literal))) {
        return *std::move(builtin);
    }
    throw CliError{kExitUsage, "file not found: " + spec};
}

const std::pair<std::string, LinearOperator>& find_observable(const Scenario& s,
                                                              const std::string& name) {
    for (const auto& entry : s.observables) {
        if (entry.first == name) return entry;
    }
    throw CliError{kExitUsage,
                   "unknown observable '" + name + "' in scenario '" + s.name + "'"};
}

PrePostEnsemble make_ensemble(const Scenario& s) {
    std::optional<LinearOperator> evolution;
    if (s.interpretation == Interpretation::Evolved && s.evolution) {
        evolution = circuit_unitary(*s.evolution);
    }
    return PrePostEnsemble(s.pre, s.post, std::move(evolution));
}

struct Options {
    std::string scenario;
    std::string observable;
    std::string format_name = "text";
    std::string interpretation_name;
    double g = 0.0;
    double sigma = 1.0;
    double g_from = 0.0;
    double g_to = 0.0;
    std::size_t steps = 0;

    ReportFormat format() const {
        const auto parsed = parse_report_format(format_name);
        if (!parsed) {
            throw CliError{kExitUsage, "unknown format '" + format_name + "'"};
        }
        return *parsed;
    }

    std::optional<Interpretation> interpretation() const {
        if (interpretation_name.empty()) return std::nullopt;
        const auto parsed = parse_interpretation(interpretation_name);
        if (!parsed) {
            throw CliError{kExitUsage, "unknown interpretation '" + interpretation_name + "'"};
        }
        return parsed;
    }
};

void add_scenario_arg(CLI::App& cmd, Options& opt) {
    cmd.add_option("scenario", opt.scenario, "built-in scenario name or path to a .sdl file")
        ->required();
    cmd.add_option("--interpretation", opt.interpretation_name,
                   "force 'literal' or 'evolved' reading");
    cmd.add_option("--format", opt.format_name, "output format: json, csv, or text");
}

int run_list(const Options& opt) {
    const ReportFormat format = opt.format();
    std::ostringstream out;
    if (format == ReportFormat::Json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& name : builtin_scenario_names()) {
            arr.push_back({{"name", name}, {"summary", builtin_scenario_summary(name)}});
        }
        out << nlohmann::json{{"schema", "weakcat/1"}, {"scenarios", std::move(arr)}}.dump(2)
            << "\n";
    } else {
        for (const auto& name : builtin_scenario_names()) {
            out << name << " - " << builtin_scenario_summary(name) << "\n";
        }
    }
    emit(out.str());
    return kExitOk;
}

int run_run(const Options& opt) {
    const ReportFormat format = opt.format();
    const Scenario scenario = resolve_scenario(opt.scenario, opt.interpretation());
    const ScenarioReport report = evaluate_scenario(scenario);
    emit(format_scenario_report(report, format));
    return report.feasible ? kExitOk : kExitDiagnostics;
}

int run_weak(const Options& opt) {
    const ReportFormat format = opt.format();
    const Scenario scenario = resolve_scenario(opt.scenario, opt.interpretation());
    const auto& [name, op] = find_observable(scenario, opt.observable);
    const PrePostEnsemble ensemble = make_ensemble(scenario);
    if (ensemble.orthogonal()) {
        throw CliError{kExitDiagnostics,
                       "post-selection impossible: <post|U|pre> vanishes for scenario '" +
                           scenario.name + "'"};
    }
    ObservableReport entry;
    entry.name = name;
    entry.weak_value = weak_value(op, ensemble).value;
    entry.reversed = weak_value_reversed(op, ensemble);
    emit(format_weak_report(entry, ensemble.postselect_probability(), format));
    return kExitOk;
}

int run_pointer(const Options& opt) {
    const ReportFormat format = opt.format();
    const Scenario scenario = resolve_scenario(opt.scenario, opt.interpretation());
    const auto& [name, op] = find_observable(scenario, opt.observable);
    const PrePostEnsemble ensemble = make_ensemble(scenario);
    const PointerState pointer = gaussian_pointer(opt.sigma);
    const CouplingResult result = couple_and_postselect(op, ensemble, pointer, opt.g);
    emit(format_coupling_report(name, opt.sigma, result, format));
    return ensemble.orthogonal() ? kExitDiagnostics : kExitOk;
}

int run_sweep(const Options& opt) {
    const ReportFormat format = opt.format();
    const Scenario scenario = resolve_scenario(opt.scenario, opt.interpretation());
    const auto& [name, op] = find_observable(scenario, opt.observable);
    const PrePostEnsemble ensemble = make_ensemble(scenario);
    if (ensemble.orthogonal()) {
        throw CliError{kExitDiagnostics,
                       "post-selection impossible: <post|U|pre> vanishes for scenario '" +
                           scenario.name + "'"};
    }
    std::vector<double> couplings;
    couplings.reserve(opt.steps);
    if (opt.steps == 1) {
        couplings.push_back(opt.g_from);
    } else {
        for (std::size_t i = 0; i < opt.steps; ++i) {
            if (i + 1 == opt.steps) {
                couplings.push_back(opt.g_to);  // endpoints land exactly
                break;
            }
            const double t = static_cast<double>(i) / static_cast<double>(opt.steps - 1);
            couplings.push_back(opt.g_from + t * (opt.g_to - opt.g_from));
        }
    }
    const auto rows = weak_limit_report(op, ensemble, opt.sigma, couplings);
    emit(format_sweep_report(name, opt.sigma, rows, format));
    return kExitOk;
}

int run_audit(const Options& opt) {
    const ReportFormat format = opt.format();
    const Scenario scenario = resolve_scenario(opt.scenario, opt.interpretation());
    const auto findings = consistency_audit(scenario);
    emit(format_audit_report(scenario.name, scenario.interpretation, findings, format));
    const bool infeasible =
        !findings.empty() && findings.front().name == "postselect-feasible" &&
        !findings.front().passed;
    return infeasible ? kExitDiagnostics : kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"weak-measurement scenario engine"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* list = app.add_subcommand("list", "list built-in scenarios");
    list->add_option("--format", opt.format_name, "output format: json or text");

    CLI::App* run = app.add_subcommand("run", "evaluate a scenario and report weak values");
    add_scenario_arg(*run, opt);

    CLI::App* weak = app.add_subcommand("weak", "weak value of one observable");
    add_scenario_arg(*weak, opt);
    weak->add_option("--observable", opt.observable, "observable name")->required();

    CLI::App* pointer = app.add_subcommand("pointer", "von Neumann pointer coupling");
    add_scenario_arg(*pointer, opt);
    pointer->add_option("--observable", opt.observable, "observable name")->required();
    pointer->add_option("--g", opt.g, "coupling strength")->required();
    pointer->add_option("--sigma", opt.sigma, "pointer width")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "pointer shifts across coupling strengths");
    add_scenario_arg(*sweep, opt);
    sweep->add_option("--observable", opt.observable, "observable name")->required();
    sweep->add_option("--g-from", opt.g_from, "first coupling strength")->required();
    sweep->add_option("--g-to", opt.g_to, "last coupling strength")->required();
    sweep->add_option("--steps", opt.steps, "number of sweep points (>= 1)")
        ->required()
        ->check(CLI::PositiveNumber);
    sweep->add_option("--sigma", opt.sigma, "pointer width (default 1)");

    CLI::App* audit = app.add_subcommand("audit", "consistency audit of a scenario");
    add_scenario_arg(*audit, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        read_env_seed();  // validated even when the command does not sample
        if (app.got_subcommand(list)) return run_list(opt);
        if (app.got_subcommand(run)) return run_run(opt);
        if (app.got_subcommand(weak)) return run_weak(opt);
        if (app.got_subcommand(pointer)) return run_pointer(opt);
        if (app.got_subcommand(sweep)) return run_sweep(opt);
        if (app.got_subcommand(audit)) return run_audit(opt);
        std::cerr << "error: no subcommand selected\n";
        return kExitUsage;
    } catch (const CliError& e) {
        if (!e.message.empty()) std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDiagnostics;
    }
}

}  // namespace weakcat
