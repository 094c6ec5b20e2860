#include "weakcat/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "weakcat/sdl.hpp"

namespace weakcat {

namespace {

// Built-ins are defined by their scenario-language sources; the same text
// ships as scenarios/<name>.sdl next to the binary. Lowering these is
// exercised directly by the test suite, so the two surfaces cannot drift
// apart.
const std::map<std::string, std::string>& builtin_sources() {
    static const std::map<std::string, std::string> sources = {
        {"helicity-sign",
         "# Circularly polarized electron: arm 1 keeps the L_p component, arm 2 feeds\n"
         "# the field region, which sorts spin onto arms 3 (up) and 4 (down).\n"
         "name = helicity-sign\n"
         "basis path = 1 2 3 4 5\n"
         "basis prop = L_p L_-p s_up s_dn\n"
         "state pre = (1/2*sqrt2)|1,L_p> + (1/2)|2,s_up> + (1/2)|2,s_dn>\n"
         "state post = (1/2*sqrt2)|1,L_p> + (1/2*sqrt2)|3,s_up>\n"
         "circuit = bfield(2 -> 3,4)\n"
         "observe P1 = proj(path=1)\n"
         "observe P2 = proj(path=2)\n"
         "observe P3 = proj(path=3)\n"
         "claim P3 = 1  # Eq. 8\n"
         "interpretation = literal\n"},
        {"helicity-preserving",
         "# Momentum-reversed arm 5 against a spin branch: the turner flips the spin\n"
         "# on arm 3 and the field region routes the flipped component onto arm 4.\n"
         "name = helicity-preserving\n"
         "basis path = 1 2 3 4 5\n"
         "basis prop = L_p L_-p s_up s_dn\n"
         "state pre = (1/2*sqrt2)|5,L_-p> + (1/2*sqrt2)|3,s_up>\n"
         "state post = (1/2*sqrt2)|5,L_-p> + (1/2*sqrt2)|4,s_dn>\n"
         "circuit = spinturner(3, y, pi); bfield(3 -> 3,4)\n"
         "observe P4 = proj(path=4)\n"
         "observe S4dn = proj(path=4) * sigma(dn)\n"
         "claim P4 = 1  # Eq. 11\n"
         "interpretation = literal\n"},
        {"helicity-reversing",
         "# Momentum-reversed arm 5 against a spin branch that keeps its spin: the\n"
         "# field region relabels arm 3 as arm 4 without touching the spin.\n"
         "name = helicity-reversing\n"
         "basis path = 1 2 3 4 5\n"
         "basis prop = L_p L_-p s_up s_dn\n"
         "state pre = (1/2*sqrt2)|5,L_p> + (1/2*sqrt2)|3,s_up>\n"
         "state post = (1/2*sqrt2)|5,L_-p> + (1/2*sqrt2)|4,s_up>\n"
         "circuit = bfield(3 -> 4,3)\n"
         "observe P4 = proj(path=4)\n"
         "claim P4 = 1  # Eq. 14\n"
         "interpretation = literal\n"},
        {"cheshire-cat",
         "# Canonical Cheshire cat, written in the sigma_z eigenbasis: the particle's\n"
         "# weak trace sits in arm L while its polarization registers in arm R.\n"
         "name = cheshire-cat\n"
         "basis path = L R\n"
         "basis pol = s_up s_dn\n"
         "state pre = (1/2*i)|L,s_up> + (1/2*i)|L,s_dn> + (1/2)|R,s_up> + (1/2)|R,s_dn>\n"
         "state post = (1/2)|L,s_up> + (1/2)|L,s_dn> + (-1/2*i)|R,s_up> + (1/2*i)|R,s_dn>\n"
         "observe PiL = proj(path=L)\n"
         "observe PiR = proj(path=R)\n"
         "observe SzPiL = sigma(z) * proj(path=L)\n"
         "observe SzPiR = sigma(z) * proj(path=R)\n"
         "interpretation = literal\n"},
    };
    return sources;
}

const std::map<std::string, std::string>& builtin_summaries() {
    static const std::map<std::string, std::string> summaries = {
        {"helicity-sign", "weak value at arm 3 reads off the helicity sign of a circularly polarized electron"},
        {"helicity-preserving", "momentum-reversing branch with a spin flip, probed at arm 4"},
        {"helicity-reversing", "momentum-reversing branch with the spin kept, probed at arm 4"},
        {"cheshire-cat", "particle found in arm L while its polarization shows up in arm R"},
    };
    return summaries;
}

std::string format_amplitude(const Amplitude& v) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", v.real(), v.imag());
    return buf;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

PrePostEnsemble scenario_ensemble(const Scenario& s) {
    std::optional<LinearOperator> evolution;
    if (s.interpretation == Interpretation::Evolved && s.evolution) {
        evolution = circuit_unitary(*s.evolution);
    }
    return PrePostEnsemble(s.pre, s.post, std::move(evolution));
}

}  // namespace

Helicity helicity_sign(const std::array<double, 3>& spin_axis,
                       const std::array<double, 3>& momentum_axis) {
    const auto norm = [](const std::array<double, 3>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    const double ns = norm(spin_axis);
    const double np = norm(momentum_axis);
    if (ns <= 0.0 || np <= 0.0) {
        throw std::invalid_argument("helicity needs nonzero spin and momentum vectors");
    }
    const double dot = spin_axis[0] * momentum_axis[0] + spin_axis[1] * momentum_axis[1] +
                       spin_axis[2] * momentum_axis[2];
    if (std::abs(dot) <= 1e-12 * ns * np) {
        throw std::invalid_argument("helicity undefined for transverse spin");
    }
    return Helicity{dot > 0.0 ? +1 : -1};
}

const char* interpretation_name(Interpretation i) {
    return i == Interpretation::Literal ? "literal" : "evolved";
}

std::optional<Interpretation> parse_interpretation(std::string_view text) {
    if (text == "literal") return Interpretation::Literal;
    if (text == "evolved") return Interpretation::Evolved;
    return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() {
    return {"helicity-sign", "helicity-preserving", "helicity-reversing", "cheshire-cat"};
}

std::string builtin_scenario_summary(const std::string& name) {
    const auto& summaries = builtin_summaries();
    const auto it = summaries.find(name);
    return it == summaries.end() ? std::string{} : it->second;
}

const std::string& builtin_scenario_text(const std::string& name) {
    const auto& sources = builtin_sources();
    const auto it = sources.find(name);
    if (it == sources.end()) {
        throw std::invalid_argument("unknown built-in scenario '" + name + "'");
    }
    return it->second;
}

std::optional<Scenario> builtin_scenario(const std::string& name, Interpretation interpretation) {
    const auto& sources = builtin_sources();
    const auto it = sources.find(name);
    if (it == sources.end()) return std::nullopt;

    sdl::LowerResult lowered = sdl::load(it->second, interpretation);
    if (!lowered.ok()) {
        throw std::logic_error("built-in scenario '" + name + "' failed to lower: " +
                               (lowered.diagnostics.empty() ? "no diagnostics"
                                                            : lowered.diagnostics.front().message));
    }
    lowered.scenario->summary = builtin_scenario_summary(name);
    return std::move(lowered.scenario);
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> out;
    for (const auto& name : builtin_scenario_names()) {
        out.push_back(*builtin_scenario(name, Interpretation::Literal));
        out.push_back(*builtin_scenario(name, Interpretation::Evolved));
    }
    return out;
}

ScenarioReport evaluate_scenario(const Scenario& s) {
    ScenarioReport report;
    report.scenario = s.name;
    report.interpretation = s.interpretation;

    const PrePostEnsemble ensemble = scenario_ensemble(s);
    report.feasible = !ensemble.orthogonal();
    report.postselect_prob = ensemble.postselect_probability();
    report.audit = consistency_audit(s);

    if (!report.feasible) {
        report.postselect_prob = 0.0;
        report.notes.push_back("post-selection impossible: <post|U|pre> vanishes under the " +
                               std::string(interpretation_name(s.interpretation)) +
                               " interpretation; weak values are undefined");
        return report;
    }

    for (const auto& [name, op] : s.observables) {
        ObservableReport entry;
        entry.name = name;
        entry.weak_value = weak_value(op, ensemble).value;
        entry.reversed = weak_value_reversed(op, ensemble);
        for (const auto& claim : s.claims) {
            if (claim.observable != name) continue;
            entry.claimed = claim.value;
            entry.claim_ref = claim.reference;
            entry.deviation = std::abs(entry.weak_value - claim.value);
        }
        report.observables.push_back(std::move(entry));
    }

    // The source experiment's decision rule: the arm-3 weak value tells the
    // helicity sign through detector D1.
    for (const auto& entry : report.observables) {
        if (entry.name != "P3") continue;
        if (std::abs(entry.weak_value) <= 1e-12) {
            report.notes.push_back(
                "helicity negative: the weak value at arm 3 vanishes, detector D1 never clicks");
        } else if (std::abs(entry.weak_value - 1.0) <= 1e-12) {
            report.notes.push_back(
                "helicity positive: the weak value at arm 3 is 1, detector D1 clicks with certainty");
        }
    }
    return report;
}

std::vector<AuditFinding> consistency_audit(const Scenario& s) {
    std::vector<AuditFinding> findings;
    const PrePostEnsemble ensemble = scenario_ensemble(s);

    if (ensemble.orthogonal()) {
        findings.push_back({"postselect-feasible", false,
                            "post-selection impossible: |<post|U|pre>| < 1e-12, no values to audit"});
        return findings;
    }
    findings.push_back({"postselect-feasible", true,
                        "|<post|U|pre>|^2 = " + format_real(ensemble.postselect_probability())});

    if (const auto psys = s.basis->subsystem_index("path")) {
        Amplitude sum = 0.0;
        for (const auto& level : s.basis->subsystem(*psys).levels) {
            sum += weak_value(level_projector(s.basis, "path", level), ensemble).value;
        }
        const bool passed = std::abs(sum - 1.0) <= 1e-10;
        findings.push_back({"path-projector-completeness", passed,
                            "sum of path-projector weak values = " + format_amplitude(sum)});
    }

    // The never-clicking branch: any amplitude the post state might hold at
    // |2, L_p> must be exactly zero, not merely small.
    if (s.basis->subsystem_count() == 2) {
        const auto psys = s.basis->subsystem_index("path");
        if (psys && s.basis->find_level(*psys, "2")) {
            const std::size_t other = 1 - *psys;
            if (s.basis->find_level(other, "L_p")) {
                std::vector<std::string> labels(2);
                labels[*psys] = "2";
                labels[other] = "L_p";
                const Amplitude v = inner(basis_ket(s.basis, labels), s.post);
                const bool passed = v.real() == 0.0 && v.imag() == 0.0;
                findings.push_back({"arm-2-orthogonality", passed,
                                    "inner(|2,L_p>, post) = " + format_amplitude(v) +
                                        (passed ? ", exactly zero" : ", expected exact zero")});
            }
        }
    }
    return findings;
}

}  // namespace weakcat
