#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakcat/optics.hpp"
#include "weakcat/weak_value.hpp"

namespace weakcat {

// Sign of the projection of spin onto momentum.
struct Helicity {
    int sign = +1;  // +1 or -1
};

// Throws when the two axes are not collinear (transverse spin has no
// helicity) or either vector vanishes.
Helicity helicity_sign(const std::array<double, 3>& spin_axis,
                       const std::array<double, 3>& momentum_axis);

// How a scenario's circuit relates to its printed states: `Literal` takes
// pre/post exactly as written (the circuit is ignored), `Evolved` applies
// the circuit's unitary between pre-selection and the measurement plane.
enum class Interpretation { Literal, Evolved };

const char* interpretation_name(Interpretation i);
std::optional<Interpretation> parse_interpretation(std::string_view text);

// A reference value quoted by the source scenario, kept strictly as
// metadata: claims never feed any computation.
struct Claim {
    std::string observable;
    Amplitude value{};
    std::string reference;  // free-form provenance note, e.g. an equation number
};

struct Scenario {
    std::string name;
    std::string summary;
    BasisPtr basis;
    StateVector pre;   // unit-normalized
    StateVector post;  // unit-normalized
    std::optional<Circuit> evolution;
    std::vector<std::pair<std::string, LinearOperator>> observables;
    std::vector<Claim> claims;
    Interpretation interpretation = Interpretation::Literal;
};

struct ObservableReport {
    std::string name;
    Amplitude weak_value{};  // <post|A U|pre> / <post|U|pre>
    Amplitude reversed{};    // same quantity through the reversed bra/ket order
    std::optional<Amplitude> claimed;
    std::string claim_ref;
    std::optional<double> deviation;  // |weak_value - claimed|
};

struct AuditFinding {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ScenarioReport {
    std::string scenario;
    Interpretation interpretation = Interpretation::Literal;
    bool feasible = false;
    double postselect_prob = 0.0;
    std::vector<ObservableReport> observables;
    std::vector<AuditFinding> audit;
    std::vector<std::string> notes;
};

// The four built-in scenario names, in listing order.
std::vector<std::string> builtin_scenario_names();

// One-line description shown by `list`.
std::string builtin_scenario_summary(const std::string& name);

// The scenario-language source text a built-in is defined by; identical to
// the .sdl file shipped alongside the binary. Throws on unknown names.
const std::string& builtin_scenario_text(const std::string& name);

// A built-in under the requested interpretation. Returns nothing for
// unknown names.
std::optional<Scenario> builtin_scenario(const std::string& name, Interpretation interpretation);

// All built-ins, each in both interpretations (literal first).
std::vector<Scenario> builtin_scenarios();

// Weak values for every observable plus claim deviations and audit
// findings. An orthogonal ensemble yields feasible = false with empty
// observables rather than an error.
ScenarioReport evaluate_scenario(const Scenario& s);

// Claim-independent sanity checks: post-selection feasibility, the
// path-projector completeness sum, and exact orthogonality of the
// never-clicking arm-2 branch where the basis has one.
std::vector<AuditFinding> consistency_audit(const Scenario& s);

}  // namespace weakcat
