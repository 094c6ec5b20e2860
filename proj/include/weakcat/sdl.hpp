#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weakcat/scenarios.hpp"

namespace weakcat::sdl {

// Exact real number (num/den)*sqrt(root): den > 0, gcd(|num|,den) = 1,
// root squarefree, and num = 0 implies den = 1, root = 1.
struct ExactReal {
    long long num = 0;
    long long den = 1;
    long long root = 1;

    bool operator==(const ExactReal&) const = default;
    double value() const;
    bool is_zero() const { return num == 0; }

    // Normalizes; returns nothing when the value cannot be represented
    // (overflow, zero denominator, negative root).
    static std::optional<ExactReal> make(long long num, long long den, long long root);
};

// Complex scalar in a scenario document. Arithmetic stays in the exact
// rational-times-root representation while it can, silently degrading to a
// double pair otherwise. Equality is structural: an exact value and the
// equal double are distinct coefficients.
class Coeff {
public:
    Coeff() = default;  // exact zero

    static Coeff exact(ExactReal re, ExactReal im = {});
    static Coeff integer(long long n);
    static Coeff approx(std::complex<double> v);

    bool is_exact() const { return exact_; }
    std::complex<double> value() const;
    const ExactReal& exact_re() const { return re_; }
    const ExactReal& exact_im() const { return im_; }
    bool is_zero() const;

    friend Coeff operator+(const Coeff& a, const Coeff& b);
    friend Coeff operator-(const Coeff& a, const Coeff& b);
    friend Coeff operator*(const Coeff& a, const Coeff& b);
    // Pre: !b.is_zero() (the parser rejects division by zero first).
    friend Coeff operator/(const Coeff& a, const Coeff& b);
    Coeff operator-() const;

    bool operator==(const Coeff& other) const;

private:
    bool exact_ = true;
    ExactReal re_{};
    ExactReal im_{};
    std::complex<double> approx_{};
};

struct SourcePos {
    int line = 1;
    int col = 1;
};

struct Diagnostic {
    enum class Severity { Error, Warning };

    Severity severity = Severity::Error;
    std::string message;
    int line = 1;
    int col = 1;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

struct BasisDecl {
    std::string name;
    std::vector<std::string> levels;
    SourcePos pos;

    bool operator==(const BasisDecl& o) const { return name == o.name && levels == o.levels; }
};

struct KetTerm {
    Coeff coeff;
    std::vector<std::string> labels;  // one per declared subsystem, in order
    SourcePos pos;

    bool operator==(const KetTerm& o) const { return coeff == o.coeff && labels == o.labels; }
};

struct StateExpr {
    std::vector<KetTerm> terms;
    SourcePos pos;

    bool operator==(const StateExpr& o) const { return terms == o.terms; }
};

struct CircuitElem {
    enum class Kind { BeamSplitter, Phase, SpinTurner, BField, Analyzer, Detector };

    Kind kind = Kind::BeamSplitter;
    std::vector<std::string> args;  // label/name arguments in written order
    std::optional<Coeff> angle;     // bs, phase, spinturner
    std::string axis;               // spinturner: "x", "y", or "z"
    SourcePos pos;

    bool operator==(const CircuitElem& o) const {
        return kind == o.kind && args == o.args && angle == o.angle && axis == o.axis;
    }
};

struct ObservableFactor {
    enum class Kind { Projector, Sigma };

    Kind kind = Kind::Projector;
    std::string subsystem;  // Projector
    std::string level;      // Projector
    std::string sigma;      // Sigma: "up", "dn", or "z"
    SourcePos pos;

    bool operator==(const ObservableFactor& o) const {
        return kind == o.kind && subsystem == o.subsystem && level == o.level && sigma == o.sigma;
    }
};

struct ObservableDecl {
    std::string name;
    std::vector<ObservableFactor> factors;
    SourcePos pos;

    bool operator==(const ObservableDecl& o) const { return name == o.name && factors == o.factors; }
};

struct ClaimDecl {
    std::string observable;
    Coeff value;
    std::string note;  // trailing comment text, kept as provenance
    SourcePos pos;

    bool operator==(const ClaimDecl& o) const {
        return observable == o.observable && value == o.value && note == o.note;
    }
};

// Parsed scenario document; equality ignores source positions.
struct ScenarioDoc {
    std::string name;  // empty when the file has no name line
    std::vector<BasisDecl> bases;
    std::optional<StateExpr> pre;
    std::optional<StateExpr> post;
    bool has_circuit = false;
    std::vector<CircuitElem> circuit;
    std::vector<ObservableDecl> observables;
    std::vector<ClaimDecl> claims;
    std::string interpretation;  // "", "literal", or "evolved"

    bool operator==(const ScenarioDoc& o) const {
        return name == o.name && bases == o.bases && pre == o.pre && post == o.post &&
               has_circuit == o.has_circuit && circuit == o.circuit && observables == o.observables &&
               claims == o.claims && interpretation == o.interpretation;
    }
};

struct ParseResult {
    std::optional<ScenarioDoc> doc;  // present iff no error-severity diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return doc.has_value(); }
};

// Total on arbitrary input: never throws, never loops; malformed text
// yields positioned diagnostics.
ParseResult parse(std::string_view text);

// Canonical text form; parse(serialize(d)) is structurally equal to d.
// Approximate numeric literals are printed with 17 significant digits.
std::string serialize(const ScenarioDoc& doc);

struct LowerResult {
    std::optional<Scenario> scenario;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return scenario.has_value(); }
};

// Builds the executable Scenario from a document. The optional override
// replaces the document's interpretation flag (used by the CLI).
LowerResult lower(const ScenarioDoc& doc,
                  std::optional<Interpretation> interpretation = std::nullopt);

// parse + lower with merged diagnostics.
LowerResult load(std::string_view text,
                 std::optional<Interpretation> interpretation = std::nullopt);

}  // namespace weakcat::sdl
