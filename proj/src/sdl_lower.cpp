#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sdl_internal.hpp"
#include "weakcat/optics.hpp"

namespace weakcat::sdl {

namespace {

struct LowerError {
    std::string message;
    SourcePos pos;
};

std::string format_norm(double n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", n);
    return buf;
}

StateVector build_state(const BasisPtr& basis, const StateExpr& expr, const char* which,
                        std::vector<Diagnostic>& diagnostics) {
    std::vector<std::pair<Amplitude, StateVector>> terms;
    terms.reserve(expr.terms.size());
    for (const auto& term : expr.terms) {
        try {
            terms.emplace_back(term.coeff.value(), basis_ket(basis, term.labels));
        } catch (const std::exception& e) {
            throw LowerError{e.what(), term.pos};
        }
    }
    StateVector sum = superpose(terms);
    const double norm = sum.norm();
    if (norm <= 1e-14) {
        throw LowerError{std::string("state ") + which + " sums to the null vector", expr.pos};
    }
    if (std::abs(norm - 1.0) > 1e-6) {
        diagnostics.push_back({Diagnostic::Severity::Warning,
                               std::string("state ") + which + " renormalized (norm was " +
                                   format_norm(norm) + ")",
                               expr.pos.line, expr.pos.col});
    }
    return normalize(sum);
}

double real_angle(const CircuitElem& elem) {
    return elem.angle ? elem.angle->value().real() : 0.0;
}

Component to_component(const CircuitElem& elem) {
    switch (elem.kind) {
        case CircuitElem::Kind::BeamSplitter:
            return BeamSplitter{elem.args[0], elem.args[1], real_angle(elem)};
        case CircuitElem::Kind::Phase:
            return PhaseShifter{elem.args[0], real_angle(elem)};
        case CircuitElem::Kind::SpinTurner: {
            const SpinAxis axis = elem.axis == "x"   ? SpinAxis::X
                                  : elem.axis == "y" ? SpinAxis::Y
                                                     : SpinAxis::Z;
            return SpinTurner{elem.args[0], axis, real_angle(elem)};
        }
        case CircuitElem::Kind::BField:
            return MagneticField{elem.args[0], elem.args[1], elem.args[2]};
        case CircuitElem::Kind::Analyzer:
            return Analyzer{elem.args[0], elem.args[1]};
        case CircuitElem::Kind::Detector:
            return Detector{elem.args[0], elem.args[1]};
    }
    throw std::logic_error("unhandled circuit element kind");
}

LinearOperator build_observable(const BasisPtr& basis, const ObservableDecl& decl) {
    LinearOperator op = LinearOperator::identity(basis);
    for (const auto& factor : decl.factors) {
        try {
            if (factor.kind == ObservableFactor::Kind::Projector) {
                op = op * level_projector(basis, factor.subsystem, factor.level);
            } else {
                op = op * sigma_operator(basis, factor.sigma);
            }
        } catch (const std::exception& e) {
            throw LowerError{e.what(), factor.pos};
        }
    }
    if (!op.is_hermitian()) {
        throw LowerError{"observable '" + decl.name + "' is not Hermitian", decl.pos};
    }
    op.set_name(decl.name);
    return op;
}

}  // namespace

LowerResult lower(const ScenarioDoc& doc, std::optional<Interpretation> interpretation) {
    LowerResult result;
    validate_document(doc, result.diagnostics);
    if (has_errors(result.diagnostics)) return result;

    const auto error = [&](std::string message, SourcePos pos) {
        result.diagnostics.push_back({Diagnostic::Severity::Error, std::move(message), pos.line, pos.col});
    };

    try {
        if (doc.bases.empty()) {
            throw LowerError{"basis not declared", {1, 1}};
        }
        if (!doc.pre) throw LowerError{"state pre not declared", {1, 1}};
        if (!doc.post) throw LowerError{"state post not declared", {1, 1}};

        std::vector<Subsystem> subsystems;
        subsystems.reserve(doc.bases.size());
        for (const auto& decl : doc.bases) {
            subsystems.push_back({decl.name, decl.levels});
        }
        BasisPtr basis;
        try {
            basis = make_basis(std::move(subsystems));
        } catch (const std::exception& e) {
            throw LowerError{e.what(), doc.bases.front().pos};
        }

        StateVector pre = build_state(basis, *doc.pre, "pre", result.diagnostics);
        StateVector post = build_state(basis, *doc.post, "post", result.diagnostics);

        std::optional<Circuit> evolution;
        if (doc.has_circuit && !doc.circuit.empty()) {
            std::vector<Component> components;
            components.reserve(doc.circuit.size());
            for (const auto& elem : doc.circuit) {
                const Component component = to_component(elem);
                try {
                    const LinearOperator op = component_operator(component, basis);
                    if (!std::holds_alternative<Detector>(component) && !op.is_unitary(1e-10)) {
                        throw std::invalid_argument("circuit evolution is not unitary: component '" +
                                                    component_kind(component) + "' is projective");
                    }
                } catch (const std::exception& e) {
                    throw LowerError{e.what(), elem.pos};
                }
                components.push_back(component);
            }
            try {
                evolution = make_circuit(basis, std::move(components));
            } catch (const std::exception& e) {
                throw LowerError{e.what(), doc.circuit.front().pos};
            }
        }

        std::vector<std::pair<std::string, LinearOperator>> observables;
        observables.reserve(doc.observables.size());
        for (const auto& decl : doc.observables) {
            observables.emplace_back(decl.name, build_observable(basis, decl));
        }

        std::vector<Claim> claims;
        claims.reserve(doc.claims.size());
        for (const auto& claim : doc.claims) {
            claims.push_back({claim.observable, claim.value.value(), claim.note});
        }

        Interpretation interp = Interpretation::Literal;
        if (interpretation) {
            interp = *interpretation;
        } else if (!doc.interpretation.empty()) {
            interp = *parse_interpretation(doc.interpretation);
        }

        result.scenario = Scenario{doc.name,   "",     basis,  pre,    post,
                                   evolution,  observables, claims, interp};
    } catch (const LowerError& e) {
        error(e.message, e.pos);
        result.scenario.reset();
    }
    return result;
}

LowerResult load(std::string_view text, std::optional<Interpretation> interpretation) {
    ParseResult parsed = parse(text);
    if (!parsed.ok()) {
        return LowerResult{std::nullopt, std::move(parsed.diagnostics)};
    }
    LowerResult lowered = lower(*parsed.doc, interpretation);
    // Keep parse warnings ahead of lowering diagnostics.
    std::vector<Diagnostic> merged = std::move(parsed.diagnostics);
    merged.insert(merged.end(), lowered.diagnostics.begin(), lowered.diagnostics.end());
    lowered.diagnostics = std::move(merged);
    return lowered;
}

}  // namespace weakcat::sdl
