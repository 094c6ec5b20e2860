#include <cstdio>
#include <string>

#include "sdl_internal.hpp"

namespace weakcat::sdl {

namespace {

// %.17g round-trips doubles exactly; a forced decimal point keeps the
// token from re-parsing as an exact integer.
std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string out(buf);
    if (out.find_first_of(".eE") == std::string::npos) out += ".0";
    return out;
}

std::string format_exact(const ExactReal& r) {
    std::string out;
    if (r.root == 1) {
        out = std::to_string(r.num);
        if (r.den != 1) out += "/" + std::to_string(r.den);
        return out;
    }
    if (r.num == -1 && r.den == 1) {
        out = "-";
    } else if (r.num != 1 || r.den != 1) {
        out = std::to_string(r.num);
        if (r.den != 1) out += "/" + std::to_string(r.den);
        out += "*";
    }
    return out + "sqrt" + std::to_string(r.root);
}

// Body of a coefficient without enclosing parentheses; re-parses to a
// structurally equal Coeff.
std::string format_coeff(const Coeff& c) {
    if (!c.is_exact()) {
        const auto v = c.value();
        if (v.imag() == 0.0) return format_double(v.real());
        std::string out = format_double(v.real());
        out += v.imag() < 0.0 ? " - " : " + ";
        out += format_double(std::abs(v.imag())) + "*i";
        return out;
    }
    const ExactReal& re = c.exact_re();
    const ExactReal& im = c.exact_im();
    if (im.is_zero()) return format_exact(re);

    const auto imag_body = [](const ExactReal& part) -> std::string {
        if (part.num == 1 && part.den == 1 && part.root == 1) return "i";
        return format_exact(part) + "*i";
    };
    if (re.is_zero()) {
        if (im.num < 0) {
            ExactReal pos = im;
            pos.num = -pos.num;
            return "-" + imag_body(pos);
        }
        return imag_body(im);
    }
    std::string out = format_exact(re);
    if (im.num < 0) {
        ExactReal pos = im;
        pos.num = -pos.num;
        out += " - " + imag_body(pos);
    } else {
        out += " + " + imag_body(im);
    }
    return out;
}

bool is_exact_one(const Coeff& c) {
    return c.is_exact() && c.exact_im().is_zero() && c.exact_re() == ExactReal{1, 1, 1};
}

std::string format_term(const KetTerm& term) {
    std::string out;
    if (!is_exact_one(term.coeff)) {
        out += "(" + format_coeff(term.coeff) + ")";
    }
    out += "|";
    for (std::size_t i = 0; i < term.labels.size(); ++i) {
        if (i) out += ",";
        out += term.labels[i];
    }
    out += ">";
    return out;
}

std::string format_state(const StateExpr& state) {
    std::string out;
    for (std::size_t i = 0; i < state.terms.size(); ++i) {
        if (i) out += " + ";
        out += format_term(state.terms[i]);
    }
    return out;
}

std::string format_elem(const CircuitElem& elem) {
    const auto angle = [&] { return format_coeff(*elem.angle); };
    switch (elem.kind) {
        case CircuitElem::Kind::BeamSplitter:
            return "bs(" + elem.args[0] + ", " + elem.args[1] + ", " + angle() + ")";
        case CircuitElem::Kind::Phase:
            return "phase(" + elem.args[0] + ", " + angle() + ")";
        case CircuitElem::Kind::SpinTurner:
            return "spinturner(" + elem.args[0] + ", " + elem.axis + ", " + angle() + ")";
        case CircuitElem::Kind::BField:
            return "bfield(" + elem.args[0] + " -> " + elem.args[1] + "," + elem.args[2] + ")";
        case CircuitElem::Kind::Analyzer:
            return "analyzer(" + elem.args[0] + ", " + elem.args[1] + ")";
        case CircuitElem::Kind::Detector:
            return "detector(" + elem.args[0] + ", " + elem.args[1] + ")";
    }
    return {};
}

std::string format_factor(const ObservableFactor& factor) {
    if (factor.kind == ObservableFactor::Kind::Projector) {
        return "proj(" + factor.subsystem + "=" + factor.level + ")";
    }
    return "sigma(" + factor.sigma + ")";
}

}  // namespace

std::string serialize(const ScenarioDoc& doc) {
    std::string out;
    if (!doc.name.empty()) out += "name = " + doc.name + "\n";
    for (const auto& decl : doc.bases) {
        out += "basis " + decl.name + " =";
        for (const auto& lvl : decl.levels) out += " " + lvl;
        out += "\n";
    }
    if (doc.pre) out += "state pre = " + format_state(*doc.pre) + "\n";
    if (doc.post) out += "state post = " + format_state(*doc.post) + "\n";
    if (doc.has_circuit) {
        out += "circuit =";
        for (std::size_t i = 0; i < doc.circuit.size(); ++i) {
            out += i ? "; " : " ";
            out += format_elem(doc.circuit[i]);
        }
        out += "\n";
    }
    for (const auto& decl : doc.observables) {
        out += "observe " + decl.name + " = ";
        for (std::size_t i = 0; i < decl.factors.size(); ++i) {
            if (i) out += " * ";
            out += format_factor(decl.factors[i]);
        }
        out += "\n";
    }
    for (const auto& claim : doc.claims) {
        out += "claim " + claim.observable + " = " + format_coeff(claim.value);
        if (!claim.note.empty()) out += "  # " + claim.note;
        out += "\n";
    }
    if (!doc.interpretation.empty()) out += "interpretation = " + doc.interpretation + "\n";
    return out;
}

}  // namespace weakcat::sdl
