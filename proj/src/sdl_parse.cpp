#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "sdl_internal.hpp"

namespace weakcat::sdl {

namespace {

constexpr int kMaxExprDepth = 64;

// Thrown while parsing one line; the dispatcher turns it into a Diagnostic
// and moves on to the next line, so the parser is total.
struct LineError {
    std::string message;
    int col;
};

bool ident_start(char c) {
    return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool ident_char(char c) {
    return c == '_' || std::isalnum(static_cast<unsigned char>(c));
}

bool digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c));
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

class Scanner {
public:
    Scanner(std::string_view code, int line) : code_(code), line_(line) {}

    int line() const { return line_; }
    int col() {
        skip_ws();
        return static_cast<int>(pos_) + 1;
    }

    void skip_ws() {
        while (pos_ < code_.size() && std::isspace(static_cast<unsigned char>(code_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= code_.size();
    }

    char peek() {
        skip_ws();
        return pos_ < code_.size() ? code_[pos_] : '\0';
    }

    char peek_at(std::size_t offset) const {
        return pos_ + offset < code_.size() ? code_[pos_ + offset] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* context) {
        if (!consume(c)) {
            fail(std::string("expected '") + c + "' " + context);
        }
    }

    [[noreturn]] void fail(std::string message) {
        throw LineError{std::move(message), col()};
    }

    // [A-Za-z_][A-Za-z0-9_]*
    std::string ident(const char* what) {
        skip_ws();
        if (pos_ >= code_.size() || !ident_start(code_[pos_])) {
            fail(std::string("expected ") + what);
        }
        const std::size_t begin = pos_;
        while (pos_ < code_.size() && ident_char(code_[pos_])) ++pos_;
        return std::string(code_.substr(begin, pos_ - begin));
    }

    // Non-empty run of characters up to whitespace or any stop character.
    std::string raw_token(std::string_view stops, const char* what) {
        skip_ws();
        const std::size_t begin = pos_;
        while (pos_ < code_.size()) {
            const char c = code_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || stops.find(c) != std::string_view::npos) break;
            ++pos_;
        }
        if (pos_ == begin) fail(std::string("expected ") + what);
        return std::string(code_.substr(begin, pos_ - begin));
    }

    // Everything left on the line, trimmed.
    std::string rest() {
        skip_ws();
        std::string out(trim(code_.substr(pos_)));
        pos_ = code_.size();
        return out;
    }

    void expect_end() {
        if (!at_end()) fail("unexpected trailing text");
    }

    SourcePos pos() {
        return SourcePos{line_, col()};
    }

    // --- numeric and coefficient expressions ---

    bool at_number() {
        skip_ws();
        if (pos_ >= code_.size()) return false;
        const char c = code_[pos_];
        return digit(c) || (c == '.' && pos_ + 1 < code_.size() && digit(code_[pos_ + 1]));
    }

    Coeff number_literal() {
        skip_ws();
        const std::size_t begin = pos_;
        while (pos_ < code_.size() && digit(code_[pos_])) ++pos_;
        bool integral = true;
        if (pos_ < code_.size() && code_[pos_] == '.') {
            integral = false;
            ++pos_;
            while (pos_ < code_.size() && digit(code_[pos_])) ++pos_;
        }
        if (pos_ < code_.size() && (code_[pos_] == 'e' || code_[pos_] == 'E')) {
            // Exponent only counts when digits follow; otherwise 'e' could
            // start an identifier such as a stray unit suffix.
            std::size_t look = pos_ + 1;
            if (look < code_.size() && (code_[look] == '+' || code_[look] == '-')) ++look;
            if (look < code_.size() && digit(code_[look])) {
                integral = false;
                pos_ = look;
                while (pos_ < code_.size() && digit(code_[pos_])) ++pos_;
            }
        }
        const std::string_view text = code_.substr(begin, pos_ - begin);

        Coeff out;
        if (integral && text.size() <= 18) {
            long long v = 0;
            std::from_chars(text.data(), text.data() + text.size(), v);
            out = Coeff::integer(v);
        } else {
            double v = 0.0;
            const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
            if (r.ec != std::errc() || !std::isfinite(v)) {
                throw LineError{"numeric literal out of range", static_cast<int>(begin) + 1};
            }
            out = Coeff::approx(v);
        }
        // Postfix imaginary unit: 2i, 0.5i
        if (pos_ < code_.size() && code_[pos_] == 'i' && !ident_char(peek_at(1))) {
            ++pos_;
            out = out * Coeff::exact({}, ExactReal{1, 1, 1});
        }
        return out;
    }

    Coeff expression(int depth = 0) {
        Coeff v = expr_term(depth);
        while (true) {
            if (consume('+')) {
                v = check(v + expr_term(depth));
            } else if (consume('-')) {
                v = check(v - expr_term(depth));
            } else {
                return v;
            }
        }
    }

private:
    Coeff check(Coeff v) {
        if (!coeff_finite(v)) fail("coefficient overflows double precision");
        return v;
    }

    Coeff expr_term(int depth) {
        Coeff v = expr_factor(depth);
        while (true) {
            if (consume('*')) {
                v = check(v * expr_factor(depth));
            } else if (consume('/')) {
                const int at = col();
                const Coeff d = expr_factor(depth);
                if (d.is_zero()) throw LineError{"division by zero", at};
                v = check(v / d);
            } else {
                return v;
            }
        }
    }

    Coeff expr_factor(int depth) {
        if (depth > kMaxExprDepth) fail("expression nested too deeply");
        if (consume('-')) return check(-expr_factor(depth + 1));
        if (consume('+')) return expr_factor(depth + 1);
        return expr_atom(depth);
    }

    Coeff expr_atom(int depth) {
        if (depth > kMaxExprDepth) fail("expression nested too deeply");
        if (consume('(')) {
            Coeff v = expression(depth + 1);
            expect(')', "to close the expression");
            return v;
        }
        if (at_number()) return number_literal();
        if (ident_start(peek())) {
            const int at = col();
            const std::string word = ident("a coefficient");
            if (word == "i") return Coeff::exact({}, ExactReal{1, 1, 1});
            if (word == "pi") return Coeff::approx(std::numbers::pi);
            if (word == "sqrt") {
                expect('(', "after sqrt");
                const int arg_at = col();
                const Coeff arg = expression(depth + 1);
                expect(')', "to close sqrt");
                return sqrt_of(arg, arg_at);
            }
            if (word.size() > 4 && word.starts_with("sqrt")) {
                long long n = 0;
                const char* b = word.data() + 4;
                const char* e = word.data() + word.size();
                const auto r = std::from_chars(b, e, n);
                if (r.ec == std::errc() && r.ptr == e) {
                    if (const auto er = ExactReal::make(1, 1, n)) return Coeff::exact(*er);
                    return Coeff::approx(std::sqrt(static_cast<double>(n)));
                }
            }
            throw LineError{"unknown symbol '" + word + "' in expression", at};
        }
        fail("expected a number, i, pi, sqrt, or a parenthesized expression");
    }

    Coeff sqrt_of(const Coeff& arg, int at) {
        const std::complex<double> v = arg.value();
        if (v.imag() != 0.0) throw LineError{"sqrt of a complex value", at};
        if (v.real() < 0.0) throw LineError{"sqrt of a negative value", at};
        if (arg.is_exact() && arg.exact_im().is_zero() && arg.exact_re().root == 1) {
            // sqrt(p/q) = sqrt(p*q)/q
            const auto& r = arg.exact_re();
            const __int128 wide = static_cast<__int128>(r.num) * r.den;
            if (wide >= 0 && wide <= 1'000'000) {
                if (const auto er = ExactReal::make(1, r.den, static_cast<long long>(wide))) {
                    return Coeff::exact(*er);
                }
            }
        }
        return Coeff::approx(std::sqrt(v.real()));
    }

    std::string_view code_;
    std::size_t pos_ = 0;
    int line_;
};

KetTerm parse_ket_term(Scanner& s, bool negated) {
    KetTerm term;
    term.pos = s.pos();
    term.coeff = Coeff::integer(1);

    if (s.peek() == '(') {
        s.consume('(');
        term.coeff = s.expression();
        s.expect(')', "to close the coefficient");
        s.consume('*');
    } else if (s.at_number()) {
        term.coeff = s.number_literal();
        s.consume('*');
    } else if (s.peek() == 'i' && !ident_char(s.peek_at(1))) {
        s.consume('i');
        term.coeff = Coeff::exact({}, ExactReal{1, 1, 1});
        s.consume('*');
    }

    s.expect('|', "to open a ket");
    term.labels.push_back(s.raw_token(",>|", "a level label"));
    while (s.consume(',')) {
        term.labels.push_back(s.raw_token(",>|", "a level label"));
    }
    s.expect('>', "to close the ket");

    if (negated) term.coeff = -term.coeff;
    return term;
}

StateExpr parse_state_expr(Scanner& s) {
    StateExpr expr;
    expr.pos = s.pos();
    bool negated = s.consume('-');
    if (!negated) s.consume('+');
    expr.terms.push_back(parse_ket_term(s, negated));
    while (true) {
        if (s.consume('+')) {
            negated = false;
        } else if (s.consume('-')) {
            negated = true;
        } else {
            break;
        }
        expr.terms.push_back(parse_ket_term(s, negated));
    }
    s.expect_end();
    return expr;
}

Coeff parse_real_angle(Scanner& s) {
    const int at = s.col();
    const Coeff angle = s.expression();
    const std::complex<double> v = angle.value();
    if (v.imag() != 0.0) throw LineError{"angle must be real", at};
    return angle;
}

CircuitElem parse_circuit_elem(Scanner& s) {
    CircuitElem elem;
    elem.pos = s.pos();
    const int kind_at = s.col();
    const std::string kind = s.ident("a circuit element");

    if (kind == "bs") {
        elem.kind = CircuitElem::Kind::BeamSplitter;
        s.expect('(', "after bs");
        elem.args.push_back(s.raw_token(",)", "an arm label"));
        s.expect(',', "between the beam splitter arms");
        elem.args.push_back(s.raw_token(",)", "an arm label"));
        s.expect(',', "before the mixing angle");
        elem.angle = parse_real_angle(s);
        s.expect(')', "to close bs");
    } else if (kind == "phase") {
        elem.kind = CircuitElem::Kind::Phase;
        s.expect('(', "after phase");
        elem.args.push_back(s.raw_token(",)", "an arm label"));
        s.expect(',', "before the phase angle");
        elem.angle = parse_real_angle(s);
        s.expect(')', "to close phase");
    } else if (kind == "spinturner") {
        elem.kind = CircuitElem::Kind::SpinTurner;
        s.expect('(', "after spinturner");
        elem.args.push_back(s.raw_token(",)", "an arm label"));
        s.expect(',', "before the rotation axis");
        const int axis_at = s.col();
        elem.axis = s.ident("a rotation axis");
        if (elem.axis != "x" && elem.axis != "y" && elem.axis != "z") {
            throw LineError{"rotation axis must be x, y, or z", axis_at};
        }
        s.expect(',', "before the rotation angle");
        elem.angle = parse_real_angle(s);
        s.expect(')', "to close spinturner");
    } else if (kind == "bfield") {
        elem.kind = CircuitElem::Kind::BField;
        s.expect('(', "after bfield");
        elem.args.push_back(s.raw_token(",)-", "the input arm"));
        s.expect('-', "in the -> routing arrow");
        s.expect('>', "in the -> routing arrow");
        elem.args.push_back(s.raw_token(",)", "the spin-up output arm"));
        s.expect(',', "between the output arms");
        elem.args.push_back(s.raw_token(",)", "the spin-down output arm"));
        s.expect(')', "to close bfield");
    } else if (kind == "analyzer") {
        elem.kind = CircuitElem::Kind::Analyzer;
        s.expect('(', "after analyzer");
        elem.args.push_back(s.raw_token(",)", "an arm label"));
        s.expect(',', "before the analyzer level");
        elem.args.push_back(s.raw_token(",)", "a level label"));
        s.expect(')', "to close analyzer");
    } else if (kind == "detector") {
        elem.kind = CircuitElem::Kind::Detector;
        s.expect('(', "after detector");
        elem.args.push_back(s.raw_token(",)", "a detector name"));
        s.expect(',', "before the detector arm");
        elem.args.push_back(s.raw_token(",)", "an arm label"));
        s.expect(')', "to close detector");
    } else {
        throw LineError{"unknown circuit element '" + kind + "'", kind_at};
    }
    return elem;
}

ObservableFactor parse_observable_factor(Scanner& s) {
    ObservableFactor factor;
    factor.pos = s.pos();
    const int at = s.col();
    const std::string kind = s.ident("an observable factor");
    if (kind == "proj") {
        factor.kind = ObservableFactor::Kind::Projector;
        s.expect('(', "after proj");
        factor.subsystem = s.ident("a subsystem name");
        s.expect('=', "between subsystem and level");
        factor.level = s.raw_token(")=", "a level label");
        s.expect(')', "to close proj");
    } else if (kind == "sigma") {
        factor.kind = ObservableFactor::Kind::Sigma;
        s.expect('(', "after sigma");
        const int tok_at = s.col();
        factor.sigma = s.ident("up, dn, or z");
        if (factor.sigma != "up" && factor.sigma != "dn" && factor.sigma != "z") {
            throw LineError{"sigma takes up, dn, or z", tok_at};
        }
        s.expect(')', "to close sigma");
    } else {
        throw LineError{"unknown observable factor '" + kind + "'", at};
    }
    return factor;
}

struct LineView {
    std::string_view code;     // before any '#'
    std::string_view comment;  // after '#', untrimmed
    int number = 1;
};

std::vector<LineView> split_lines(std::string_view text) {
    std::vector<LineView> lines;
    int number = 1;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        LineView view;
        view.number = number;
        const std::size_t hash = line.find('#');
        if (hash == std::string_view::npos) {
            view.code = line;
        } else {
            view.code = line.substr(0, hash);
            view.comment = line.substr(hash + 1);
        }
        lines.push_back(view);

        if (end == text.size()) break;
        begin = end + 1;
        ++number;
    }
    return lines;
}

}  // namespace

ParseResult parse(std::string_view text) {
    ScenarioDoc doc;
    std::vector<Diagnostic> diagnostics;

    const auto error = [&](std::string message, int line, int col) {
        diagnostics.push_back({Diagnostic::Severity::Error, std::move(message), line, col});
    };

    bool saw_name = false, saw_interpretation = false;
    for (const LineView& line : split_lines(text)) {
        if (trim(line.code).empty()) continue;
        Scanner s(line.code, line.number);
        try {
            const int kw_at = s.col();
            const std::string keyword = s.ident("a declaration keyword");
            if (keyword == "name") {
                s.expect('=', "after name");
                if (saw_name) throw LineError{"duplicate name line", kw_at};
                saw_name = true;
                doc.name = s.rest();
                if (doc.name.empty()) throw LineError{"expected a scenario name", kw_at};
            } else if (keyword == "basis") {
                BasisDecl decl;
                decl.pos = {line.number, kw_at};
                decl.name = s.ident("a subsystem name");
                s.expect('=', "after the subsystem name");
                decl.levels.push_back(s.raw_token("", "a level label"));
                while (!s.at_end()) decl.levels.push_back(s.raw_token("", "a level label"));
                doc.bases.push_back(std::move(decl));
            } else if (keyword == "state") {
                const int which_at = s.col();
                const std::string which = s.ident("pre or post");
                if (which != "pre" && which != "post") {
                    throw LineError{"state must be pre or post", which_at};
                }
                s.expect('=', "after the state name");
                auto& slot = which == "pre" ? doc.pre : doc.post;
                if (slot) throw LineError{"duplicate state " + which, kw_at};
                slot = parse_state_expr(s);
                slot->pos = {line.number, kw_at};
            } else if (keyword == "circuit") {
                s.expect('=', "after circuit");
                if (doc.has_circuit) throw LineError{"duplicate circuit line", kw_at};
                doc.has_circuit = true;
                if (!s.at_end()) {
                    doc.circuit.push_back(parse_circuit_elem(s));
                    while (s.consume(';')) doc.circuit.push_back(parse_circuit_elem(s));
                }
                s.expect_end();
            } else if (keyword == "observe") {
                ObservableDecl decl;
                decl.pos = {line.number, kw_at};
                decl.name = s.ident("an observable name");
                s.expect('=', "after the observable name");
                decl.factors.push_back(parse_observable_factor(s));
                while (s.consume('*')) decl.factors.push_back(parse_observable_factor(s));
                s.expect_end();
                doc.observables.push_back(std::move(decl));
            } else if (keyword == "claim") {
                ClaimDecl decl;
                decl.pos = {line.number, kw_at};
                decl.observable = s.ident("an observable name");
                s.expect('=', "after the claim target");
                decl.value = s.expression();
                s.expect_end();
                decl.note = std::string(trim(line.comment));
                doc.claims.push_back(std::move(decl));
            } else if (keyword == "interpretation") {
                s.expect('=', "after interpretation");
                if (saw_interpretation) throw LineError{"duplicate interpretation line", kw_at};
                saw_interpretation = true;
                const int value_at = s.col();
                doc.interpretation = s.ident("literal or evolved");
                if (doc.interpretation != "literal" && doc.interpretation != "evolved") {
                    throw LineError{"interpretation must be literal or evolved", value_at};
                }
                s.expect_end();
            } else {
                throw LineError{"unknown declaration '" + keyword + "'", kw_at};
            }
        } catch (const LineError& e) {
            error(e.message, line.number, e.col);
        }
    }

    validate_document(doc, diagnostics);

    ParseResult result;
    result.diagnostics = std::move(diagnostics);
    if (!has_errors(result.diagnostics)) result.doc = std::move(doc);
    return result;
}

void validate_document(const ScenarioDoc& doc, std::vector<Diagnostic>& diagnostics) {
    const auto error = [&](std::string message, SourcePos pos) {
        diagnostics.push_back({Diagnostic::Severity::Error, std::move(message), pos.line, pos.col});
    };

    std::set<std::string> basis_names;
    for (const auto& decl : doc.bases) {
        if (!basis_names.insert(decl.name).second) {
            error("duplicate subsystem '" + decl.name + "'", decl.pos);
        }
        std::set<std::string> levels;
        for (const auto& lvl : decl.levels) {
            if (!levels.insert(lvl).second) {
                error("duplicate level '" + lvl + "' in subsystem '" + decl.name + "'", decl.pos);
            }
        }
    }

    const auto check_state = [&](const std::optional<StateExpr>& state, const char* which) {
        if (!state) return;
        if (doc.bases.empty()) {
            error("basis not declared", state->pos);
            return;
        }
        for (const auto& term : state->terms) {
            if (term.labels.size() != doc.bases.size()) {
                error(std::string("ket in state ") + which + " needs one label per subsystem (" +
                          std::to_string(doc.bases.size()) + " declared)",
                      term.pos);
                continue;
            }
            for (std::size_t i = 0; i < term.labels.size(); ++i) {
                const auto& levels = doc.bases[i].levels;
                if (std::find(levels.begin(), levels.end(), term.labels[i]) == levels.end()) {
                    error("unknown level '" + term.labels[i] + "' in subsystem '" + doc.bases[i].name + "'",
                          term.pos);
                }
            }
        }
    };
    check_state(doc.pre, "pre");
    check_state(doc.post, "post");

    std::set<std::string> observable_names;
    for (const auto& decl : doc.observables) {
        if (!observable_names.insert(decl.name).second) {
            error("duplicate observable '" + decl.name + "'", decl.pos);
        }
        for (const auto& factor : decl.factors) {
            if (factor.kind != ObservableFactor::Kind::Projector) continue;
            const auto it = std::find_if(doc.bases.begin(), doc.bases.end(),
                                         [&](const BasisDecl& b) { return b.name == factor.subsystem; });
            if (it == doc.bases.end()) {
                error("unknown subsystem '" + factor.subsystem + "'", factor.pos);
            } else if (std::find(it->levels.begin(), it->levels.end(), factor.level) == it->levels.end()) {
                error("unknown level '" + factor.level + "' in subsystem '" + factor.subsystem + "'",
                      factor.pos);
            }
        }
    }

    std::set<std::string> claimed;
    for (const auto& claim : doc.claims) {
        if (!observable_names.contains(claim.observable)) {
            error("claim references unknown observable '" + claim.observable + "'", claim.pos);
        } else if (!claimed.insert(claim.observable).second) {
            error("duplicate claim for observable '" + claim.observable + "'", claim.pos);
        }
    }
}

}  // namespace weakcat::sdl
