#include "weakcat/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace weakcat {

namespace {

using nlohmann::json;  // std::map-backed: object keys serialize sorted

constexpr const char* kSchema = "weakcat/1";

// Reports print -0.0 as plain 0 in every format.
double clean(double v) { return v == 0.0 ? 0.0 : v; }

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", clean(v));
    return buf;
}

json complex_json(const Amplitude& v) {
    return json{{"re", clean(v.real())}, {"im", clean(v.imag())}};
}

std::string complex_text(const Amplitude& v) {
    const double im = clean(v.imag());
    return num(v.real()) + (im < 0 ? " - " : " + ") + num(im < 0 ? -im : im) + "i";
}

// RFC-4180 quoting; only needed for free-text columns.
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

json audit_json(const std::vector<AuditFinding>& findings) {
    json arr = json::array();
    for (const auto& f : findings) {
        arr.push_back(json{{"name", f.name}, {"passed", f.passed}, {"detail", f.detail}});
    }
    return arr;
}

std::string audit_text(const std::vector<AuditFinding>& findings, const char* indent) {
    std::ostringstream out;
    for (const auto& f : findings) {
        out << indent << (f.passed ? "[pass] " : "[FAIL] ") << f.name << ": " << f.detail << "\n";
    }
    return out.str();
}

std::string observables_csv(const std::vector<ObservableReport>& observables) {
    std::ostringstream out;
    out << "observable,re,im,claimed_re,claimed_im,deviation\n";
    for (const auto& o : observables) {
        out << csv_quote(o.name) << ',' << num(o.weak_value.real()) << ','
            << num(o.weak_value.imag()) << ',';
        if (o.claimed) out << num(o.claimed->real());
        out << ',';
        if (o.claimed) out << num(o.claimed->imag());
        out << ',';
        if (o.deviation) out << num(*o.deviation);
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view text) {
    if (text == "json") return ReportFormat::Json;
    if (text == "csv") return ReportFormat::Csv;
    if (text == "text") return ReportFormat::Text;
    return std::nullopt;
}

std::string format_scenario_report(const ScenarioReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            json obs = json::array();
            for (const auto& o : report.observables) {
                json entry{{"name", o.name},
                           {"weak_value", complex_json(o.weak_value)},
                           {"reversed", complex_json(o.reversed)},
                           {"claim_ref", o.claim_ref}};
                entry["claimed"] = o.claimed ? complex_json(*o.claimed) : json(nullptr);
                entry["deviation"] = o.deviation ? json(*o.deviation) : json(nullptr);
                obs.push_back(std::move(entry));
            }
            const json doc{{"schema", kSchema},
                           {"scenario", report.scenario},
                           {"interpretation", interpretation_name(report.interpretation)},
                           {"feasible", report.feasible},
                           {"postselect_prob", report.postselect_prob},
                           {"observables", std::move(obs)},
                           {"audit", audit_json(report.audit)},
                           {"notes", report.notes}};
            return doc.dump(2) + "\n";
        }
        case ReportFormat::Csv:
            return observables_csv(report.observables);
        case ReportFormat::Text: {
            std::ostringstream out;
            out << "scenario: " << report.scenario << "\n"
                << "interpretation: " << interpretation_name(report.interpretation) << "\n"
                << "feasible: " << (report.feasible ? "yes" : "no") << "\n"
                << "postselect probability: " << num(report.postselect_prob) << "\n";
            if (!report.observables.empty()) {
                out << "observables:\n";
                for (const auto& o : report.observables) {
                    out << "  " << o.name << ": weak value = " << complex_text(o.weak_value)
                        << "  (reversed " << complex_text(o.reversed) << ")";
                    if (o.claimed) {
                        out << "  claimed " << complex_text(*o.claimed);
                        if (!o.claim_ref.empty()) out << " [" << o.claim_ref << "]";
                        out << ", deviation " << num(*o.deviation);
                    }
                    out << "\n";
                }
            }
            if (!report.audit.empty()) {
                out << "audit:\n" << audit_text(report.audit, "  ");
            }
            for (const auto& note : report.notes) {
                out << "note: " << note << "\n";
            }
            return out.str();
        }
    }
    return {};
}

std::string format_weak_report(const ObservableReport& entry, double postselect_prob,
                               ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            const json doc{{"schema", kSchema},
                           {"observable", entry.name},
                           {"weak_value", complex_json(entry.weak_value)},
                           {"reversed", complex_json(entry.reversed)},
                           {"postselect_prob", postselect_prob}};
            return doc.dump(2) + "\n";
        }
        case ReportFormat::Csv:
            return observables_csv({entry});
        case ReportFormat::Text: {
            std::ostringstream out;
            out << entry.name << ": weak value = " << complex_text(entry.weak_value)
                << "  (reversed " << complex_text(entry.reversed) << ")\n"
                << "postselect probability: " << num(postselect_prob) << "\n";
            return out.str();
        }
    }
    return {};
}

std::string format_coupling_report(const std::string& observable, double sigma,
                                   const CouplingResult& result, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            const json doc{{"schema", kSchema},
                           {"observable", observable},
                           {"sigma", sigma},
                           {"g", result.g},
                           {"mean_position_shift", result.mean_position_shift},
                           {"mean_momentum_shift", result.mean_momentum_shift},
                           {"success_prob", result.success_prob},
                           {"joint_norm_check", result.joint_norm_check}};
            return doc.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "g,sigma,position_shift,momentum_shift,success_prob,joint_norm_check\n"
                << num(result.g) << ',' << num(sigma) << ',' << num(result.mean_position_shift)
                << ',' << num(result.mean_momentum_shift) << ',' << num(result.success_prob) << ','
                << num(result.joint_norm_check) << '\n';
            return out.str();
        }
        case ReportFormat::Text: {
            std::ostringstream out;
            out << "observable: " << observable << "\n"
                << "sigma: " << num(sigma) << "\n"
                << "g: " << num(result.g) << "\n"
                << "mean position shift: " << num(result.mean_position_shift) << "\n"
                << "mean momentum shift: " << num(result.mean_momentum_shift) << "\n"
                << "success probability: " << num(result.success_prob) << "\n"
                << "joint norm check: " << num(result.joint_norm_check) << "\n";
            return out.str();
        }
    }
    return {};
}

std::string format_sweep_report(const std::string& observable, double sigma,
                                const std::vector<WeakLimitRow>& rows, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            json arr = json::array();
            for (const auto& r : rows) {
                arr.push_back(json{{"g", r.g},
                                   {"position_shift", r.position_shift},
                                   {"momentum_shift", r.momentum_shift},
                                   {"predicted_position", r.predicted_position},
                                   {"predicted_momentum", r.predicted_momentum},
                                   {"position_error", r.position_error},
                                   {"momentum_error", r.momentum_error}});
            }
            const json doc{{"schema", kSchema},
                           {"observable", observable},
                           {"sigma", sigma},
                           {"rows", std::move(arr)}};
            return doc.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "g,position_shift,predicted_position,position_error,"
                   "momentum_shift,predicted_momentum,momentum_error\n";
            for (const auto& r : rows) {
                out << num(r.g) << ',' << num(r.position_shift) << ',' << num(r.predicted_position)
                    << ',' << num(r.position_error) << ',' << num(r.momentum_shift) << ','
                    << num(r.predicted_momentum) << ',' << num(r.momentum_error) << '\n';
            }
            return out.str();
        }
        case ReportFormat::Text: {
            std::ostringstream out;
            out << "observable: " << observable << ", sigma: " << num(sigma) << "\n";
            for (const auto& r : rows) {
                out << "g = " << num(r.g) << ": position shift " << num(r.position_shift)
                    << " (predicted " << num(r.predicted_position) << ", error "
                    << num(r.position_error) << "), momentum shift " << num(r.momentum_shift)
                    << " (predicted " << num(r.predicted_momentum) << ", error "
                    << num(r.momentum_error) << ")\n";
            }
            return out.str();
        }
    }
    return {};
}

std::string format_audit_report(const std::string& scenario, Interpretation interpretation,
                                const std::vector<AuditFinding>& findings, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json: {
            const json doc{{"schema", kSchema},
                           {"scenario", scenario},
                           {"interpretation", interpretation_name(interpretation)},
                           {"audit", audit_json(findings)}};
            return doc.dump(2) + "\n";
        }
        case ReportFormat::Csv: {
            std::ostringstream out;
            out << "finding,passed,detail\n";
            for (const auto& f : findings) {
                out << csv_quote(f.name) << ',' << (f.passed ? "true" : "false") << ','
                    << csv_quote(f.detail) << '\n';
            }
            return out.str();
        }
        case ReportFormat::Text: {
            std::ostringstream out;
            out << "scenario: " << scenario << "\n"
                << "interpretation: " << interpretation_name(interpretation) << "\n"
                << "audit:\n"
                << audit_text(findings, "  ");
            return out.str();
        }
    }
    return {};
}

}  // namespace weakcat
