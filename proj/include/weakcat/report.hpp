#pragma once

#include <string>

#include "weakcat/pointer.hpp"
#include "weakcat/scenarios.hpp"

namespace weakcat {

enum class ReportFormat { Json, Csv, Text };

// Returns std::nullopt for unknown format names.
std::optional<ReportFormat> parse_report_format(std::string_view text);

// Full scenario report.  JSON follows the versioned "weakcat/1" schema with
// keys sorted and is byte-stable for identical inputs; CSV carries the
// per-observable table under the header
// `observable,re,im,claimed_re,claimed_im,deviation`.
std::string format_scenario_report(const ScenarioReport& report, ReportFormat format);

// Single observable (the `weak` subcommand).
std::string format_weak_report(const ObservableReport& entry, double postselect_prob,
                               ReportFormat format);

// One pointer coupling (the `pointer` subcommand).
std::string format_coupling_report(const std::string& observable, double sigma,
                                   const CouplingResult& result, ReportFormat format);

// Coupling sweep (the `sweep` subcommand).
std::string format_sweep_report(const std::string& observable, double sigma,
                                const std::vector<WeakLimitRow>& rows, ReportFormat format);

// Audit findings alone (the `audit` subcommand).
std::string format_audit_report(const std::string& scenario, Interpretation interpretation,
                                const std::vector<AuditFinding>& findings, ReportFormat format);

}  // namespace weakcat
