#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "json.hpp"
#include "weakcat/report.hpp"

using namespace weakcat;
using nlohmann::json;

namespace {

ScenarioReport sample_report() {
    ScenarioReport r;
    r.scenario = "sample";
    r.interpretation = Interpretation::Evolved;
    r.feasible = true;
    r.postselect_prob = 0.72855339059327406;

    ObservableReport claimed;
    claimed.name = "P3";
    claimed.weak_value = Amplitude(std::sqrt(2.0) - 1.0, 0.0);
    claimed.reversed = std::conj(claimed.weak_value);
    claimed.claimed = Amplitude(1.0, 0.0);
    claimed.claim_ref = "Eq. 8";
    claimed.deviation = std::abs(claimed.weak_value - *claimed.claimed);

    ObservableReport bare;
    bare.name = "P1";
    bare.weak_value = Amplitude(0.25, -0.5);
    bare.reversed = std::conj(bare.weak_value);

    r.observables = {claimed, bare};
    r.audit = {{"postselect-feasible", true, "fine"}, {"made-up", false, "broken"}};
    r.notes = {"a note"};
    return r;
}

double csv_field(const std::string& csv, std::size_t row, std::size_t col) {
    std::size_t at = 0;
    for (std::size_t r = 0; r < row; ++r) at = csv.find('\n', at) + 1;
    for (std::size_t c = 0; c < col; ++c) at = csv.find(',', at) + 1;
    return std::strtod(csv.c_str() + at, nullptr);
}

}  // namespace

TEST_CASE("format names parse case-sensitively") {
    CHECK(parse_report_format("json") == ReportFormat::Json);
    CHECK(parse_report_format("csv") == ReportFormat::Csv);
    CHECK(parse_report_format("text") == ReportFormat::Text);
    CHECK(!parse_report_format("JSON").has_value());
    CHECK(!parse_report_format("yaml").has_value());
    CHECK(!parse_report_format("").has_value());
}

TEST_CASE("scenario report JSON carries the versioned schema") {
    const ScenarioReport r = sample_report();
    const std::string text = format_scenario_report(r, ReportFormat::Json);
    CHECK(text == format_scenario_report(r, ReportFormat::Json));  // byte-stable
    CHECK(text.back() == '\n');

    const json doc = json::parse(text);
    CHECK(doc.at("schema") == "weakcat/1");
    CHECK(doc.at("scenario") == "sample");
    CHECK(doc.at("interpretation") == "evolved");
    CHECK(doc.at("feasible") == true);
    CHECK(doc.at("postselect_prob").get<double>() == r.postselect_prob);

    const json& obs = doc.at("observables");
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].at("name") == "P3");
    CHECK(obs[0].at("weak_value").at("re").get<double>() == std::sqrt(2.0) - 1.0);
    CHECK(obs[0].at("weak_value").at("im").get<double>() == 0.0);
    CHECK(obs[0].at("claimed").at("re").get<double>() == 1.0);
    CHECK(obs[0].at("claim_ref") == "Eq. 8");
    CHECK(obs[0].at("deviation").get<double>() == *r.observables[0].deviation);
    CHECK(obs[1].at("claimed").is_null());
    CHECK(obs[1].at("deviation").is_null());
    CHECK(obs[1].at("claim_ref") == "");

    const json& audit = doc.at("audit");
    REQUIRE(audit.size() == 2);
    CHECK(audit[0].at("name") == "postselect-feasible");
    CHECK(audit[0].at("passed") == true);
    CHECK(audit[1].at("passed") == false);
    CHECK(doc.at("notes") == json::array({"a note"}));

    // Keys are emitted sorted, so the document starts with "audit".
    CHECK(text.find("\"audit\"") < text.find("\"feasible\""));
    CHECK(text.find("\"feasible\"") < text.find("\"schema\""));
}

TEST_CASE("scenario report CSV is the observable table") {
    const std::string csv = format_scenario_report(sample_report(), ReportFormat::Csv);
    CHECK(csv.rfind("observable,re,im,claimed_re,claimed_im,deviation\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv_field(csv, 1, 1) == std::sqrt(2.0) - 1.0);
    CHECK(csv_field(csv, 1, 3) == 1.0);
    CHECK(csv_field(csv, 2, 2) == -0.5);
    // The unclaimed row leaves the claim columns empty.
    CHECK(csv.find("P1,0.25,-0.5,,,\n") != std::string::npos);
}

TEST_CASE("CSV and JSON agree digit for digit") {
    const ScenarioReport r = sample_report();
    const json doc = json::parse(format_scenario_report(r, ReportFormat::Json));
    const std::string csv = format_scenario_report(r, ReportFormat::Csv);
    CHECK(csv_field(csv, 1, 1) == doc.at("observables")[0].at("weak_value").at("re").get<double>());
    CHECK(csv_field(csv, 1, 5) == doc.at("observables")[0].at("deviation").get<double>());
    CHECK(csv_field(csv, 2, 2) == doc.at("observables")[1].at("weak_value").at("im").get<double>());
}

TEST_CASE("negative zero never reaches any output format") {
    ObservableReport o;
    o.name = "P";
    o.weak_value = Amplitude(1.0, -0.0);
    o.reversed = Amplitude(-0.0, -0.0);
    const std::string as_json = format_weak_report(o, 0.5, ReportFormat::Json);
    const std::string as_csv = format_weak_report(o, 0.5, ReportFormat::Csv);
    const std::string as_text = format_weak_report(o, 0.5, ReportFormat::Text);
    CHECK(as_json.find("-0") == std::string::npos);
    CHECK(as_csv.find("-0") == std::string::npos);
    CHECK(as_text.find("-0") == std::string::npos);
    CHECK(as_text.find("P: weak value = 1 + 0i") != std::string::npos);
    CHECK(as_text.find("(reversed 0 + 0i)") != std::string::npos);
}

TEST_CASE("scenario report text form is human-shaped") {
    const std::string text = format_scenario_report(sample_report(), ReportFormat::Text);
    CHECK(text.find("scenario: sample\n") != std::string::npos);
    CHECK(text.find("interpretation: evolved\n") != std::string::npos);
    CHECK(text.find("feasible: yes\n") != std::string::npos);
    CHECK(text.find("postselect probability: 0.72855339059327406\n") != std::string::npos);
    CHECK(text.find("claimed 1 + 0i [Eq. 8], deviation ") != std::string::npos);
    CHECK(text.find("[pass] postselect-feasible: fine\n") != std::string::npos);
    CHECK(text.find("[FAIL] made-up: broken\n") != std::string::npos);
    CHECK(text.find("note: a note\n") != std::string::npos);

    ScenarioReport infeasible;
    infeasible.scenario = "s";
    infeasible.feasible = false;
    CHECK(format_scenario_report(infeasible, ReportFormat::Text).find("feasible: no\n") !=
          std::string::npos);
}

TEST_CASE("weak report formats") {
    ObservableReport o;
    o.name = "PiL";
    o.weak_value = Amplitude(1.0, 0.0);
    o.reversed = Amplitude(1.0, 0.0);
    const json doc = json::parse(format_weak_report(o, 0.25, ReportFormat::Json));
    CHECK(doc.at("schema") == "weakcat/1");
    CHECK(doc.at("observable") == "PiL");
    CHECK(doc.at("weak_value").at("re").get<double>() == 1.0);
    CHECK(doc.at("postselect_prob").get<double>() == 0.25);

    const std::string csv = format_weak_report(o, 0.25, ReportFormat::Csv);
    CHECK(csv.rfind("observable,re,im,claimed_re,claimed_im,deviation\n", 0) == 0);
    CHECK(format_weak_report(o, 0.25, ReportFormat::Text).find("postselect probability: 0.25") !=
          std::string::npos);
}

TEST_CASE("coupling report formats") {
    CouplingResult r;
    r.g = 0.01;
    r.mean_position_shift = 0.0100000000000004;
    r.mean_momentum_shift = -0.0;
    r.success_prob = 0.25;
    r.joint_norm_check = 1.0000000000000009;

    const json doc = json::parse(format_coupling_report("PiL", 1.0, r, ReportFormat::Json));
    CHECK(doc.at("observable") == "PiL");
    CHECK(doc.at("sigma").get<double>() == 1.0);
    CHECK(doc.at("g").get<double>() == 0.01);
    CHECK(doc.at("mean_position_shift").get<double>() == r.mean_position_shift);
    CHECK(doc.at("joint_norm_check").get<double>() == r.joint_norm_check);

    const std::string csv = format_coupling_report("PiL", 1.0, r, ReportFormat::Csv);
    CHECK(csv.rfind("g,sigma,position_shift,momentum_shift,success_prob,joint_norm_check\n", 0) ==
          0);
    CHECK(csv_field(csv, 1, 0) == 0.01);
    CHECK(csv_field(csv, 1, 4) == 0.25);
    CHECK(csv.find("-0") == std::string::npos);

    const std::string text = format_coupling_report("PiL", 1.0, r, ReportFormat::Text);
    char shift[40];
    std::snprintf(shift, sizeof(shift), "%.17g", r.mean_position_shift);
    CHECK(text.find(std::string("mean position shift: ") + shift + "\n") != std::string::npos);
    CHECK(text.find("mean momentum shift: 0\n") != std::string::npos);
}

TEST_CASE("sweep report formats") {
    std::vector<WeakLimitRow> rows(2);
    rows[0] = {0.02, 0.0200001, 1e-12, 0.02, 0.0, 1e-7, 1e-12};
    rows[1] = {0.01, 0.01000001, 1e-13, 0.01, 0.0, 1e-8, 1e-13};

    const json doc = json::parse(format_sweep_report("P", 1.0, rows, ReportFormat::Json));
    REQUIRE(doc.at("rows").size() == 2);
    CHECK(doc.at("rows")[0].at("g").get<double>() == 0.02);
    CHECK(doc.at("rows")[1].at("position_error").get<double>() == 1e-8);

    const std::string csv = format_sweep_report("P", 1.0, rows, ReportFormat::Csv);
    CHECK(csv.rfind("g,position_shift,predicted_position,position_error,"
                    "momentum_shift,predicted_momentum,momentum_error\n",
                    0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv_field(csv, 2, 0) == 0.01);
    CHECK(csv_field(csv, 1, 3) == 1e-7);

    const std::string text = format_sweep_report("P", 1.0, rows, ReportFormat::Text);
    CHECK(text.find("observable: P, sigma: 1\n") != std::string::npos);
    CHECK(text.find("g = 0.02: position shift ") != std::string::npos);
}

TEST_CASE("audit report formats") {
    const std::vector<AuditFinding> findings = {
        {"postselect-feasible", true, "|<post|U|pre>|^2 = 0.25"},
        {"arm-2-orthogonality", false, "expected, got other"},
    };
    const json doc =
        json::parse(format_audit_report("helicity-sign", Interpretation::Literal, findings,
                                        ReportFormat::Json));
    CHECK(doc.at("schema") == "weakcat/1");
    CHECK(doc.at("scenario") == "helicity-sign");
    CHECK(doc.at("interpretation") == "literal");
    REQUIRE(doc.at("audit").size() == 2);
    CHECK(doc.at("audit")[1].at("passed") == false);

    const std::string csv =
        format_audit_report("helicity-sign", Interpretation::Literal, findings, ReportFormat::Csv);
    CHECK(csv.rfind("finding,passed,detail\n", 0) == 0);
    CHECK(csv.find("postselect-feasible,true,") != std::string::npos);
    CHECK(csv.find("arm-2-orthogonality,false,\"expected, got other\"\n") != std::string::npos);

    const std::string text =
        format_audit_report("helicity-sign", Interpretation::Literal, findings, ReportFormat::Text);
    CHECK(text.find("[pass] postselect-feasible") != std::string::npos);
    CHECK(text.find("[FAIL] arm-2-orthogonality") != std::string::npos);
}
