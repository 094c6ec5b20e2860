#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracle.hpp"
#include "weakcat/scenarios.hpp"

using namespace weakcat;

namespace {

bool has_note_containing(const ScenarioReport& r, const std::string& needle) {
    for (const auto& n : r.notes) {
        if (n.find(needle) != std::string::npos) return true;
    }
    return false;
}

const AuditFinding* find_finding(const std::vector<AuditFinding>& fs, const std::string& name) {
    for (const auto& f : fs) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("helicity sign follows the spin-momentum dot product") {
    CHECK(helicity_sign({0, 0, 1}, {0, 0, 1}).sign == +1);
    CHECK(helicity_sign({0, 0, 1}, {0, 0, -1}).sign == -1);
    CHECK(helicity_sign({0, 0, -3}, {0, 0, 7}).sign == -1);
    // Positive rescaling of either vector cannot change the sign.
    CHECK(helicity_sign({0, 0, 5}, {0, 0, 0.1}).sign == +1);
    CHECK(helicity_sign({1e-13, 0, 1}, {0, 0, 1}).sign == +1);
    CHECK_THROWS_WITH_AS(helicity_sign({1, 0, 0}, {0, 0, 1}),
                         doctest::Contains("transverse"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(helicity_sign({0, 0, 0}, {0, 0, 1}),
                         doctest::Contains("nonzero"), std::invalid_argument);
}

TEST_CASE("built-in catalog") {
    const auto names = builtin_scenario_names();
    REQUIRE(names.size() == 4);
    CHECK(names[0] == "helicity-sign");
    CHECK(names[3] == "cheshire-cat");
    for (const auto& n : names) {
        CHECK(!builtin_scenario_summary(n).empty());
        CHECK(!builtin_scenario_text(n).empty());
        const auto s = builtin_scenario(n, Interpretation::Literal);
        REQUIRE(s.has_value());
        CHECK(s->name == n);
        CHECK(s->interpretation == Interpretation::Literal);
        CHECK(s->pre.is_normalized(1e-12));
        CHECK(s->post.is_normalized(1e-12));
    }
    CHECK(!builtin_scenario("no-such-scenario", Interpretation::Literal).has_value());
    CHECK_THROWS_AS((void)builtin_scenario_text("no-such-scenario"), std::invalid_argument);

    const auto all = builtin_scenarios();
    REQUIRE(all.size() == 8);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(all[2 * k].name == names[k]);
        CHECK(all[2 * k].interpretation == Interpretation::Literal);
        CHECK(all[2 * k + 1].interpretation == Interpretation::Evolved);
    }
}

TEST_CASE("interpretation names round-trip") {
    CHECK(std::string(interpretation_name(Interpretation::Literal)) == "literal");
    CHECK(std::string(interpretation_name(Interpretation::Evolved)) == "evolved");
    CHECK(parse_interpretation("literal") == Interpretation::Literal);
    CHECK(parse_interpretation("evolved") == Interpretation::Evolved);
    CHECK(!parse_interpretation("Evolved").has_value());
    CHECK(!parse_interpretation("").has_value());
}

TEST_CASE("every built-in matches the term-expansion oracle in both interpretations") {
    for (const auto& name : builtin_scenario_names()) {
        const oracle::ScenarioTerms terms = oracle::scenario_terms(name);
        for (const Interpretation interp : {Interpretation::Literal, Interpretation::Evolved}) {
            CAPTURE(name);
            CAPTURE(interpretation_name(interp));
            const auto scenario = builtin_scenario(name, interp);
            REQUIRE(scenario.has_value());
            const ScenarioReport report = evaluate_scenario(*scenario);

            const oracle::Terms& pre =
                interp == Interpretation::Evolved ? terms.pre_evolved : terms.pre_literal;
            const oracle::Cplx overlap = oracle::inner(terms.post, pre);
            const bool feasible = std::abs(overlap) > 1e-12;
            CHECK(report.feasible == feasible);
            if (!feasible) {
                CHECK(report.observables.empty());
                CHECK(report.postselect_prob == 0.0);
                continue;
            }

            CHECK(report.postselect_prob == doctest::Approx(std::norm(overlap)).epsilon(1e-12));
            REQUIRE(report.observables.size() == terms.observables.size());
            for (std::size_t k = 0; k < terms.observables.size(); ++k) {
                const auto& [oname, diag] = terms.observables[k];
                CAPTURE(oname);
                CHECK(report.observables[k].name == oname);
                const oracle::Cplx expected = oracle::weak_value(diag, pre, terms.post);
                CHECK_CPLX(report.observables[k].weak_value, expected, 1e-12);
                CHECK_CPLX(report.observables[k].reversed, std::conj(expected), 1e-12);
            }
        }
    }
}

TEST_CASE("cheshire cat separates the particle from its polarization") {
    const auto scenario = builtin_scenario("cheshire-cat", Interpretation::Literal);
    REQUIRE(scenario.has_value());
    const ScenarioReport report = evaluate_scenario(*scenario);
    REQUIRE(report.feasible);
    REQUIRE(report.observables.size() == 4);
    CHECK(report.observables[0].name == "PiL");
    CHECK_CPLX(report.observables[0].weak_value, 1.0, 1e-12);
    CHECK(report.observables[1].name == "PiR");
    CHECK_CPLX(report.observables[1].weak_value, 0.0, 1e-12);
    CHECK(report.observables[2].name == "SzPiL");
    CHECK_CPLX(report.observables[2].weak_value, 0.0, 1e-12);
    CHECK(report.observables[3].name == "SzPiR");
    CHECK_CPLX(report.observables[3].weak_value, 1.0, 1e-12);
    CHECK(report.postselect_prob == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("claims annotate but never feed the computation") {
    const auto with = builtin_scenario("helicity-sign", Interpretation::Literal);
    REQUIRE(with.has_value());
    Scenario without = *with;
    without.claims.clear();

    const ScenarioReport a = evaluate_scenario(*with);
    const ScenarioReport b = evaluate_scenario(without);
    REQUIRE(a.observables.size() == b.observables.size());
    CHECK(a.postselect_prob == b.postselect_prob);
    for (std::size_t k = 0; k < a.observables.size(); ++k) {
        CHECK(a.observables[k].weak_value == b.observables[k].weak_value);
        CHECK(!b.observables[k].claimed.has_value());
        CHECK(b.observables[k].claim_ref.empty());
        CHECK(!b.observables[k].deviation.has_value());
    }

    // The claim metadata itself is reported verbatim with an absolute deviation.
    const auto& p3 = a.observables[2];
    REQUIRE(p3.name == "P3");
    REQUIRE(p3.claimed.has_value());
    CHECK_CPLX(*p3.claimed, 1.0, 0.0);
    CHECK(p3.claim_ref == "Eq. 8");
    REQUIRE(p3.deviation.has_value());
    CHECK(*p3.deviation == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!a.observables[0].claimed.has_value());  // P1 carries no claim
}

TEST_CASE("claim deviations under the evolved interpretation") {
    const ScenarioReport sign =
        evaluate_scenario(*builtin_scenario("helicity-sign", Interpretation::Evolved));
    REQUIRE(sign.feasible);
    const auto& p3 = sign.observables[2];
    CHECK_CPLX(p3.weak_value, std::sqrt(2.0) - 1.0, 1e-12);
    REQUIRE(p3.deviation.has_value());
    CHECK(*p3.deviation == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));

    const ScenarioReport preserving =
        evaluate_scenario(*builtin_scenario("helicity-preserving", Interpretation::Evolved));
    REQUIRE(preserving.feasible);
    CHECK(preserving.postselect_prob == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_CPLX(preserving.observables[0].weak_value, 0.5, 1e-12);
    REQUIRE(preserving.observables[0].deviation.has_value());
    CHECK(*preserving.observables[0].deviation == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_CPLX(preserving.observables[1].weak_value, 0.5, 1e-12);  // S4dn

    const ScenarioReport reversing =
        evaluate_scenario(*builtin_scenario("helicity-reversing", Interpretation::Evolved));
    REQUIRE(reversing.feasible);
    CHECK_CPLX(reversing.observables[0].weak_value, 1.0, 1e-12);
    REQUIRE(reversing.observables[0].deviation.has_value());
    CHECK(*reversing.observables[0].deviation <= 1e-12);
}

TEST_CASE("the arm-3 decision rule is narrated only at its endpoints") {
    const ScenarioReport literal =
        evaluate_scenario(*builtin_scenario("helicity-sign", Interpretation::Literal));
    CHECK(has_note_containing(literal, "helicity negative"));
    CHECK(!has_note_containing(literal, "helicity positive"));

    // Evolved weak value is sqrt(2)-1: neither endpoint, so no verdict.
    const ScenarioReport evolved =
        evaluate_scenario(*builtin_scenario("helicity-sign", Interpretation::Evolved));
    CHECK(!has_note_containing(evolved, "helicity"));

    const ScenarioReport cheshire =
        evaluate_scenario(*builtin_scenario("cheshire-cat", Interpretation::Literal));
    CHECK(cheshire.notes.empty());
}

TEST_CASE("infeasible post-selection reports instead of throwing") {
    const ScenarioReport r =
        evaluate_scenario(*builtin_scenario("helicity-reversing", Interpretation::Literal));
    CHECK(!r.feasible);
    CHECK(r.postselect_prob == 0.0);
    CHECK(r.observables.empty());
    CHECK(has_note_containing(r, "post-selection impossible"));
    CHECK(has_note_containing(r, "literal"));
    REQUIRE(r.audit.size() == 1);
    CHECK(r.audit[0].name == "postselect-feasible");
    CHECK(!r.audit[0].passed);
    CHECK(r.audit[0].detail.find("no values to audit") != std::string::npos);
}

TEST_CASE("consistency audit findings") {
    for (const auto& name : builtin_scenario_names()) {
        for (const Interpretation interp : {Interpretation::Literal, Interpretation::Evolved}) {
            CAPTURE(name);
            CAPTURE(interpretation_name(interp));
            const auto scenario = builtin_scenario(name, interp);
            const auto findings = consistency_audit(*scenario);
            const auto* feasible = find_finding(findings, "postselect-feasible");
            REQUIRE(feasible != nullptr);
            if (name == "helicity-reversing" && interp == Interpretation::Literal) {
                CHECK(!feasible->passed);
                CHECK(findings.size() == 1);
                continue;
            }
            CHECK(feasible->passed);
            CHECK(feasible->detail.find("|<post|U|pre>|^2") != std::string::npos);

            const auto* completeness = find_finding(findings, "path-projector-completeness");
            REQUIRE(completeness != nullptr);
            CHECK(completeness->passed);

            const auto* arm2 = find_finding(findings, "arm-2-orthogonality");
            if (name == "cheshire-cat") {
                CHECK(arm2 == nullptr);  // no arm 2 in that basis
            } else {
                REQUIRE(arm2 != nullptr);
                CHECK(arm2->passed);
                CHECK(arm2->detail.find("exactly zero") != std::string::npos);
            }
        }
    }
}

TEST_CASE("evaluate attaches the same audit it reports standalone") {
    const auto scenario = builtin_scenario("helicity-sign", Interpretation::Evolved);
    const ScenarioReport report = evaluate_scenario(*scenario);
    const auto standalone = consistency_audit(*scenario);
    REQUIRE(report.audit.size() == standalone.size());
    for (std::size_t k = 0; k < standalone.size(); ++k) {
        CHECK(report.audit[k].name == standalone[k].name);
        CHECK(report.audit[k].passed == standalone[k].passed);
    }
}
