#pragma once

#include "weakcat/sdl.hpp"

namespace weakcat::sdl {

// True when the coefficient's numeric value is finite (always holds for
// exact coefficients; approximate ones can overflow during folding).
bool coeff_finite(const Coeff& c);

// In-document semantic checks shared by parse() and lower(): declared
// bases are well-formed and unique, every ket resolves against them, and
// observable/claim references resolve. Appends diagnostics.
void validate_document(const ScenarioDoc& doc, std::vector<Diagnostic>& diagnostics);

}  // namespace weakcat::sdl
