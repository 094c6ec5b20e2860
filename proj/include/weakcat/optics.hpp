#pragma once

#include <string>
#include <variant>
#include <vector>

#include "weakcat/linear_op.hpp"
#include "weakcat/state.hpp"

namespace weakcat {

// Interferometer components act on a basis that has a subsystem named
// "path"; spin components additionally need a subsystem holding both
// "s_up" and "s_dn" levels. Everything else is carried along untouched.

// Mixes two path arms: on the (a,b) pair the matrix is
// [[cos t, i sin t], [i sin t, cos t]]; t = pi/4 is a 50:50 splitter.
struct BeamSplitter {
    std::string path_a;
    std::string path_b;
    double mixing_angle = 0.0;

    bool operator==(const BeamSplitter&) const = default;
};

// Multiplies one arm by exp(i phi).
struct PhaseShifter {
    std::string path;
    double phi = 0.0;

    bool operator==(const PhaseShifter&) const = default;
};

enum class SpinAxis { X, Y, Z };

// Spin rotation exp(-i angle sigma_axis / 2) on the {s_up, s_dn} pair of
// one arm.
struct SpinTurner {
    std::string path;
    SpinAxis axis = SpinAxis::X;
    double angle = 0.0;

    bool operator==(const SpinTurner&) const = default;
};

// Inhomogeneous-field region that routes spin components of one arm into
// (possibly) different output arms, coherently:
// |in, s_up> -> |up_out, s_up>, |in, s_dn> -> |dn_out, s_dn>.
// Implemented as the permutation unitary swapping those level pairs.
struct MagneticField {
    std::string in_path;
    std::string up_out_path;
    std::string dn_out_path;

    bool operator==(const MagneticField&) const = default;
};

// Projective filter passing only |path, spin_level>.
struct Analyzer {
    std::string path;
    std::string spin_level;

    bool operator==(const Analyzer&) const = default;
};

// Named click projector on one arm; allowed only at the end of a circuit.
struct Detector {
    std::string name;
    std::string path;

    bool operator==(const Detector&) const = default;
};

using Component = std::variant<BeamSplitter, PhaseShifter, SpinTurner, MagneticField, Analyzer, Detector>;

std::string component_kind(const Component& c);

// Dense operator realizing one component on the given basis. Throws if the
// component references unknown arms or the basis lacks the needed
// subsystems.
LinearOperator component_operator(const Component& c, const BasisPtr& basis);

struct Circuit {
    BasisPtr basis;
    std::vector<Component> elements;
};

// Validates every element against the basis and checks that detectors only
// appear in the trailing position(s).
Circuit make_circuit(BasisPtr basis, std::vector<Component> elements);

// Applies every non-detector element in order.
StateVector run_circuit(const Circuit& circuit, const StateVector& input);

// Product of the non-detector element operators, in application order.
// Throws if any element (e.g. an Analyzer) makes the product non-unitary.
LinearOperator circuit_unitary(const Circuit& circuit);

// Probability that the named detector clicks on the circuit output.
double detector_click_probability(const Circuit& circuit, const StateVector& input,
                                  const std::string& detector_name);

// Spin-sector operator on the unique subsystem carrying both s_up and
// s_dn: which = "up" or "dn" gives the level projector, "z" their
// difference. Zero on other levels of that subsystem, identity elsewhere.
LinearOperator sigma_operator(const BasisPtr& basis, const std::string& which);

}  // namespace weakcat
