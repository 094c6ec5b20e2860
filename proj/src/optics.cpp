#include "weakcat/optics.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace weakcat {

namespace {

std::size_t path_subsystem(const BasisPtr& basis) {
    if (auto i = basis->subsystem_index("path")) return *i;
    throw std::invalid_argument("optics components need a subsystem named 'path'");
}

// The unique non-path subsystem that carries both spin tokens.
std::size_t spin_subsystem(const BasisPtr& basis, std::size_t path_sub) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < basis->subsystem_count(); ++i) {
        if (i == path_sub) continue;
        if (basis->find_level(i, "s_up") && basis->find_level(i, "s_dn")) {
            if (found) throw std::invalid_argument("spin levels s_up/s_dn appear in more than one subsystem");
            found = i;
        }
    }
    if (!found) throw std::invalid_argument("basis has no subsystem with spin levels s_up and s_dn");
    return *found;
}

// The unique non-path subsystem that has `level` among its labels.
std::size_t level_subsystem(const BasisPtr& basis, std::size_t path_sub, const std::string& level) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < basis->subsystem_count(); ++i) {
        if (i == path_sub) continue;
        if (basis->find_level(i, level)) {
            if (found) throw std::invalid_argument("level '" + level + "' appears in more than one subsystem");
            found = i;
        }
    }
    if (!found) throw std::invalid_argument("unknown analyzer level '" + level + "'");
    return *found;
}

Eigen::MatrixXcd identity_for(const BasisPtr& basis) {
    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    return Eigen::MatrixXcd::Identity(dim, dim);
}

Eigen::MatrixXcd build(const BeamSplitter& bs, const BasisPtr& basis) {
    const std::size_t psys = path_subsystem(basis);
    const std::size_t ia = basis->level_index(psys, bs.path_a);
    const std::size_t ib = basis->level_index(psys, bs.path_b);
    if (ia == ib) throw std::invalid_argument("beam splitter needs two distinct arms");
    if (!std::isfinite(bs.mixing_angle)) throw std::invalid_argument("beam splitter angle must be finite");

    const double c = std::cos(bs.mixing_angle);
    const Amplitude is(0.0, std::sin(bs.mixing_angle));
    Eigen::MatrixXcd m = identity_for(basis);
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        if (basis->coordinate(i, psys) != ia) continue;
        const std::size_t j = basis->with_coordinate(i, psys, ib);
        const auto ei = static_cast<Eigen::Index>(i);
        const auto ej = static_cast<Eigen::Index>(j);
        m(ei, ei) = c;
        m(ej, ej) = c;
        m(ei, ej) = is;
        m(ej, ei) = is;
    }
    return m;
}

Eigen::MatrixXcd build(const PhaseShifter& ps, const BasisPtr& basis) {
    const std::size_t psys = path_subsystem(basis);
    const std::size_t ip = basis->level_index(psys, ps.path);
    if (!std::isfinite(ps.phi)) throw std::invalid_argument("phase shift must be finite");

    const Amplitude phase = std::exp(Amplitude(0.0, ps.phi));
    Eigen::MatrixXcd m = identity_for(basis);
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        if (basis->coordinate(i, psys) == ip) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = phase;
    }
    return m;
}

Eigen::MatrixXcd build(const SpinTurner& st, const BasisPtr& basis) {
    const std::size_t psys = path_subsystem(basis);
    const std::size_t ssys = spin_subsystem(basis, psys);
    const std::size_t ip = basis->level_index(psys, st.path);
    const std::size_t iu = basis->level_index(ssys, "s_up");
    const std::size_t id = basis->level_index(ssys, "s_dn");
    if (!std::isfinite(st.angle)) throw std::invalid_argument("spin turner angle must be finite");

    const double c = std::cos(st.angle / 2.0);
    const double s = std::sin(st.angle / 2.0);
    Amplitude r00, r01, r10, r11;
    switch (st.axis) {
        case SpinAxis::X:
            r00 = c; r01 = Amplitude(0.0, -s); r10 = Amplitude(0.0, -s); r11 = c;
            break;
        case SpinAxis::Y:
            r00 = c; r01 = -s; r10 = s; r11 = c;
            break;
        case SpinAxis::Z:
            r00 = std::exp(Amplitude(0.0, -st.angle / 2.0)); r01 = 0.0;
            r10 = 0.0; r11 = std::exp(Amplitude(0.0, st.angle / 2.0));
            break;
    }

    Eigen::MatrixXcd m = identity_for(basis);
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        if (basis->coordinate(i, psys) != ip || basis->coordinate(i, ssys) != iu) continue;
        const std::size_t j = basis->with_coordinate(i, ssys, id);
        const auto ei = static_cast<Eigen::Index>(i);
        const auto ej = static_cast<Eigen::Index>(j);
        m(ei, ei) = r00;
        m(ei, ej) = r01;
        m(ej, ei) = r10;
        m(ej, ej) = r11;
    }
    return m;
}

Eigen::MatrixXcd build(const MagneticField& mf, const BasisPtr& basis) {
    const std::size_t psys = path_subsystem(basis);
    const std::size_t ssys = spin_subsystem(basis, psys);
    const std::size_t in = basis->level_index(psys, mf.in_path);
    const std::size_t up_out = basis->level_index(psys, mf.up_out_path);
    const std::size_t dn_out = basis->level_index(psys, mf.dn_out_path);
    if (up_out == dn_out) throw std::invalid_argument("magnetic field needs distinct output arms");

    Eigen::MatrixXcd m = identity_for(basis);
    const auto route = [&](std::size_t spin_level, std::size_t out) {
        if (out == in) return;  // that spin component stays put
        for (std::size_t i = 0; i < basis->dimension(); ++i) {
            if (basis->coordinate(i, psys) != in || basis->coordinate(i, ssys) != spin_level) continue;
            const std::size_t j = basis->with_coordinate(i, psys, out);
            const auto ei = static_cast<Eigen::Index>(i);
            const auto ej = static_cast<Eigen::Index>(j);
            m(ei, ei) = 0.0;
            m(ej, ej) = 0.0;
            m(ei, ej) = 1.0;
            m(ej, ei) = 1.0;
        }
    };
    route(basis->level_index(ssys, "s_up"), up_out);
    route(basis->level_index(ssys, "s_dn"), dn_out);
    return m;
}

Eigen::MatrixXcd build(const Analyzer& an, const BasisPtr& basis) {
    const std::size_t psys = path_subsystem(basis);
    const std::size_t lsys = level_subsystem(basis, psys, an.spin_level);
    const std::size_t ip = basis->level_index(psys, an.path);
    const std::size_t il = basis->level_index(lsys, an.spin_level);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis->dimension()),
                                                static_cast<Eigen::Index>(basis->dimension()));
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        if (basis->coordinate(i, psys) == ip && basis->coordinate(i, lsys) == il) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    return m;
}

Eigen::MatrixXcd build(const Detector& det, const BasisPtr& basis) {
    if (det.name.empty()) throw std::invalid_argument("detector needs a name");
    const std::size_t psys = path_subsystem(basis);
    const std::size_t ip = basis->level_index(psys, det.path);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis->dimension()),
                                                static_cast<Eigen::Index>(basis->dimension()));
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        if (basis->coordinate(i, psys) == ip) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    return m;
}

}  // namespace

std::string component_kind(const Component& c) {
    return std::visit(
        [](const auto& elem) -> std::string {
            using T = std::decay_t<decltype(elem)>;
            if constexpr (std::is_same_v<T, BeamSplitter>) return "bs";
            else if constexpr (std::is_same_v<T, PhaseShifter>) return "phase";
            else if constexpr (std::is_same_v<T, SpinTurner>) return "spinturner";
            else if constexpr (std::is_same_v<T, MagneticField>) return "bfield";
            else if constexpr (std::is_same_v<T, Analyzer>) return "analyzer";
            else return "detector";
        },
        c);
}

LinearOperator component_operator(const Component& c, const BasisPtr& basis) {
    if (!basis) throw std::invalid_argument("component_operator needs a basis");
    Eigen::MatrixXcd m = std::visit([&](const auto& elem) { return build(elem, basis); }, c);
    return LinearOperator(basis, std::move(m), component_kind(c));
}

Circuit make_circuit(BasisPtr basis, std::vector<Component> elements) {
    if (!basis) throw std::invalid_argument("circuit needs a basis");
    bool seen_detector = false;
    std::set<std::string> detector_names;
    for (const auto& elem : elements) {
        component_operator(elem, basis);  // validates arms/levels/angles
        if (const auto* det = std::get_if<Detector>(&elem)) {
            seen_detector = true;
            if (!detector_names.insert(det->name).second) {
                throw std::invalid_argument("duplicate detector name '" + det->name + "'");
            }
        } else if (seen_detector) {
            throw std::invalid_argument("detectors must come last in a circuit");
        }
    }
    return Circuit{std::move(basis), std::move(elements)};
}

StateVector run_circuit(const Circuit& circuit, const StateVector& input) {
    if (!same_basis(circuit.basis, input.basis())) {
        throw std::invalid_argument("circuit and input state live in different bases");
    }
    StateVector state = input;
    for (const auto& elem : circuit.elements) {
        if (std::holds_alternative<Detector>(elem)) continue;
        state = apply(component_operator(elem, circuit.basis), state);
    }
    return state;
}

LinearOperator circuit_unitary(const Circuit& circuit) {
    LinearOperator u = LinearOperator::identity(circuit.basis);
    for (const auto& elem : circuit.elements) {
        if (std::holds_alternative<Detector>(elem)) continue;
        const LinearOperator op = component_operator(elem, circuit.basis);
        if (!op.is_unitary(1e-10)) {
            throw std::invalid_argument("circuit evolution is not unitary: component '" +
                                        component_kind(elem) + "' is projective");
        }
        u = op * u;
    }
    u.set_name("circuit");
    return u;
}

LinearOperator sigma_operator(const BasisPtr& basis, const std::string& which) {
    if (!basis) throw std::invalid_argument("sigma_operator needs a basis");
    if (which != "up" && which != "dn" && which != "z") {
        throw std::invalid_argument("sigma_operator takes up, dn, or z");
    }
    std::optional<std::size_t> ssys;
    for (std::size_t i = 0; i < basis->subsystem_count(); ++i) {
        if (basis->find_level(i, "s_up") && basis->find_level(i, "s_dn")) {
            if (ssys) throw std::invalid_argument("spin levels s_up/s_dn appear in more than one subsystem");
            ssys = i;
        }
    }
    if (!ssys) throw std::invalid_argument("basis has no subsystem with spin levels s_up and s_dn");
    const std::size_t iu = basis->level_index(*ssys, "s_up");
    const std::size_t id = basis->level_index(*ssys, "s_dn");

    const auto dim = static_cast<Eigen::Index>(basis->dimension());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < basis->dimension(); ++i) {
        const std::size_t coord = basis->coordinate(i, *ssys);
        double v = 0.0;
        if (which == "up") {
            v = coord == iu ? 1.0 : 0.0;
        } else if (which == "dn") {
            v = coord == id ? 1.0 : 0.0;
        } else {
            v = coord == iu ? 1.0 : (coord == id ? -1.0 : 0.0);
        }
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = v;
    }
    return LinearOperator(basis, std::move(m), "sigma(" + which + ")");
}

double detector_click_probability(const Circuit& circuit, const StateVector& input,
                                  const std::string& detector_name) {
    const Detector* found = nullptr;
    for (const auto& elem : circuit.elements) {
        if (const auto* det = std::get_if<Detector>(&elem)) {
            if (det->name == detector_name) {
                found = det;
                break;
            }
        }
    }
    if (!found) throw std::invalid_argument("unknown detector '" + detector_name + "'");
    const StateVector out = run_circuit(circuit, input);
    return apply(component_operator(*found, circuit.basis), out).norm_squared();
}

}  // namespace weakcat
