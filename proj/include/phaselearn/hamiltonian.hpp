#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phaselearn/pauli.hpp"
#include "phaselearn/statevector.hpp"
#include "phaselearn/threading.hpp"

namespace phaselearn {

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;
};

enum class ModelKind { TFIM, XXZ, Custom };

inline std::string model_name(ModelKind model) {
    switch (model) {
        case ModelKind::TFIM: return "tfim";
        case ModelKind::XXZ: return "xxz";
        case ModelKind::Custom: return "custom";
    }
    return "custom";
}

inline ModelKind model_from_name(const std::string& name) {
    if (name == "tfim") return ModelKind::TFIM;
    if (name == "xxz") return ModelKind::XXZ;
    if (name == "custom") return ModelKind::Custom;
    throw std::invalid_argument("unknown model '" + name + "'");
}

/// Weighted sum of Pauli strings. Immutable after construction; shareable
/// across threads.
struct Hamiltonian {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;
    ModelKind model = ModelKind::Custom;
    double coupling_a = 0.0;  // J for TFIM, J_perp for XXZ
    double coupling_b = 0.0;  // h for TFIM, J_z for XXZ

    double coefficient_norm() const {
        double s = 0.0;
        for (const auto& t : terms) s += std::abs(t.coefficient);
        return s;
    }
};

/// H = j * sum_i Z_i Z_{i+1} + h * sum_i X_i on an open chain
/// (periodic adds the wrap-around bond).
inline Hamiltonian build_tfim(int n, double j, double h, bool periodic = false) {
    if (n < 2) throw std::invalid_argument("TFIM needs at least 2 sites");
    if (j <= 0.0) throw std::domain_error("TFIM coupling j must be positive");
    if (h < 0.0) throw std::domain_error("TFIM field h must be non-negative");
    Hamiltonian ham;
    ham.n_qubits = n;
    ham.model = ModelKind::TFIM;
    ham.coupling_a = j;
    ham.coupling_b = h;
    const int bonds = periodic ? n : n - 1;
    for (int i = 0; i < bonds; ++i) {
        ham.terms.push_back(
            {j, PauliString::two_site(n, i, Pauli::Z, (i + 1) % n, Pauli::Z)});
    }
    if (h > 0.0) {
        for (int i = 0; i < n; ++i) {
            ham.terms.push_back({h, PauliString::single(n, i, Pauli::X)});
        }
    }
    return ham;
}

/// H = -sum_i [ j_perp * (X_i X_{i+1} + Y_i Y_{i+1}) + j_z * Z_i Z_{i+1} ]
/// on an open chain; the minus sign covers all three couplings of a bond.
inline Hamiltonian build_xxz(int n, double j_perp, double j_z, bool periodic = false) {
    if (n < 2) throw std::invalid_argument("XXZ needs at least 2 sites");
    Hamiltonian ham;
    ham.n_qubits = n;
    ham.model = ModelKind::XXZ;
    ham.coupling_a = j_perp;
    ham.coupling_b = j_z;
    const int bonds = periodic ? n : n - 1;
    for (int i = 0; i < bonds; ++i) {
        const int k = (i + 1) % n;
        if (j_perp != 0.0) {
            ham.terms.push_back({-j_perp, PauliString::two_site(n, i, Pauli::X, k, Pauli::X)});
            ham.terms.push_back({-j_perp, PauliString::two_site(n, i, Pauli::Y, k, Pauli::Y)});
        }
        if (j_z != 0.0) {
            ham.terms.push_back({-j_z, PauliString::two_site(n, i, Pauli::Z, k, Pauli::Z)});
        }
    }
    if (ham.terms.empty()) throw std::domain_error("XXZ couplings cannot both be zero");
    return ham;
}

/// sum_k coeff_k * <psi|P_k|psi>. Terms are evaluated independently and
/// combined in term order, so the value does not depend on the worker count.
inline double energy(const Hamiltonian& ham, const StateVector& state) {
    if (ham.n_qubits != state.n_qubits()) {
        throw std::invalid_argument("Hamiltonian is for " + std::to_string(ham.n_qubits) +
                                    " qubits, state has " + std::to_string(state.n_qubits()));
    }
    std::vector<double> values(ham.terms.size());
    parallel_tasks(ham.terms.size(), [&](std::size_t t) {
        values[t] = ham.terms[t].coefficient * pauli_expectation(state, ham.terms[t].string);
    });
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

/// Loads {"n": int, "terms": [{"coeff": float, "ops": "IXZZ..."}]}.
/// In "ops" the leftmost letter acts on qubit 0.
inline Hamiltonian hamiltonian_from_json(const nlohmann::json& doc) {
    Hamiltonian ham;
    ham.n_qubits = doc.at("n").get<int>();
    if (ham.n_qubits < 1 || ham.n_qubits > StateVector::kMaxQubits) {
        throw std::invalid_argument("Hamiltonian register size out of range");
    }
    for (const auto& term : doc.at("terms")) {
        PauliTerm t;
        t.coefficient = term.at("coeff").get<double>();
        if (!std::isfinite(t.coefficient) || t.coefficient == 0.0) {
            throw std::invalid_argument("term coefficients must be finite and nonzero");
        }
        t.string = PauliString::from_string(term.at("ops").get<std::string>());
        if (t.string.size() != static_cast<std::size_t>(ham.n_qubits)) {
            throw std::invalid_argument("term '" + term.at("ops").get<std::string>() +
                                        "' does not match register size");
        }
        ham.terms.push_back(std::move(t));
    }
    return ham;
}

} // namespace phaselearn
