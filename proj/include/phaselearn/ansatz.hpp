#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaselearn/hamiltonian.hpp"
#include "phaselearn/statevector.hpp"
#include "phaselearn/threading.hpp"

namespace phaselearn {

using ParameterVector = std::vector<double>;

/// One two-qubit entangler on a nearest-neighbor pair with three parameter
/// slots: an Ising ZZ angle plus one RY angle per qubit.
struct EntanglerBlock {
    int low = 0;            // qubit i
    int high = 0;           // qubit i+1
    int slot_entangle = 0;  // alpha -> RZZ(low, high)
    int slot_ry_low = 0;    // beta  -> RY on low
    int slot_ry_high = 0;   // gamma -> RY on high
};

/// Brick-wall circuit: an initial RY on every qubit (slots 0..n-1), then
/// `depth` alternating layers of entangler blocks. Odd layers (1-based) pair
/// (0,1),(2,3),...; even layers pair (1,2),(3,4),.... Block slots are
/// assigned in layer-major, left-to-right order as (alpha, beta, gamma).
struct CheckerboardAnsatz {
    int n_qubits = 0;
    int depth = 0;
    std::vector<std::vector<EntanglerBlock>> layers;
    int n_params = 0;
};

inline CheckerboardAnsatz build_checkerboard(int n, int depth) {
    if (n < 2) throw std::invalid_argument("checkerboard ansatz needs at least 2 qubits");
    if (depth < 1) throw std::invalid_argument("checkerboard depth must be >= 1");
    CheckerboardAnsatz ansatz;
    ansatz.n_qubits = n;
    ansatz.depth = depth;
    int slot = n;
    for (int layer = 1; layer <= depth; ++layer) {
        std::vector<EntanglerBlock> blocks;
        const int start = (layer % 2 == 1) ? 0 : 1;
        for (int i = start; i + 1 < n; i += 2) {
            blocks.push_back({i, i + 1, slot, slot + 1, slot + 2});
            slot += 3;
        }
        ansatz.layers.push_back(std::move(blocks));
    }
    ansatz.n_params = slot;
    return ansatz;
}

/// The prepared circuit for a given parameter vector. Each block applies a
/// CNOT-framed RY pair followed by the Ising RZZ:
///   CNOT(i,i+1), RY(beta) on i, RY(gamma) on i+1, CNOT(i,i+1), RZZ(alpha).
/// All parametrized gates are exp(-i*theta*P/2), so the parameter-shift rule
/// applies to every slot; at theta = 0 the circuit is the identity.
inline Circuit ansatz_circuit(const CheckerboardAnsatz& ansatz, std::span<const double> theta) {
    if (theta.size() != static_cast<std::size_t>(ansatz.n_params)) {
        throw std::invalid_argument("parameter vector has length " +
                                    std::to_string(theta.size()) + ", ansatz needs " +
                                    std::to_string(ansatz.n_params));
    }
    for (double v : theta) {
        if (!std::isfinite(v)) throw std::invalid_argument("parameters must be finite");
    }
    Circuit circuit(ansatz.n_qubits);
    for (int q = 0; q < ansatz.n_qubits; ++q) {
        circuit.add(GateOp::ry(q, theta[static_cast<std::size_t>(q)]));
    }
    for (const auto& layer : ansatz.layers) {
        for (const auto& block : layer) {
            circuit.add(GateOp::cnot(block.low, block.high));
            circuit.add(GateOp::ry(block.low, theta[static_cast<std::size_t>(block.slot_ry_low)]));
            circuit.add(
                GateOp::ry(block.high, theta[static_cast<std::size_t>(block.slot_ry_high)]));
            circuit.add(GateOp::cnot(block.low, block.high));
            circuit.add(GateOp::rzz(block.low, block.high,
                                    theta[static_cast<std::size_t>(block.slot_entangle)]));
        }
    }
    return circuit;
}

inline StateVector prepare_state(const CheckerboardAnsatz& ansatz,
                                 std::span<const double> theta) {
    StateVector state(ansatz.n_qubits);
    apply_circuit(state, ansatz_circuit(ansatz, theta));
    return state;
}

inline double energy_of(const CheckerboardAnsatz& ansatz, std::span<const double> theta,
                        const Hamiltonian& ham) {
    return energy(ham, prepare_state(ansatz, theta));
}

/// dE/dtheta_k = [E(theta + (pi/2) e_k) - E(theta - (pi/2) e_k)] / 2.
/// The 2*n_params evaluations run concurrently, each on its own state copy;
/// slot k is written by exactly one task.
inline std::vector<double> gradient_parameter_shift(const CheckerboardAnsatz& ansatz,
                                                    std::span<const double> theta,
                                                    const Hamiltonian& ham) {
    if (theta.size() != static_cast<std::size_t>(ansatz.n_params)) {
        throw std::invalid_argument("parameter vector has length " +
                                    std::to_string(theta.size()) + ", ansatz needs " +
                                    std::to_string(ansatz.n_params));
    }
    const double shift = std::numbers::pi / 2.0;
    std::vector<double> grad(theta.size());
    parallel_tasks(theta.size(), [&](std::size_t k) {
        std::vector<double> shifted(theta.begin(), theta.end());
        shifted[k] = theta[k] + shift;
        const double plus = energy_of(ansatz, shifted, ham);
        shifted[k] = theta[k] - shift;
        const double minus = energy_of(ansatz, shifted, ham);
        grad[k] = (plus - minus) / 2.0;
    });
    return grad;
}

} // namespace phaselearn
