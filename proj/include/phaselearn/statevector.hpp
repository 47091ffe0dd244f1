#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaselearn/pauli.hpp"
#include "phaselearn/threading.hpp"

namespace phaselearn {

using Amplitude = std::complex<double>;

enum class GateKind { H, X, RY, RZ, RZZ, CNOT };

/// A single gate. Qubit indices are little-endian: qubit 0 is the least
/// significant bit of a basis index. Rotations follow exp(-i*angle*P/2).
struct GateOp {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;         // second qubit for RZZ/CNOT, -1 otherwise
    double angle = 0.0;  // meaningful for RY/RZ/RZZ only

    static GateOp h(int q) { return {GateKind::H, q}; }
    static GateOp x(int q) { return {GateKind::X, q}; }
    static GateOp ry(int q, double angle) { return {GateKind::RY, q, -1, angle}; }
    static GateOp rz(int q, double angle) { return {GateKind::RZ, q, -1, angle}; }
    static GateOp rzz(int a, int b, double angle) {
        if (a == b) throw std::invalid_argument("rzz targets must be distinct");
        return {GateKind::RZZ, a, b, angle};
    }
    static GateOp cnot(int control, int target) {
        if (control == target) throw std::invalid_argument("cnot targets must be distinct");
        return {GateKind::CNOT, control, target};
    }

    bool two_qubit() const { return kind == GateKind::RZZ || kind == GateKind::CNOT; }
};

namespace detail {

// Expands a (n-1)-bit index into an n-bit index with a zero at `bit`.
inline std::size_t insert_zero_bit(std::size_t k, int bit) {
    const std::size_t low = (std::size_t{1} << bit) - 1;
    return ((k & ~low) << 1) | (k & low);
}

// Chunked dispatch for elementwise kernels. Each index is written by exactly
// one task and the update is a pure function of the pre-gate amplitudes, so
// results are bit-identical for every worker count.
template <class Body>
void parallel_index_space(std::size_t length, Body&& body) {
    constexpr std::size_t kMinParallel = std::size_t{1} << 12;
    if (length < kMinParallel || num_threads() <= 1 || detail::inside_task()) {
        body(std::size_t{0}, length);
        return;
    }
    const std::size_t chunks = reduction_chunk_count(length);
    parallel_tasks(chunks, [&](std::size_t c) {
        body(length * c / chunks, length * (c + 1) / chunks);
    });
}

} // namespace detail

/// Dense amplitude vector of an n-qubit register (n in 1..=24).
class StateVector {
public:
    static constexpr int kMaxQubits = 24;

    explicit StateVector(int n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits < 1 || n_qubits > kMaxQubits) {
            throw std::invalid_argument("n_qubits must be in [1, " +
                                        std::to_string(kMaxQubits) + "]");
        }
        amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
        amps_[0] = Amplitude{1.0, 0.0};
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t size() const { return amps_.size(); }

    Amplitude& operator[](std::size_t k) { return amps_[k]; }
    const Amplitude& operator[](std::size_t k) const { return amps_[k]; }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> amplitudes() { return amps_; }

    double norm() const {
        const double sq = parallel_reduce<double>(amps_.size(), [&](std::size_t b, std::size_t e) {
            double acc = 0.0;
            for (std::size_t k = b; k < e; ++k) acc += std::norm(amps_[k]);
            return acc;
        });
        return std::sqrt(sq);
    }

    void apply_gate(const GateOp& gate) {
        check_qubit(gate.q0);
        if (gate.two_qubit()) {
            check_qubit(gate.q1);
            if (gate.q0 == gate.q1) throw std::out_of_range("gate targets must be distinct");
        }
        switch (gate.kind) {
            case GateKind::H: apply_h(gate.q0); break;
            case GateKind::X: apply_x(gate.q0); break;
            case GateKind::RY: apply_ry(gate.q0, gate.angle); break;
            case GateKind::RZ: apply_rz(gate.q0, gate.angle); break;
            case GateKind::RZZ: apply_rzz(gate.q0, gate.q1, gate.angle); break;
            case GateKind::CNOT: apply_cnot(gate.q0, gate.q1); break;
        }
    }

private:
    void check_qubit(int q) const {
        if (q < 0 || q >= n_qubits_) {
            throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
        }
    }

    // Applies a real 2x2 matrix [[m00, m01], [m10, m11]] on `target`.
    void apply_real_1q(int target, double m00, double m01, double m10, double m11) {
        const std::size_t mask = std::size_t{1} << target;
        detail::parallel_index_space(amps_.size() >> 1, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                const std::size_t i0 = detail::insert_zero_bit(k, target);
                const std::size_t i1 = i0 | mask;
                const Amplitude a0 = amps_[i0];
                const Amplitude a1 = amps_[i1];
                amps_[i0] = m00 * a0 + m01 * a1;
                amps_[i1] = m10 * a0 + m11 * a1;
            }
        });
    }

    void apply_h(int target) {
        const double r = 1.0 / std::sqrt(2.0);
        apply_real_1q(target, r, r, r, -r);
    }

    void apply_x(int target) {
        const std::size_t mask = std::size_t{1} << target;
        detail::parallel_index_space(amps_.size() >> 1, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                const std::size_t i0 = detail::insert_zero_bit(k, target);
                std::swap(amps_[i0], amps_[i0 | mask]);
            }
        });
    }

    void apply_ry(int target, double angle) {
        const double c = std::cos(angle / 2.0);
        const double s = std::sin(angle / 2.0);
        apply_real_1q(target, c, -s, s, c);
    }

    void apply_rz(int target, double angle) {
        const Amplitude p0 = std::polar(1.0, -angle / 2.0);
        const Amplitude p1 = std::polar(1.0, +angle / 2.0);
        const std::size_t mask = std::size_t{1} << target;
        detail::parallel_index_space(amps_.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                amps_[k] *= (k & mask) ? p1 : p0;
            }
        });
    }

    void apply_rzz(int a, int b, double angle) {
        // Diagonal: basis states with aligned bits pick up e^{-i angle/2},
        // anti-aligned ones e^{+i angle/2}.
        const Amplitude aligned = std::polar(1.0, -angle / 2.0);
        const Amplitude anti = std::polar(1.0, +angle / 2.0);
        const std::size_t ma = std::size_t{1} << a;
        const std::size_t mb = std::size_t{1} << b;
        detail::parallel_index_space(amps_.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t k = lo; k < hi; ++k) {
                const bool parity = ((k & ma) != 0) != ((k & mb) != 0);
                amps_[k] *= parity ? anti : aligned;
            }
        });
    }

    void apply_cnot(int control, int target) {
        const std::size_t cmask = std::size_t{1} << control;
        const std::size_t tmask = std::size_t{1} << target;
        detail::parallel_index_space(amps_.size() >> 1, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                const std::size_t i0 = detail::insert_zero_bit(k, target);
                if (i0 & cmask) std::swap(amps_[i0], amps_[i0 | tmask]);
            }
        });
    }

    int n_qubits_;
    std::vector<Amplitude> amps_;
};

/// Ordered gate list bound to a register size.
struct Circuit {
    int n_qubits = 0;
    std::vector<GateOp> ops;

    explicit Circuit(int n) : n_qubits(n) {}

    Circuit& add(const GateOp& op) {
        ops.push_back(op);
        return *this;
    }
};

inline StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

inline void apply_circuit(StateVector& state, const Circuit& circuit) {
    if (circuit.n_qubits != state.n_qubits()) {
        throw std::invalid_argument("circuit is for " + std::to_string(circuit.n_qubits) +
                                    " qubits, state has " + std::to_string(state.n_qubits()));
    }
    for (const GateOp& op : circuit.ops) state.apply_gate(op);
}

/// <psi|P|psi> before taking the real part. The imaginary part is a
/// numerical-noise witness for Hermitian P.
inline Amplitude pauli_expectation_raw(const StateVector& state, const PauliString& pauli) {
    if (pauli.size() != static_cast<std::size_t>(state.n_qubits())) {
        throw std::invalid_argument("Pauli string length " + std::to_string(pauli.size()) +
                                    " does not match register size " +
                                    std::to_string(state.n_qubits()));
    }
    const auto m = pauli.masks();
    const Amplitude sum =
        parallel_reduce<Amplitude>(state.size(), [&](std::size_t b, std::size_t e) {
            Amplitude acc{0.0, 0.0};
            for (std::size_t j = b; j < e; ++j) {
                const std::size_t src = j ^ m.flip;
                const double sign = (std::popcount(src & m.phase) & 1) ? -1.0 : 1.0;
                acc += std::conj(state[j]) * (sign * state[src]);
            }
            return acc;
        });
    // i^y_count, applied once outside the sum.
    static constexpr Amplitude kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kIPow[m.y_count & 3] * sum;
}

inline double pauli_expectation(const StateVector& state, const PauliString& pauli) {
    return pauli_expectation_raw(state, pauli).real();
}

inline std::vector<double> basis_probabilities(const StateVector& state) {
    std::vector<double> probs(state.size());
    detail::parallel_index_space(state.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) probs[k] = std::norm(state[k]);
    });
    return probs;
}

inline Amplitude inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("inner product requires equal register sizes");
    }
    return parallel_reduce<Amplitude>(a.size(), [&](std::size_t lo, std::size_t hi) {
        Amplitude acc{0.0, 0.0};
        for (std::size_t k = lo; k < hi; ++k) acc += std::conj(a[k]) * b[k];
        return acc;
    });
}

} // namespace phaselearn
