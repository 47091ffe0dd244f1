#include "phaselearn/statevector.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "phaselearn/threading.hpp"
#include "test_support.hpp"

using namespace phaselearn;

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

TEST(ZeroState, OneQubit) {
    const StateVector s(1);
    EXPECT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], Amplitude(1.0, 0.0));
    EXPECT_EQ(s[1], Amplitude(0.0, 0.0));
}

TEST(ZeroState, TwoQubits) {
    const StateVector s(2);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0], Amplitude(1.0, 0.0));
    for (std::size_t k = 1; k < 4; ++k) EXPECT_EQ(s[k], Amplitude(0.0, 0.0));
}

TEST(ZeroState, RejectsOutOfRangeSizes) {
    EXPECT_THROW(StateVector(0), std::invalid_argument);
    EXPECT_THROW(StateVector(25), std::invalid_argument);
    EXPECT_NO_THROW(StateVector(1));
}

TEST(ApplyGate, HadamardOnZero) {
    StateVector s(1);
    s.apply_gate(GateOp::h(0));
    EXPECT_NEAR(s[0].real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(s[1].real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(std::abs(s[0].imag()) + std::abs(s[1].imag()), 0.0, 1e-15);
}

TEST(ApplyGate, RyPiFlipsZero) {
    StateVector s(1);
    s.apply_gate(GateOp::ry(0, std::numbers::pi));
    EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);  // component 1 = sin(pi/2)
}

TEST(ApplyGate, RzzIsDiagonalPhase) {
    const double theta = 0.73;
    for (std::size_t basis = 0; basis < 4; ++basis) {
        StateVector s(2);
        if (basis & 1) s.apply_gate(GateOp::x(0));
        if (basis & 2) s.apply_gate(GateOp::x(1));
        const auto before = basis_probabilities(s);
        s.apply_gate(GateOp::rzz(0, 1, theta));
        const auto after = basis_probabilities(s);
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(before[k], after[k], 1e-15);
        const bool aligned = ((basis & 1) != 0) == ((basis & 2) != 0);
        const double expected_phase = aligned ? -theta / 2 : theta / 2;
        EXPECT_NEAR(std::arg(s[basis]), expected_phase, 1e-12);
    }
}

TEST(ApplyGate, RejectsInvalidTargets) {
    StateVector s(2);
    EXPECT_THROW(s.apply_gate(GateOp::h(2)), std::out_of_range);
    EXPECT_THROW(s.apply_gate(GateOp::h(-1)), std::out_of_range);
    EXPECT_THROW(s.apply_gate(GateOp::rzz(0, 2, 0.1)), std::out_of_range);
    EXPECT_THROW(GateOp::rzz(1, 1, 0.1), std::invalid_argument);
    EXPECT_THROW(GateOp::cnot(0, 0), std::invalid_argument);
}

TEST(ApplyGate, CnotMovesAmplitude) {
    StateVector s(2);
    s.apply_gate(GateOp::x(0));        // |01> in q1 q0 order: basis index 1
    s.apply_gate(GateOp::cnot(0, 1));  // control q0 fires
    EXPECT_NEAR(std::abs(s[3]), 1.0, 1e-15);
}

TEST(ApplyCircuit, EmptyCircuitIsIdentity) {
    StateVector s = testsupport::random_state(3, 99);
    const StateVector before = s;
    apply_circuit(s, Circuit(3));
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_EQ(s[k], before[k]);
}

TEST(ApplyCircuit, HadamardTwiceIsIdentity) {
    StateVector s(1);
    Circuit c(1);
    c.add(GateOp::h(0)).add(GateOp::h(0));
    apply_circuit(s, c);
    EXPECT_NEAR(std::abs(s[0] - Amplitude(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(s[1]), 0.0, 1e-12);
}

TEST(ApplyCircuit, RejectsQubitCountMismatch) {
    StateVector s(3);
    EXPECT_THROW(apply_circuit(s, Circuit(2)), std::invalid_argument);
}

TEST(ApplyCircuit, RandomCircuitPreservesNorm) {
    StateVector s(8);
    apply_circuit(s, testsupport::random_circuit(8, 50, 1234));
    EXPECT_NEAR(s.norm(), 1.0, 1e-10);
}

TEST(PauliExpectation, ComputationalBasisValues) {
    const StateVector zero(1);
    EXPECT_NEAR(pauli_expectation(zero, PauliString::from_string("Z")), 1.0, 1e-15);
    EXPECT_NEAR(pauli_expectation(zero, PauliString::from_string("X")), 0.0, 1e-15);
}

TEST(PauliExpectation, AntiAlignedBellPair) {
    StateVector s(2);
    s[0] = {0.0, 0.0};
    s[1] = {kInvSqrt2, 0.0};
    s[2] = {kInvSqrt2, 0.0};
    EXPECT_NEAR(pauli_expectation(s, PauliString::from_string("ZZ")), -1.0, 1e-15);
}

TEST(PauliExpectation, RejectsLengthMismatch) {
    const StateVector s(2);
    EXPECT_THROW(pauli_expectation(s, PauliString::from_string("Z")), std::invalid_argument);
}

TEST(BasisProbabilities, SimpleStates) {
    const StateVector zero(1);
    const auto p0 = basis_probabilities(zero);
    EXPECT_EQ(p0[0], 1.0);
    EXPECT_EQ(p0[1], 0.0);

    StateVector plus(1);
    plus.apply_gate(GateOp::h(0));
    const auto p1 = basis_probabilities(plus);
    EXPECT_NEAR(p1[0], 0.5, 1e-15);
    EXPECT_NEAR(p1[1], 0.5, 1e-15);
}

TEST(BasisProbabilities, ThreeQubitUniform) {
    StateVector s(3);
    for (int q = 0; q < 3; ++q) {
        s.apply_gate(GateOp::h(q));
        s.apply_gate(GateOp::ry(q, 0.0));
    }
    const auto probs = basis_probabilities(s);
    double sum = 0.0;
    for (double p : probs) {
        EXPECT_NEAR(p, 0.125, 1e-15);
        sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
}

// Dense-matrix oracle: every kernel against explicit 2^n x 2^n algebra.
TEST(GateMatrixOracle, AllKindsMatchDenseReference) {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        StateVector s = testsupport::random_state(n, rng());
        GateOp gate = n >= 2 ? testsupport::random_gate(n, rng)
                             : GateOp::ry(0, 1.1 * static_cast<double>(trial));
        const auto reference = testsupport::gate_matrix(gate, n) * testsupport::to_eigen(s);
        s.apply_gate(gate);
        for (std::size_t k = 0; k < s.size(); ++k) {
            EXPECT_NEAR(std::abs(s[k] - reference(static_cast<Eigen::Index>(k))), 0.0, 1e-12)
                << "trial " << trial << " amplitude " << k;
        }
    }
}

TEST(NormPreservation, TwelveQubitRandomCircuit) {
    StateVector s(12);
    apply_circuit(s, testsupport::random_circuit(12, 120, 777));
    EXPECT_NEAR(s.norm(), 1.0, 1e-10);
}

TEST(Determinism, ThreadCountDoesNotChangeAmplitudes) {
    const Circuit circuit = testsupport::random_circuit(10, 80, 2024);

    set_num_threads(1);
    StateVector sequential(10);
    apply_circuit(sequential, circuit);
    const double e1 = pauli_expectation(sequential, PauliString::from_string("ZZIIIIIIII"));

    set_num_threads(4);
    StateVector threaded(10);
    apply_circuit(threaded, circuit);
    const double e4 = pauli_expectation(threaded, PauliString::from_string("ZZIIIIIIII"));
    set_num_threads(1);

    for (std::size_t k = 0; k < sequential.size(); ++k) {
        EXPECT_EQ(sequential[k].real(), threaded[k].real()) << "amplitude " << k;
        EXPECT_EQ(sequential[k].imag(), threaded[k].imag()) << "amplitude " << k;
    }
    EXPECT_EQ(e1, e4);
}

TEST(Unitarity, InnerProductsPreservedOver200Gates) {
    std::mt19937_64 rng(31337);
    StateVector u = testsupport::random_state(4, 11);
    StateVector v = testsupport::random_state(4, 22);
    const Amplitude original = inner_product(u, v);
    for (int g = 0; g < 200; ++g) {
        const GateOp gate = testsupport::random_gate(4, rng);
        u.apply_gate(gate);
        v.apply_gate(gate);
        EXPECT_NEAR(std::abs(inner_product(u, v) - original), 0.0, 1e-10) << "gate " << g;
    }
}

} // namespace
