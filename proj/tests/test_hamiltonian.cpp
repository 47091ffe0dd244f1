#include "phaselearn/hamiltonian.hpp"

#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "phaselearn/exact_ground.hpp"
#include "test_support.hpp"

using namespace phaselearn;

namespace {

const double kSqrt5 = std::sqrt(5.0);

TEST(BuildTfim, BondOnlyChain) {
    const Hamiltonian ham = build_tfim(2, 1.0, 0.0);
    ASSERT_EQ(ham.terms.size(), 1u);
    EXPECT_EQ(ham.terms[0].coefficient, 1.0);
    EXPECT_EQ(ham.terms[0].string.to_string(), "ZZ");
}

TEST(BuildTfim, ThreeSiteCoefficients) {
    const Hamiltonian ham = build_tfim(3, 1.0, 0.5);
    ASSERT_EQ(ham.terms.size(), 5u);
    const double expected[5] = {1.0, 1.0, 0.5, 0.5, 0.5};
    for (std::size_t t = 0; t < 5; ++t) EXPECT_EQ(ham.terms[t].coefficient, expected[t]);
    EXPECT_EQ(ham.terms[0].string.to_string(), "ZZI");
    EXPECT_EQ(ham.terms[1].string.to_string(), "IZZ");
    EXPECT_EQ(ham.terms[2].string.to_string(), "XII");
}

TEST(BuildTfim, RejectsBadArguments) {
    EXPECT_THROW(build_tfim(1, 1.0, 0.5), std::invalid_argument);
    EXPECT_THROW(build_tfim(4, 0.0, 0.5), std::domain_error);
    EXPECT_THROW(build_tfim(4, -1.0, 0.5), std::domain_error);
}

TEST(BuildTfim, CriticalPointGroundEnergy) {
    const Hamiltonian ham = build_tfim(2, 1.0, 1.0);
    EXPECT_NEAR(exact_ground(ham).energy, -kSqrt5, 1e-9);
    EXPECT_NEAR(testsupport::dense_ground_energy(ham), -kSqrt5, 1e-12);
}

TEST(BuildXxz, TwoSiteTerms) {
    const Hamiltonian ham = build_xxz(2, 1.0, -1.0);
    ASSERT_EQ(ham.terms.size(), 3u);
    EXPECT_EQ(ham.terms[0].coefficient, -1.0);
    EXPECT_EQ(ham.terms[0].string.to_string(), "XX");
    EXPECT_EQ(ham.terms[1].coefficient, -1.0);
    EXPECT_EQ(ham.terms[1].string.to_string(), "YY");
    EXPECT_EQ(ham.terms[2].coefficient, 1.0);
    EXPECT_EQ(ham.terms[2].string.to_string(), "ZZ");
}

TEST(BuildXxz, TwoSiteGroundState) {
    const GroundState ground = exact_ground(build_xxz(2, 1.0, -1.0));
    EXPECT_NEAR(ground.energy, -3.0, 1e-9);
    // Ground state (|01> + |10>)/sqrt(2): all weight on anti-aligned states.
    const auto probs = basis_probabilities(ground.state);
    EXPECT_NEAR(probs[1] + probs[2], 1.0, 1e-9);
    EXPECT_NEAR(probs[0] + probs[3], 0.0, 1e-9);
}

TEST(BuildXxz, IsingOnlyBond) {
    const Hamiltonian ham = build_xxz(2, 0.0, -1.0);
    ASSERT_EQ(ham.terms.size(), 1u);
    EXPECT_NEAR(exact_ground(ham).energy, -1.0, 1e-9);
}

TEST(BuildXxz, RejectsBadArguments) {
    EXPECT_THROW(build_xxz(1, 1.0, -1.0), std::invalid_argument);
    EXPECT_THROW(build_xxz(3, 0.0, 0.0), std::domain_error);
}

TEST(TermCounts, MatchChainLength) {
    for (int n = 2; n <= 10; n += 2) {
        EXPECT_EQ(build_tfim(n, 1.0, 0.5).terms.size(), static_cast<std::size_t>(2 * n - 1));
        EXPECT_EQ(build_xxz(n, 1.0, -0.8).terms.size(), static_cast<std::size_t>(3 * (n - 1)));
        EXPECT_EQ(build_tfim(n, 1.0, 0.5, true).terms.size(), static_cast<std::size_t>(2 * n));
        EXPECT_EQ(build_xxz(n, 1.0, -0.8, true).terms.size(), static_cast<std::size_t>(3 * n));
    }
}

TEST(Energy, ComputationalBasisTfim) {
    const Hamiltonian ham = build_tfim(4, 1.0, 0.5);
    const StateVector zero(4);
    EXPECT_NEAR(energy(ham, zero), 3.0, 1e-12);
}

TEST(Energy, ExactGroundStateEnergyAgrees) {
    const Hamiltonian ham = build_tfim(2, 1.0, 1.0);
    const GroundState ground = exact_ground(ham);
    EXPECT_NEAR(energy(ham, ground.state), -kSqrt5, 1e-10);
}

TEST(Energy, BoundedByCoefficientNorm) {
    const Hamiltonian ham = build_xxz(5, 1.0, -1.3);
    const double bound = ham.coefficient_norm();
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const StateVector s = testsupport::random_state(5, 1000 + seed);
        const double e = energy(ham, s);
        EXPECT_LE(std::abs(e), bound + 1e-9);
    }
}

TEST(Energy, RejectsDimensionMismatch) {
    const Hamiltonian ham = build_tfim(3, 1.0, 1.0);
    const StateVector s(4);
    EXPECT_THROW(energy(ham, s), std::invalid_argument);
}

TEST(Energy, HermitianExpectationsHaveNoImaginaryPart) {
    const Hamiltonian tfim = build_tfim(4, 1.0, 0.9);
    const Hamiltonian xxz = build_xxz(4, 1.0, -1.1);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const StateVector s = testsupport::random_state(4, 2000 + seed);
        for (const Hamiltonian* ham : {&tfim, &xxz}) {
            Amplitude raw{0.0, 0.0};
            for (const auto& term : ham->terms) {
                raw += term.coefficient * pauli_expectation_raw(s, term.string);
            }
            EXPECT_NEAR(raw.imag(), 0.0, 1e-12);
        }
    }
}

TEST(ExactGround, DegenerateDiagonalCase) {
    EXPECT_NEAR(exact_ground(build_tfim(2, 1.0, 0.0)).energy, -1.0, 1e-9);
}

TEST(ExactGround, RejectsLargeRegisters) {
    EXPECT_THROW(exact_ground(build_tfim(13, 1.0, 1.0)), std::invalid_argument);
}

TEST(ExactGround, ResidualMeetsTolerance) {
    const Hamiltonian ham = build_xxz(6, 1.0, -0.7);
    const GroundState ground = exact_ground(ham);
    std::vector<Amplitude> hv(ground.state.size());
    apply_hamiltonian(ham, ground.state.amplitudes(), hv);
    double residual = 0.0;
    for (std::size_t k = 0; k < hv.size(); ++k) {
        residual += std::norm(hv[k] - ground.energy * ground.state[k]);
    }
    EXPECT_LE(std::sqrt(residual), 1e-8);
}

TEST(ExactGround, AgreesWithDenseDiagonalizationUpToSixQubits) {
    const Hamiltonian cases[] = {
        build_tfim(4, 1.0, 0.7),  build_tfim(5, 1.0, 1.0), build_tfim(6, 1.0, 1.4),
        build_xxz(4, 1.0, -1.5), build_xxz(6, 1.0, -0.4),
    };
    for (const Hamiltonian& ham : cases) {
        EXPECT_NEAR(exact_ground(ham).energy, testsupport::dense_ground_energy(ham), 1e-8);
    }
}

TEST(ExactGround, VariationalBoundHolds) {
    const Hamiltonian ham = build_tfim(6, 1.0, 1.1);
    const double ground = exact_ground(ham).energy;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const StateVector s = testsupport::random_state(6, 3000 + seed);
        EXPECT_GE(energy(ham, s), ground - 1e-8);
    }
}

TEST(JsonLoad, RoundTripsCustomHamiltonian) {
    const auto doc = nlohmann::json::parse(R"({
        "n": 4,
        "terms": [
            {"coeff": 0.5, "ops": "IXZZ"},
            {"coeff": -1.25, "ops": "YIIY"}
        ]
    })");
    const Hamiltonian ham = hamiltonian_from_json(doc);
    EXPECT_EQ(ham.n_qubits, 4);
    ASSERT_EQ(ham.terms.size(), 2u);
    EXPECT_EQ(ham.terms[0].string.to_string(), "IXZZ");
    EXPECT_EQ(ham.terms[1].coefficient, -1.25);

    const StateVector s = testsupport::random_state(4, 5);
    const double direct = 0.5 * pauli_expectation(s, PauliString::from_string("IXZZ")) -
                          1.25 * pauli_expectation(s, PauliString::from_string("YIIY"));
    EXPECT_NEAR(energy(ham, s), direct, 1e-12);
}

TEST(JsonLoad, RejectsMalformedDocuments) {
    EXPECT_THROW(
        hamiltonian_from_json(nlohmann::json::parse(
            R"({"n": 2, "terms": [{"coeff": 1.0, "ops": "QA"}]})")),
        std::invalid_argument);
    EXPECT_THROW(
        hamiltonian_from_json(nlohmann::json::parse(
            R"({"n": 3, "terms": [{"coeff": 1.0, "ops": "ZZ"}]})")),
        std::invalid_argument);
    EXPECT_THROW(
        hamiltonian_from_json(nlohmann::json::parse(
            R"({"n": 2, "terms": [{"coeff": 0.0, "ops": "ZZ"}]})")),
        std::invalid_argument);
}

} // namespace
