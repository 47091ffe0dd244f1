#include "phaselearn/vqe.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "phaselearn/exact_ground.hpp"
#include "phaselearn/rng.hpp"

using namespace phaselearn;

namespace {

TEST(RunVqe, TwoQubitCriticalTfim) {
    const Hamiltonian ham = build_tfim(2, 1.0, 1.0);
    const CheckerboardAnsatz ansatz = build_checkerboard(2, 1);
    OptimizerConfig config;
    config.seed = 7;
    const VqeResult result = run_vqe(ansatz, ham, config);
    EXPECT_NEAR(result.final_energy, -std::sqrt(5.0), 1e-3);
    EXPECT_TRUE(result.converged);
    EXPECT_NEAR(energy_of(ansatz, result.theta_opt, ham), result.final_energy, 1e-12);
}

TEST(RunVqe, EightQubitLowFieldAccuracy) {
    const Hamiltonian ham = build_tfim(8, 1.0, 0.2);
    const CheckerboardAnsatz ansatz = build_checkerboard(8, 4);
    OptimizerConfig config;
    config.seed = 3;
    const VqeResult result = run_vqe(ansatz, ham, config);
    const double exact = exact_ground(ham).energy;
    EXPECT_LE(std::abs(result.final_energy - exact) / std::abs(exact), 1e-2);
}

TEST(RunVqe, IterationCapShortCircuits) {
    const Hamiltonian ham = build_tfim(3, 1.0, 0.7);
    const CheckerboardAnsatz ansatz = build_checkerboard(3, 2);
    OptimizerConfig config;
    config.seed = 11;
    config.max_iters = 1;
    const VqeResult result = run_vqe(ansatz, ham, config);
    EXPECT_FALSE(result.converged);
    EXPECT_EQ(result.energy_history.size(), 1u);
    EXPECT_EQ(result.iterations_used, 1);
    EXPECT_EQ(result.final_energy, result.energy_history.back());
}

TEST(RunVqe, GradientSmallAtConvergedOptimum) {
    const Hamiltonian ham = build_tfim(2, 1.0, 1.0);
    const CheckerboardAnsatz ansatz = build_checkerboard(2, 1);
    OptimizerConfig config;
    config.seed = 7;
    const VqeResult result = run_vqe(ansatz, ham, config);
    ASSERT_TRUE(result.converged);
    const std::vector<double> grad = gradient_parameter_shift(ansatz, result.theta_opt, ham);
    double max_norm = 0.0;
    for (double g : grad) max_norm = std::max(max_norm, std::abs(g));
    EXPECT_LE(max_norm, 1e-3);
}

TEST(RunVqe, EnergyTrendsDownward) {
    const Hamiltonian ham = build_tfim(4, 1.0, 1.0);
    const CheckerboardAnsatz ansatz = build_checkerboard(4, 2);
    OptimizerConfig config;
    config.seed = 5;
    const VqeResult result = run_vqe(ansatz, ham, config);
    EXPECT_LE(result.final_energy, result.energy_history.front());
    EXPECT_GE(result.final_energy, exact_ground(ham).energy - 1e-8);
}

TEST(RunVqe, ReproducibleForFixedSeed) {
    const Hamiltonian ham = build_xxz(4, 1.0, -0.9);
    const CheckerboardAnsatz ansatz = build_checkerboard(4, 2);
    OptimizerConfig config;
    config.seed = 21;
    config.max_iters = 40;
    const VqeResult a = run_vqe(ansatz, ham, config);
    const VqeResult b = run_vqe(ansatz, ham, config);
    ASSERT_EQ(a.theta_opt.size(), b.theta_opt.size());
    for (std::size_t k = 0; k < a.theta_opt.size(); ++k) {
        EXPECT_EQ(a.theta_opt[k], b.theta_opt[k]);
    }
    ASSERT_EQ(a.energy_history.size(), b.energy_history.size());
    for (std::size_t k = 0; k < a.energy_history.size(); ++k) {
        EXPECT_EQ(a.energy_history[k], b.energy_history[k]);
    }
}

TEST(RunVqe, GradientDescentOverflowRaisesDivergence) {
    const Hamiltonian ham = build_tfim(2, 1.0, 1.0);
    const CheckerboardAnsatz ansatz = build_checkerboard(2, 1);
    OptimizerConfig config;
    config.seed = 2;
    config.optimizer = OptimizerKind::GradientDescent;
    config.learning_rate = 1e307;
    config.max_iters = 200;
    config.grad_tolerance = 0.0;
    try {
        run_vqe(ansatz, ham, config);
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& err) {
        EXPECT_GE(err.iteration(), 1);
    }
}

TEST(RunVqe, ValidatesConfig) {
    const Hamiltonian ham = build_tfim(2, 1.0, 1.0);
    const CheckerboardAnsatz ansatz = build_checkerboard(2, 1);
    OptimizerConfig config;
    config.learning_rate = 0.0;
    EXPECT_THROW(run_vqe(ansatz, ham, config), std::invalid_argument);
    config = OptimizerConfig{};
    config.max_iters = 0;
    EXPECT_THROW(run_vqe(ansatz, ham, config), std::invalid_argument);
}

TEST(Sweep, SingleCouplingMatchesOracle) {
    OptimizerConfig config;
    config.seed = 13;
    const auto entries = sweep(ModelKind::TFIM, 6, {0.5}, 2, config);
    ASSERT_EQ(entries.size(), 1u);
    ASSERT_TRUE(entries[0].result.has_value());
    const double exact = exact_ground(build_tfim(6, 1.0, 0.5)).energy;
    EXPECT_LE(entries[0].result->final_energy, exact + 1e-2 * std::abs(exact));
}

TEST(Sweep, RejectsEmptyCouplings) {
    OptimizerConfig config;
    EXPECT_THROW(sweep(ModelKind::TFIM, 4, {}, 2, config), std::invalid_argument);
}

TEST(Sweep, PerEntrySeedsAreIndexMixed) {
    OptimizerConfig config;
    config.seed = 99;
    config.max_iters = 2;
    config.grad_tolerance = 0.0;
    const auto entries = sweep(ModelKind::XXZ, 4, {-1.5, -0.5}, 1, config);
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0].seed, mix_seed(99, 0));
    EXPECT_EQ(entries[1].seed, mix_seed(99, 1));
}

TEST(Sweep, ResultsIndependentOfThreadCount) {
    OptimizerConfig config;
    config.seed = 4;
    config.max_iters = 15;
    const std::vector<double> couplings = {0.4, 0.8, 1.2, 1.6};

    set_num_threads(1);
    const auto sequential = sweep(ModelKind::TFIM, 5, couplings, 2, config);
    set_num_threads(4);
    const auto threaded = sweep(ModelKind::TFIM, 5, couplings, 2, config);
    set_num_threads(1);

    ASSERT_EQ(sequential.size(), threaded.size());
    for (std::size_t i = 0; i < sequential.size(); ++i) {
        ASSERT_TRUE(sequential[i].result.has_value());
        ASSERT_TRUE(threaded[i].result.has_value());
        EXPECT_EQ(sequential[i].result->final_energy, threaded[i].result->final_energy);
        for (std::size_t k = 0; k < sequential[i].result->theta_opt.size(); ++k) {
            EXPECT_EQ(sequential[i].result->theta_opt[k], threaded[i].result->theta_opt[k]);
        }
    }
}

} // namespace
