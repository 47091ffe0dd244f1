#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaselearn/ansatz.hpp"
#include "phaselearn/hamiltonian.hpp"
#include "phaselearn/rng.hpp"
#include "phaselearn/threading.hpp"

namespace phaselearn {

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(int iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const { return iteration_; }

private:
    int iteration_;
};

enum class OptimizerKind { Adam, GradientDescent };

struct OptimizerConfig {
    double learning_rate = 0.05;
    int max_iters = 500;
    double grad_tolerance = 1e-4;  // max-norm of the gradient
    std::uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::Adam;
    // Adam moments
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double init_std = 0.1;  // theta ~ N(0, init_std)

    void validate() const {
        if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be positive");
        if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    }
};

struct VqeResult {
    ParameterVector theta_opt;
    double final_energy = 0.0;
    std::vector<double> energy_history;  // one entry per iteration
    bool converged = false;
    int iterations_used = 0;
};

/// Minimizes energy_of(ansatz, theta, ham) with parameter-shift gradients.
/// Each iteration records E(theta); the update runs between iterations, so
/// final_energy is the energy of the returned theta. Deterministic for a
/// fixed seed (the gradient is assembled in slot order).
inline VqeResult run_vqe(const CheckerboardAnsatz& ansatz, const Hamiltonian& ham,
                         const OptimizerConfig& config) {
    config.validate();
    if (ansatz.n_qubits != ham.n_qubits) {
        throw std::invalid_argument("ansatz and Hamiltonian register sizes differ");
    }

    std::mt19937_64 rng = make_engine(config.seed);
    std::normal_distribution<double> normal(0.0, config.init_std);
    ParameterVector theta(static_cast<std::size_t>(ansatz.n_params));
    for (double& v : theta) v = normal(rng);

    std::vector<double> m(theta.size(), 0.0);
    std::vector<double> v(theta.size(), 0.0);

    VqeResult result;
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        const double e = energy_of(ansatz, theta, ham);
        if (!std::isfinite(e)) {
            throw DivergenceError(iter, "VQE energy became non-finite at iteration " +
                                            std::to_string(iter));
        }
        result.energy_history.push_back(e);
        result.iterations_used = iter;

        const std::vector<double> grad = gradient_parameter_shift(ansatz, theta, ham);
        double max_norm = 0.0;
        for (double g : grad) max_norm = std::max(max_norm, std::abs(g));
        if (max_norm <= config.grad_tolerance) {
            result.converged = true;
            break;
        }
        if (iter == config.max_iters) break;  // keep theta matching the last recorded energy

        if (config.optimizer == OptimizerKind::Adam) {
            const double bc1 = 1.0 - std::pow(config.beta1, iter);
            const double bc2 = 1.0 - std::pow(config.beta2, iter);
            for (std::size_t k = 0; k < theta.size(); ++k) {
                m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * grad[k];
                v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * grad[k] * grad[k];
                theta[k] -= config.learning_rate * (m[k] / bc1) /
                            (std::sqrt(v[k] / bc2) + config.epsilon);
            }
        } else {
            for (std::size_t k = 0; k < theta.size(); ++k) {
                theta[k] -= config.learning_rate * grad[k];
            }
        }
    }
    result.theta_opt = std::move(theta);
    result.final_energy = result.energy_history.back();
    return result;
}

struct SweepEntry {
    double coupling = 0.0;
    std::uint64_t seed = 0;
    std::optional<VqeResult> result;
    std::string error;  // set when the run diverged
};

/// One VQE run per coupling (h for TFIM at J=1, J_z for XXZ at J_perp=1).
/// Runs execute concurrently; entry i uses seed = config.seed XOR
/// splitmix64(i), so results do not depend on scheduling order.
inline std::vector<SweepEntry> sweep(ModelKind model, int n,
                                     const std::vector<double>& couplings, int depth,
                                     const OptimizerConfig& config) {
    if (couplings.empty()) throw std::invalid_argument("sweep needs at least one coupling");
    if (model == ModelKind::Custom) {
        throw std::invalid_argument("sweep supports the built-in models only");
    }
    const CheckerboardAnsatz ansatz = build_checkerboard(n, depth);

    std::vector<SweepEntry> entries(couplings.size());
    parallel_tasks(couplings.size(), [&](std::size_t i) {
        SweepEntry& entry = entries[i];
        entry.coupling = couplings[i];
        entry.seed = mix_seed(config.seed, i);
        OptimizerConfig run_config = config;
        run_config.seed = entry.seed;
        const Hamiltonian ham = (model == ModelKind::TFIM)
                                    ? build_tfim(n, 1.0, couplings[i])
                                    : build_xxz(n, 1.0, couplings[i]);
        try {
            entry.result = run_vqe(ansatz, ham, run_config);
        } catch (const DivergenceError& err) {
            entry.error = err.what();
        }
    });
    return entries;
}

} // namespace phaselearn
