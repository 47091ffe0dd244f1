#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "phaselearn/hamiltonian.hpp"
#include "phaselearn/statevector.hpp"

namespace phaselearn {

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// y = H x assembled term by term from the Pauli strings; no dense matrix.
inline void apply_hamiltonian(const Hamiltonian& ham, std::span<const Amplitude> x,
                              std::span<Amplitude> y) {
    struct TermMasks {
        double coeff;
        std::uint64_t flip;
        std::uint64_t phase;
        Amplitude factor;  // coeff * i^y_count
    };
    static constexpr Amplitude kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<TermMasks> terms;
    terms.reserve(ham.terms.size());
    for (const auto& t : ham.terms) {
        const auto m = t.string.masks();
        terms.push_back({t.coefficient, m.flip, m.phase, t.coefficient * kIPow[m.y_count & 3]});
    }
    detail::parallel_index_space(x.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
            Amplitude acc{0.0, 0.0};
            for (const auto& t : terms) {
                const std::size_t src = j ^ t.flip;
                const double sign = (std::popcount(src & t.phase) & 1) ? -1.0 : 1.0;
                acc += t.factor * (sign * x[src]);
            }
            y[j] = acc;
        }
    });
}

struct GroundState {
    double energy = 0.0;
    StateVector state;
};

namespace detail {

inline Amplitude dot(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
    Amplitude acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

inline double vec_norm(const std::vector<Amplitude>& a) {
    double acc = 0.0;
    for (const auto& v : a) acc += std::norm(v);
    return std::sqrt(acc);
}

// Smallest eigenpair of the symmetric tridiagonal (alpha, beta).
inline std::pair<double, Eigen::VectorXd> tridiag_smallest(const std::vector<double>& alpha,
                                                           const std::vector<double>& beta) {
    const int m = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) {
            t(i, i + 1) = beta[static_cast<std::size_t>(i)];
            t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

} // namespace detail

/// Smallest eigenpair via Lanczos with full reorthogonalization over
/// matrix-free products. Restarts from the best Ritz vector when the basis
/// fills up; a global matvec budget bounds the total work.
inline GroundState exact_ground(const Hamiltonian& ham, double tol = 1e-8,
                                int max_matvecs = 10000) {
    if (ham.n_qubits > 12) {
        throw std::invalid_argument("exact_ground supports at most 12 qubits");
    }
    if (ham.terms.empty()) throw std::invalid_argument("Hamiltonian has no terms");

    const std::size_t dim = std::size_t{1} << ham.n_qubits;
    const std::size_t basis_cap = std::min<std::size_t>(dim, 300);

    std::mt19937_64 rng(0x517cc1b727220a95ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto random_vector = [&] {
        std::vector<Amplitude> v(dim);
        for (auto& x : v) x = Amplitude{normal(rng), normal(rng)};
        const double n = detail::vec_norm(v);
        for (auto& x : v) x /= n;
        return v;
    };

    int matvecs = 0;
    auto matvec = [&](const std::vector<Amplitude>& x) {
        if (matvecs >= max_matvecs) {
            throw ConvergenceError("exact_ground: matvec budget of " +
                                   std::to_string(max_matvecs) + " exhausted");
        }
        ++matvecs;
        std::vector<Amplitude> y(dim);
        apply_hamiltonian(ham, x, y);
        return y;
    };

    std::vector<Amplitude> start = random_vector();

    while (true) {
        std::vector<std::vector<Amplitude>> basis;
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.push_back(start);

        bool breakdown = false;
        while (basis.size() <= basis_cap && matvecs < max_matvecs) {
            const auto& v = basis.back();
            std::vector<Amplitude> w = matvec(v);
            const double a = std::real(detail::dot(v, w));
            alpha.push_back(a);
            for (std::size_t k = 0; k < dim; ++k) w[k] -= a * v[k];
            if (basis.size() >= 2) {
                const auto& prev = basis[basis.size() - 2];
                const double b = beta.back();
                for (std::size_t k = 0; k < dim; ++k) w[k] -= b * prev[k];
            }
            // Full reorthogonalization keeps the basis numerically orthogonal
            // even for clustered spectra.
            for (const auto& u : basis) {
                const Amplitude overlap = detail::dot(u, w);
                for (std::size_t k = 0; k < dim; ++k) w[k] -= overlap * u[k];
            }
            const double b = detail::vec_norm(w);

            auto [ritz_value, coeffs] = detail::tridiag_smallest(alpha, beta);
            const double residual_estimate =
                b * std::abs(coeffs(static_cast<int>(alpha.size()) - 1));
            if (residual_estimate <= 0.5 * tol || b < 1e-14 ||
                basis.size() == basis_cap) {
                std::vector<Amplitude> ritz(dim, Amplitude{0.0, 0.0});
                for (std::size_t i = 0; i < alpha.size(); ++i) {
                    const double ci = coeffs(static_cast<int>(i));
                    for (std::size_t k = 0; k < dim; ++k) ritz[k] += ci * basis[i][k];
                }
                const double rn = detail::vec_norm(ritz);
                for (auto& x : ritz) x /= rn;
                std::vector<Amplitude> h_ritz = matvec(ritz);
                const double rayleigh = std::real(detail::dot(ritz, h_ritz));
                double res = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    res += std::norm(h_ritz[k] - rayleigh * ritz[k]);
                }
                res = std::sqrt(res);
                if (res <= tol) {
                    GroundState out{rayleigh, StateVector(ham.n_qubits)};
                    std::copy(ritz.begin(), ritz.end(), out.state.amplitudes().begin());
                    return out;
                }
                if (b < 1e-14) {
                    // Krylov space exhausted without meeting the residual;
                    // restart from a fresh random direction.
                    start = random_vector();
                    breakdown = true;
                    break;
                }
                if (basis.size() == basis_cap) {
                    start = std::move(ritz);  // warm restart
                    breakdown = true;
                    break;
                }
            }
            beta.push_back(b);
            for (auto& x : w) x /= b;
            basis.push_back(std::move(w));
        }
        if (!breakdown && matvecs >= max_matvecs) {
            throw ConvergenceError("exact_ground: matvec budget of " +
                                   std::to_string(max_matvecs) + " exhausted");
        }
    }
}

} // namespace phaselearn
