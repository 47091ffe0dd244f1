#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "phaselearn/dataset.hpp"
#include "phaselearn/qcnn.hpp"
#include "phaselearn/threading.hpp"
#include "phaselearn/vqe.hpp"

namespace phaselearn {

enum class BenchWorkload { Vqe16, Qcnn, Total };

inline std::string workload_name(BenchWorkload w) {
    switch (w) {
        case BenchWorkload::Vqe16: return "vqe16";
        case BenchWorkload::Qcnn: return "qcnn";
        case BenchWorkload::Total: return "total";
    }
    return "total";
}

struct BenchResult {
    BenchWorkload workload = BenchWorkload::Vqe16;
    int threads = 1;
    double wall_time = 0.0;  // seconds, median over the timed repetitions
    double checksum = 0.0;   // final energy/loss of the workload
    std::vector<double> trace;  // per-iteration history, for cross-thread identity checks
};

namespace detail {

class ThreadCountGuard {
public:
    explicit ThreadCountGuard(int threads) : saved_(num_threads()) { set_num_threads(threads); }
    ~ThreadCountGuard() { set_num_threads(saved_); }

private:
    int saved_;
};

template <class Work>
BenchResult timed_median(BenchWorkload workload, int threads, int reps, Work&& work) {
    if (threads < 1) throw std::invalid_argument("thread count must be >= 1");
    if (reps < 1) throw std::invalid_argument("repetition count must be >= 1");
    ThreadCountGuard guard(threads);
    BenchResult result;
    result.workload = workload;
    result.threads = threads;
    work(result);  // warmup, discarded
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        work(result);
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    result.wall_time = times[times.size() / 2];
    return result;
}

} // namespace detail

/// Times a fixed-seed, fixed-iteration VQE run. The gradient tolerance is
/// zero so every repetition performs identical work at any thread count.
inline BenchResult bench_vqe(int threads, int n_qubits = 16, int iters = 20, int reps = 5) {
    if (n_qubits > StateVector::kMaxQubits) {
        throw std::invalid_argument("bench register size exceeds the simulator limit");
    }
    const Hamiltonian ham = build_tfim(n_qubits, 1.0, 1.0);
    const CheckerboardAnsatz ansatz = build_checkerboard(n_qubits, 4);
    OptimizerConfig config;
    config.seed = 42;
    config.max_iters = iters;
    config.grad_tolerance = 0.0;
    return detail::timed_median(BenchWorkload::Vqe16, threads, reps, [&](BenchResult& r) {
        const VqeResult run = run_vqe(ansatz, ham, config);
        r.checksum = run.final_energy;
        r.trace = run.energy_history;
    });
}

/// Synthetic labeled records with random parameters; states are still
/// reconstructed through the simulator, so the workload exercises the whole
/// hybrid training path without the VQE cost.
inline Dataset synthetic_qcnn_dataset(int count, std::uint64_t seed) {
    if (count < 2) throw std::invalid_argument("dataset size must be at least 2");
    const int n = 8;
    const int depth = 2;
    const CheckerboardAnsatz ansatz = build_checkerboard(n, depth);
    Dataset records(static_cast<std::size_t>(count));
    parallel_tasks(records.size(), [&](std::size_t i) {
        std::mt19937_64 rng = make_engine(mix_seed(seed, i));
        std::normal_distribution<double> normal(0.0, 0.5);
        SampleRecord& r = records[i];
        r.model = ModelKind::TFIM;
        r.n_qubits = n;
        r.coupling = 0.2 + 1.6 * static_cast<double>(i) / static_cast<double>(count);
        if (r.coupling == 1.0) r.coupling += 1e-6;
        r.ansatz = {n, depth, "checkerboard-v1"};
        r.theta.resize(static_cast<std::size_t>(ansatz.n_params));
        for (double& v : r.theta) v = normal(rng);
        r.label = assign_label(r.model, r.coupling);
        r.seed = mix_seed(seed, i);
    });
    return records;
}

inline BenchResult bench_qcnn(int threads, int dataset_size = 200, int epochs = 5,
                              int reps = 5) {
    const Dataset records = synthetic_qcnn_dataset(dataset_size, 7);
    TrainConfig config;
    config.epochs = epochs;
    config.seed = 7;
    return detail::timed_median(BenchWorkload::Qcnn, threads, reps, [&](BenchResult& r) {
        const TrainOutput out = train(records, config);
        r.checksum = out.report.loss_history.back();
        r.trace = out.report.loss_history;
    });
}

/// Per-thread-count sum of the VQE and QCNN wall times.
inline std::vector<BenchResult> total_results(const std::vector<BenchResult>& results) {
    std::vector<BenchResult> totals;
    for (const BenchResult& r : results) {
        if (r.workload != BenchWorkload::Vqe16) continue;
        for (const BenchResult& q : results) {
            if (q.workload == BenchWorkload::Qcnn && q.threads == r.threads) {
                BenchResult t;
                t.workload = BenchWorkload::Total;
                t.threads = r.threads;
                t.wall_time = r.wall_time + q.wall_time;
                t.checksum = r.checksum + q.checksum;
                totals.push_back(std::move(t));
            }
        }
    }
    return totals;
}

/// CSV rows (workload, threads, wall_time, speedup, ideal_speedup,
/// efficiency) with a '#'-prefixed machine-info header. Requires a
/// threads = 1 baseline for every listed workload.
inline std::string speedup_report(const std::vector<BenchResult>& results) {
    if (results.empty()) throw std::invalid_argument("no benchmark results");
    auto baseline = [&](BenchWorkload w) {
        for (const BenchResult& r : results) {
            if (r.workload == w && r.threads == 1) return r.wall_time;
        }
        throw std::invalid_argument("missing threads=1 baseline for workload " +
                                    workload_name(w));
    };
    std::ostringstream out;
    out << "# logical_cores: " << std::thread::hardware_concurrency() << "\n";
    out << "# timer: steady_clock, tick "
        << (1e9 * static_cast<double>(std::chrono::steady_clock::period::num) /
            static_cast<double>(std::chrono::steady_clock::period::den))
        << " ns\n";
    out << "workload,threads,wall_time,speedup,ideal_speedup,efficiency\n";
    for (const BenchResult& r : results) {
        const double base = baseline(r.workload);
        const double speedup = base / r.wall_time;
        out << workload_name(r.workload) << ',' << r.threads << ',' << r.wall_time << ','
            << speedup << ',' << r.threads << ',' << speedup / r.threads << "\n";
    }
    return out.str();
}

} // namespace phaselearn
