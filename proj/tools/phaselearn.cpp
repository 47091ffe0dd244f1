// Command-line driver for the phase-transition learning pipeline: dataset
// generation, classifier training and evaluation, exact-ground queries, and
// the thread-scaling benchmark.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "phaselearn/bench.hpp"
#include "phaselearn/dataset.hpp"
#include "phaselearn/exact_ground.hpp"
#include "phaselearn/qcnn.hpp"
#include "phaselearn/threading.hpp"
#include "phaselearn/vqe.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // runtime or data failure
constexpr int kExitUsage = 2;    // bad flags or flag values

int resolve_threads(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("PHASELEARN_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

bool parse_window(const std::string& text, double& lo, double& hi) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return false;
    try {
        lo = std::stod(text.substr(0, comma));
        hi = std::stod(text.substr(comma + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

struct GenerateArgs {
    std::string model = "tfim";
    int n = 8;
    int count = 100;
    int depth = 4;
    std::string window;
    int max_iters = 500;
    double learning_rate = 0.05;
};

int cmd_generate(const GenerateArgs& args, std::uint64_t seed, const std::string& out_path) {
    phaselearn::GenerateOptions options;
    options.n = args.n;
    options.count = args.count;
    options.depth = args.depth;
    options.seed = seed;
    options.optimizer.max_iters = args.max_iters;
    options.optimizer.learning_rate = args.learning_rate;
    phaselearn::GenerateResult result;
    try {
        options.model = phaselearn::model_from_name(args.model);
        if (!args.window.empty() &&
            !parse_window(args.window, options.window_lo, options.window_hi)) {
            throw std::invalid_argument("--window expects 'lo,hi'");
        }
        result = phaselearn::generate_dataset(options);
    } catch (const std::invalid_argument& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return kExitUsage;
    }

    const std::string manifest_path = out_path + ".manifest.json";
    phaselearn::write_jsonl(out_path, result.records);
    {
        std::ofstream manifest(manifest_path);
        manifest << result.manifest.dump(2) << '\n';
    }

    const auto& balance = result.manifest.at("class_balance");
    std::size_t converged = 0;
    // Records store only converged-or-capped runs; count the flagged ones.
    const std::size_t total = result.records.size() + result.excluded;
    converged = result.records.size();
    std::cout << "wrote " << result.records.size() << " records to " << out_path << "\n"
              << "completed runs: " << converged << "/" << total
              << " (excluded " << result.excluded << ")\n"
              << "class balance: label0 " << balance.at("label0").get<int>() << ", label1 "
              << balance.at("label1").get<int>() << "\n"
              << "manifest: " << manifest_path << "\n";
    if (result.excluded * 5 > total) {  // failure rate above 20%
        std::cerr << "error: VQE failure rate above 20%; see " << manifest_path << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

struct TrainArgs {
    std::string data;
    int epochs = 100;
    std::string augment = "off";
    int rotations = 1;
    int hidden = 16;
    int stages = 1;
    std::string features = "pauli";
    double learning_rate = 1e-3;
    int batch_size = 16;
};

int cmd_train(const TrainArgs& args, std::uint64_t seed, const std::string& out_dir) {
    phaselearn::Dataset records;
    try {
        records = phaselearn::read_jsonl(args.data);
    } catch (const std::exception& err) {
        std::cerr << "error: cannot load '" << args.data << "': " << err.what() << "\n";
        return kExitFailure;
    }

    phaselearn::TrainConfig config;
    config.epochs = args.epochs;
    config.seed = seed;
    config.augment = args.augment == "on";
    config.augment_rotations = args.rotations;
    config.hidden = args.hidden;
    config.quantum_stages = args.stages;
    config.learning_rate = args.learning_rate;
    config.batch_size = args.batch_size;
    config.feature_mode = args.features == "probs" ? phaselearn::FeatureMode::BasisProbabilities
                                                   : phaselearn::FeatureMode::PauliExpectations;

    phaselearn::TrainOutput output;
    try {
        output = phaselearn::train(records, config);
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitFailure;
    }

    const std::string model_path = out_dir + "/model.json";
    const std::string metrics_path = out_dir + "/metrics.csv";
    const std::string report_path = out_dir + "/report.json";
    phaselearn::save_checkpoint(model_path, output.model, records.front().model,
                                config.feature_mode);
    {
        std::ofstream metrics(metrics_path);
        metrics << "epoch,train_loss,train_acc\n";
        char line[96];
        for (std::size_t e = 0; e < output.report.loss_history.size(); ++e) {
            std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", e + 1,
                          output.report.loss_history[e],
                          output.report.train_accuracy_history[e]);
            metrics << line;
        }
    }
    {
        const auto& r = output.report;
        nlohmann::json report = {
            {"test_accuracy", r.test_accuracy},
            {"confusion", {{r.confusion[0][0], r.confusion[0][1]},
                           {r.confusion[1][0], r.confusion[1][1]}}},
            {"train_count_raw", r.train_count_raw},
            {"train_count_effective", r.train_count_effective},
            {"test_count", r.test_count},
            {"epochs", config.epochs},
            {"final_train_loss", r.loss_history.back()},
        };
        std::ofstream report_file(report_path);
        report_file << report.dump(2) << '\n';
    }
    std::printf("test accuracy: %.4f (%zu test records)\n", output.report.test_accuracy,
                output.report.test_count);
    std::printf("training records: %zu raw, %zu effective\n", output.report.train_count_raw,
                output.report.train_count_effective);
    std::cout << "checkpoint: " << model_path << "\nmetrics: " << metrics_path
              << "\nreport: " << report_path << "\n";
    return kExitOk;
}

struct EvalArgs {
    std::string model_file;
    std::string data;
    bool curve = false;
};

int cmd_eval(const EvalArgs& args, const std::string& out_path) {
    phaselearn::Checkpoint checkpoint;
    phaselearn::Dataset records;
    try {
        checkpoint = phaselearn::load_checkpoint(args.model_file);
        records = phaselearn::read_jsonl(args.data);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitFailure;
    }
    if (records.empty()) {
        std::cerr << "error: '" << args.data << "' holds no records\n";
        return kExitFailure;
    }
    const std::size_t expected = phaselearn::feature_length(
        records.front().model, records.front().n_qubits, checkpoint.feature_mode);
    if (expected != static_cast<std::size_t>(checkpoint.model.feature_len)) {
        std::cerr << "error: data yields feature length " << expected
                  << " but the checkpoint expects " << checkpoint.model.feature_len << "\n";
        return kExitFailure;
    }

    const phaselearn::EvalResult result =
        phaselearn::evaluate(checkpoint.model, records, checkpoint.feature_mode);
    std::printf("accuracy: %.4f over %zu records\n", result.accuracy, result.entries.size());

    if (args.curve) {
        std::vector<phaselearn::EvalEntry> entries = result.entries;
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.coupling < b.coupling; });
        std::ofstream csv(out_path);
        csv << "coupling,probability\n";
        char line[80];
        for (const auto& e : entries) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g\n", e.coupling, e.probability);
            csv << line;
        }
        std::cout << "curve: " << out_path << "\n";
        std::optional<double> crossing;
        for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
            const double p0 = entries[i].probability;
            const double p1 = entries[i + 1].probability;
            if (p0 <= 0.5 && p1 > 0.5) {
                const double c0 = entries[i].coupling;
                const double c1 = entries[i + 1].coupling;
                crossing = c0 + (0.5 - p0) * (c1 - c0) / (p1 - p0);
                break;
            }
        }
        if (crossing.has_value()) {
            std::printf("crossing: probability exceeds 0.5 at coupling %.6f\n", *crossing);
        } else {
            std::cout << "crossing: none within the evaluated range\n";
        }
    }
    return kExitOk;
}

struct ExactArgs {
    std::string model = "tfim";
    int n = 2;
    double coupling = 1.0;
};

int cmd_exact(const ExactArgs& args) {
    try {
        const phaselearn::ModelKind model = phaselearn::model_from_name(args.model);
        const phaselearn::Hamiltonian ham = model == phaselearn::ModelKind::TFIM
                                                ? phaselearn::build_tfim(args.n, 1.0, args.coupling)
                                                : phaselearn::build_xxz(args.n, 1.0, args.coupling);
        const phaselearn::GroundState ground = phaselearn::exact_ground(ham);
        std::printf("%.12f\n", ground.energy);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

struct BenchArgs {
    std::string workload = "all";
    std::string threads = "1,2,4";
    int iters = 20;
    int reps = 5;
    int dataset_size = 200;
    int epochs = 5;
};

int cmd_bench(const BenchArgs& args, const std::string& out_path) {
    std::vector<int> thread_counts;
    std::stringstream ss(args.threads);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            thread_counts.push_back(std::stoi(item));
        } catch (const std::exception&) {
            std::cerr << "usage error: --threads expects a comma-separated integer list\n";
            return kExitUsage;
        }
    }
    if (thread_counts.empty() ||
        std::find(thread_counts.begin(), thread_counts.end(), 1) == thread_counts.end()) {
        std::cerr << "usage error: --threads must include the single-thread baseline (1)\n";
        return kExitUsage;
    }
    if (args.workload != "vqe" && args.workload != "qcnn" && args.workload != "all") {
        std::cerr << "usage error: --workload must be vqe, qcnn, or all\n";
        return kExitUsage;
    }

    std::vector<phaselearn::BenchResult> results;
    for (int t : thread_counts) {
        if (args.workload == "vqe" || args.workload == "all") {
            std::cerr << "benchmarking vqe16 with " << t << " thread(s)...\n";
            results.push_back(phaselearn::bench_vqe(t, 16, args.iters, args.reps));
        }
        if (args.workload == "qcnn" || args.workload == "all") {
            std::cerr << "benchmarking qcnn with " << t << " thread(s)...\n";
            results.push_back(
                phaselearn::bench_qcnn(t, args.dataset_size, args.epochs, args.reps));
        }
    }
    if (args.workload == "all") {
        const auto totals = phaselearn::total_results(results);
        results.insert(results.end(), totals.begin(), totals.end());
    }
    const std::string report = phaselearn::speedup_report(results);
    std::cout << report;
    std::ofstream csv(out_path);
    csv << report;
    std::cout << "csv: " << out_path << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum phase-transition learning pipeline"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 0;
    app.add_option("--seed", seed, "Base RNG seed");
    app.add_option("--threads", threads,
                   "Worker threads (default: PHASELEARN_THREADS or all cores)");

    GenerateArgs gen;
    std::string gen_out = "dataset.jsonl";
    auto* generate = app.add_subcommand("generate", "Generate a labeled VQE dataset");
    generate->add_option("--model", gen.model, "tfim or xxz");
    generate->add_option("--n", gen.n, "Number of qubits");
    generate->add_option("--count", gen.count, "Number of grid points");
    generate->add_option("--depth", gen.depth, "Checkerboard depth");
    generate->add_option("--window", gen.window, "Coupling window 'lo,hi'");
    generate->add_option("--max-iters", gen.max_iters, "VQE iteration cap");
    generate->add_option("--lr", gen.learning_rate, "VQE learning rate");
    generate->add_option("--out", gen_out, "Output JSONL path");

    TrainArgs tr;
    std::string train_out = ".";
    auto* train_cmd = app.add_subcommand("train", "Train the hybrid classifier");
    train_cmd->add_option("--data", tr.data, "Dataset JSONL path")->required();
    train_cmd->add_option("--epochs", tr.epochs, "Training epochs");
    train_cmd->add_option("--augment", tr.augment, "on or off: augment the training split");
    train_cmd->add_option("--rotations", tr.rotations, "Random Z rotations per XXZ record");
    train_cmd->add_option("--hidden", tr.hidden, "Hidden width of the first dense layer");
    train_cmd->add_option("--stages", tr.stages, "Number of quantum stages");
    train_cmd->add_option("--features", tr.features, "pauli or probs");
    train_cmd->add_option("--lr", tr.learning_rate, "Adam learning rate");
    train_cmd->add_option("--batch", tr.batch_size, "Minibatch size");
    train_cmd->add_option("--out", train_out, "Output directory");

    EvalArgs ev;
    std::string eval_out = "curve.csv";
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained classifier");
    eval_cmd->add_option("--model-file", ev.model_file, "Checkpoint path")->required();
    eval_cmd->add_option("--data", ev.data, "Dataset JSONL path")->required();
    eval_cmd->add_flag("--curve", ev.curve, "Write the phase-probability curve CSV");
    eval_cmd->add_option("--out", eval_out, "Curve CSV path");

    ExactArgs ex;
    auto* exact_cmd = app.add_subcommand("exact", "Print the exact ground energy");
    exact_cmd->add_option("--model", ex.model, "tfim or xxz");
    exact_cmd->add_option("--n", ex.n, "Number of qubits (max 12)");
    exact_cmd->add_option("--coupling", ex.coupling, "h for TFIM, J_z for XXZ");

    BenchArgs be;
    std::string bench_out = "bench.csv";
    auto* bench_cmd = app.add_subcommand("bench", "Thread-scaling benchmark");
    bench_cmd->add_option("--workload", be.workload, "vqe, qcnn, or all");
    bench_cmd->add_option("--threads", be.threads, "Comma list of thread counts (must include 1)");
    bench_cmd->add_option("--iters", be.iters, "VQE iterations per run");
    bench_cmd->add_option("--reps", be.reps, "Timed repetitions per configuration");
    bench_cmd->add_option("--size", be.dataset_size, "QCNN dataset size");
    bench_cmd->add_option("--epochs", be.epochs, "QCNN training epochs");
    bench_cmd->add_option("--out", bench_out, "Output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return kExitUsage;
    }

    phaselearn::set_num_threads(resolve_threads(threads));

    try {
        if (generate->parsed()) return cmd_generate(gen, seed, gen_out);
        if (train_cmd->parsed()) return cmd_train(tr, seed, train_out);
        if (eval_cmd->parsed()) return cmd_eval(ev, eval_out);
        if (exact_cmd->parsed()) return cmd_exact(ex);
        if (bench_cmd->parsed()) return cmd_bench(be, bench_out);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
