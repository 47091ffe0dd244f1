#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "phaselearn/ansatz.hpp"
#include "phaselearn/hamiltonian.hpp"
#include "phaselearn/rng.hpp"
#include "phaselearn/statevector.hpp"
#include "phaselearn/vqe.hpp"

namespace phaselearn {

struct AnsatzDescriptor {
    int n = 0;
    int depth = 0;
    std::string scheme = "checkerboard-v1";
};

/// One labeled dataset entry. States are stored parameter-only: theta plus
/// the descriptor reproduce the state exactly. `augmentation` is empty for
/// raw records, otherwise a '+'-joined op list ("flip", "reflect",
/// "zrot:<angle>") applied after the base circuit.
struct SampleRecord {
    ModelKind model = ModelKind::TFIM;
    int n_qubits = 0;
    double coupling = 0.0;  // h for TFIM, J_z for XXZ
    AnsatzDescriptor ansatz;
    std::vector<double> theta;
    int label = 0;  // 0 = phase I, 1 = phase II
    std::uint64_t seed = 0;
    std::string augmentation;
};

using Dataset = std::vector<SampleRecord>;

/// Phase label from the analytic boundary. TFIM: phase II (label 1) is the
/// disordered side h > 1. XXZ: phase II is the planar side |J_z| < 1.
inline int assign_label(ModelKind model, double coupling) {
    if (!std::isfinite(coupling)) throw std::invalid_argument("coupling must be finite");
    switch (model) {
        case ModelKind::TFIM:
            if (coupling == 1.0) {
                throw std::domain_error("coupling h = 1 sits on the phase boundary");
            }
            return coupling > 1.0 ? 1 : 0;
        case ModelKind::XXZ:
            if (std::abs(coupling) == 1.0) {
                throw std::domain_error("coupling |J_z| = 1 sits on the phase boundary");
            }
            return std::abs(coupling) < 1.0 ? 1 : 0;
        case ModelKind::Custom: break;
    }
    throw std::invalid_argument("labels are defined for the built-in models only");
}

inline Hamiltonian record_hamiltonian(const SampleRecord& record) {
    switch (record.model) {
        case ModelKind::TFIM: return build_tfim(record.n_qubits, 1.0, record.coupling);
        case ModelKind::XXZ: return build_xxz(record.n_qubits, 1.0, record.coupling);
        case ModelKind::Custom: break;
    }
    throw std::invalid_argument("record has no built-in Hamiltonian");
}

namespace detail {

inline std::vector<std::string> split_tags(const std::string& tag) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= tag.size()) {
        const std::size_t next = tag.find('+', pos);
        if (next == std::string::npos) {
            out.push_back(tag.substr(pos));
            break;
        }
        out.push_back(tag.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

inline void append_augmentation_ops(Circuit& circuit, const std::string& tag) {
    const int n = circuit.n_qubits;
    for (const std::string& op : split_tags(tag)) {
        if (op == "flip") {
            for (int q = 0; q < n; ++q) circuit.add(GateOp::x(q));
        } else if (op == "reflect") {
            // Qubit-order reversal as SWAP(i, n-1-i) pairs, each three CNOTs.
            for (int i = 0; i < n / 2; ++i) {
                const int j = n - 1 - i;
                circuit.add(GateOp::cnot(i, j));
                circuit.add(GateOp::cnot(j, i));
                circuit.add(GateOp::cnot(i, j));
            }
        } else if (op.rfind("zrot:", 0) == 0) {
            const double angle = std::stod(op.substr(5));
            for (int q = 0; q < n; ++q) circuit.add(GateOp::rz(q, angle));
        } else {
            throw std::invalid_argument("unknown augmentation op '" + op + "'");
        }
    }
}

inline std::string compose_tag(const std::string& base, const std::string& op) {
    return base.empty() ? op : base + "+" + op;
}

// Shortest exact decimal form is not required; 17 significant digits always
// round-trip a double.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace detail

/// Rebuilds the stored state: base ansatz circuit, then augmentation ops in
/// tag order.
inline StateVector reconstruct_state(const SampleRecord& record) {
    if (record.ansatz.scheme != "checkerboard-v1") {
        throw std::invalid_argument("unknown ansatz scheme '" + record.ansatz.scheme + "'");
    }
    const CheckerboardAnsatz ansatz = build_checkerboard(record.ansatz.n, record.ansatz.depth);
    Circuit circuit = ansatz_circuit(ansatz, record.theta);
    if (!record.augmentation.empty()) {
        detail::append_augmentation_ops(circuit, record.augmentation);
    }
    StateVector state(record.ansatz.n);
    apply_circuit(state, circuit);
    return state;
}

/// Symmetry-op variants of a record, labels unchanged. Returns the original
/// followed by the spin-flipped and reflected variants; XXZ records add
/// `n_rotations` global Z rotations with angles drawn from `rng`.
inline std::vector<SampleRecord> augment(const SampleRecord& record, int n_rotations,
                                         std::mt19937_64& rng) {
    std::vector<SampleRecord> out;
    out.push_back(record);

    SampleRecord flipped = record;
    flipped.augmentation = detail::compose_tag(record.augmentation, "flip");
    out.push_back(std::move(flipped));

    SampleRecord reflected = record;
    reflected.augmentation = detail::compose_tag(record.augmentation, "reflect");
    out.push_back(std::move(reflected));

    if (record.model == ModelKind::XXZ) {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (int r = 0; r < n_rotations; ++r) {
            SampleRecord rotated = record;
            rotated.augmentation = detail::compose_tag(
                record.augmentation, "zrot:" + detail::format_double(angle(rng)));
            out.push_back(std::move(rotated));
        }
    }
    return out;
}

enum class FeatureMode { PauliExpectations, BasisProbabilities };

inline std::size_t feature_length(ModelKind model, int n, FeatureMode mode) {
    if (mode == FeatureMode::BasisProbabilities) return std::size_t{1} << n;
    switch (model) {
        case ModelKind::TFIM: return static_cast<std::size_t>(3 * n - 1);
        case ModelKind::XXZ: return static_cast<std::size_t>(4 * n - 3);
        case ModelKind::Custom: break;
    }
    throw std::invalid_argument("features are defined for the built-in models only");
}

/// Local and nearest-neighbor Pauli expectations, every entry in [-1, 1].
/// TFIM layout (3n-1): <X_i> ++ <Z_i> ++ <Z_i Z_{i+1}>.
/// XXZ layout (4n-3): <Z_i> ++ <Z_i Z_{i+1}> ++ <X_i X_{i+1}> ++ <Y_i Y_{i+1}>.
inline std::vector<double> extract_features(const StateVector& state, ModelKind model,
                                            FeatureMode mode = FeatureMode::PauliExpectations) {
    if (mode == FeatureMode::BasisProbabilities) return basis_probabilities(state);
    const int n = state.n_qubits();
    const std::size_t sn = static_cast<std::size_t>(n);
    std::vector<double> features;
    features.reserve(feature_length(model, n, mode));
    auto site = [&](Pauli p, int i) {
        return pauli_expectation(state, PauliString::single(sn, static_cast<std::size_t>(i), p));
    };
    auto bond = [&](Pauli p, int i) {
        return pauli_expectation(state, PauliString::two_site(sn, static_cast<std::size_t>(i), p,
                                                              static_cast<std::size_t>(i + 1), p));
    };
    if (model == ModelKind::TFIM) {
        for (int i = 0; i < n; ++i) features.push_back(site(Pauli::X, i));
        for (int i = 0; i < n; ++i) features.push_back(site(Pauli::Z, i));
        for (int i = 0; i + 1 < n; ++i) features.push_back(bond(Pauli::Z, i));
    } else if (model == ModelKind::XXZ) {
        for (int i = 0; i < n; ++i) features.push_back(site(Pauli::Z, i));
        for (int i = 0; i + 1 < n; ++i) features.push_back(bond(Pauli::Z, i));
        for (int i = 0; i + 1 < n; ++i) features.push_back(bond(Pauli::X, i));
        for (int i = 0; i + 1 < n; ++i) features.push_back(bond(Pauli::Y, i));
    } else {
        throw std::invalid_argument("features are defined for the built-in models only");
    }
    return features;
}

inline std::vector<double> record_features(const SampleRecord& record,
                                           FeatureMode mode = FeatureMode::PauliExpectations) {
    return extract_features(reconstruct_state(record), record.model, mode);
}

/// Debug dump of a state's amplitudes in the dataset JSON conventions.
inline nlohmann::json amplitudes_to_json(const StateVector& state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const Amplitude& a : state.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    return nlohmann::json{{"n", state.n_qubits()}, {"amplitudes", std::move(amps)}};
}

/// One record as a JSONL line with a fixed key order and 17-significant-digit
/// floats, so equal records serialize to equal bytes.
inline std::string record_to_jsonl(const SampleRecord& record) {
    std::string line;
    line.reserve(64 + 20 * record.theta.size());
    line += "{\"model\":\"" + model_name(record.model) + "\"";
    line += ",\"n\":" + std::to_string(record.n_qubits);
    line += ",\"coupling\":" + detail::format_double(record.coupling);
    line += ",\"ansatz\":{\"n\":" + std::to_string(record.ansatz.n) +
            ",\"depth\":" + std::to_string(record.ansatz.depth) + ",\"scheme\":\"" +
            record.ansatz.scheme + "\"}";
    line += ",\"theta\":[";
    for (std::size_t i = 0; i < record.theta.size(); ++i) {
        if (i > 0) line += ',';
        line += detail::format_double(record.theta[i]);
    }
    line += "]";
    line += ",\"label\":" + std::to_string(record.label);
    line += ",\"seed\":" + std::to_string(record.seed);
    if (record.augmentation.empty()) {
        line += ",\"augmentation\":null}";
    } else {
        line += ",\"augmentation\":\"" + record.augmentation + "\"}";
    }
    return line;
}

inline SampleRecord record_from_json(const nlohmann::json& doc) {
    SampleRecord record;
    record.model = model_from_name(doc.at("model").get<std::string>());
    record.n_qubits = doc.at("n").get<int>();
    record.coupling = doc.at("coupling").get<double>();
    const auto& ansatz = doc.at("ansatz");
    record.ansatz.n = ansatz.at("n").get<int>();
    record.ansatz.depth = ansatz.at("depth").get<int>();
    record.ansatz.scheme = ansatz.at("scheme").get<std::string>();
    record.theta = doc.at("theta").get<std::vector<double>>();
    record.label = doc.at("label").get<int>();
    record.seed = doc.at("seed").get<std::uint64_t>();
    const auto& aug = doc.at("augmentation");
    record.augmentation = aug.is_null() ? std::string() : aug.get<std::string>();

    if (record.label != 0 && record.label != 1) {
        throw std::invalid_argument("label must be 0 or 1");
    }
    const CheckerboardAnsatz built = build_checkerboard(record.ansatz.n, record.ansatz.depth);
    if (record.theta.size() != static_cast<std::size_t>(built.n_params)) {
        throw std::invalid_argument("theta has length " + std::to_string(record.theta.size()) +
                                    ", descriptor needs " + std::to_string(built.n_params));
    }
    return record;
}

/// Writes one record per line, flushed per record so partial files stay
/// recoverable.
inline void write_jsonl(std::ostream& out, const Dataset& records) {
    for (const SampleRecord& record : records) {
        out << record_to_jsonl(record) << '\n';
        out.flush();
    }
}

inline void write_jsonl(const std::string& path, const Dataset& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_jsonl(out, records);
}

inline Dataset read_jsonl(std::istream& in) {
    Dataset records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& err) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + err.what());
        }
    }
    return records;
}

inline Dataset read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_jsonl(in);
}

/// Seeded shuffle, then split; the test half is floor(count * (1-fraction)).
inline std::pair<Dataset, Dataset> split(const Dataset& records, double fraction,
                                         std::uint64_t seed) {
    if (records.empty()) throw std::invalid_argument("cannot split an empty dataset");
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw std::invalid_argument("split fraction must be in (0, 1)");
    }
    Dataset shuffled = records;
    std::mt19937_64 rng = make_engine(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::size_t test_count =
        static_cast<std::size_t>(static_cast<double>(shuffled.size()) * (1.0 - fraction));
    const std::size_t train_count = shuffled.size() - test_count;
    Dataset train(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(train_count));
    Dataset test(shuffled.begin() + static_cast<std::ptrdiff_t>(train_count), shuffled.end());
    return {std::move(train), std::move(test)};
}

struct GenerateOptions {
    ModelKind model = ModelKind::TFIM;
    int n = 8;
    int count = 100;
    int depth = 4;
    std::uint64_t seed = 0;
    double window_lo = 0.0;  // 0,0 = model default window
    double window_hi = 0.0;
    OptimizerConfig optimizer;
};

struct GenerateResult {
    Dataset records;
    nlohmann::json manifest;
    std::size_t excluded = 0;
};

inline std::pair<double, double> default_window(ModelKind model) {
    switch (model) {
        case ModelKind::TFIM: return {0.2, 1.8};
        case ModelKind::XXZ: return {-1.8, -0.2};
        case ModelKind::Custom: break;
    }
    throw std::invalid_argument("no default window for custom Hamiltonians");
}

/// Runs a VQE per coupling on an even grid over the window and labels each
/// record from the analytic boundary. Diverged runs are excluded and listed
/// in the manifest.
inline GenerateResult generate_dataset(const GenerateOptions& options) {
    if (options.count < 2) throw std::invalid_argument("count must be at least 2");
    auto [lo, hi] = (options.window_lo == 0.0 && options.window_hi == 0.0)
                        ? default_window(options.model)
                        : std::pair<double, double>{options.window_lo, options.window_hi};
    if (!(lo < hi)) throw std::invalid_argument("window must satisfy lo < hi");

    std::vector<double> grid(static_cast<std::size_t>(options.count));
    for (int k = 0; k < options.count; ++k) {
        grid[static_cast<std::size_t>(k)] =
            lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(options.count - 1);
    }
    // The boundary itself is unlabelable; an even count over the default
    // symmetric window never hits it.
    for (double c : grid) {
        try {
            (void)assign_label(options.model, c);
        } catch (const std::domain_error&) {
            throw std::invalid_argument(
                "grid places a point exactly on the phase boundary; "
                "use an even count or shift the window");
        }
    }

    OptimizerConfig config = options.optimizer;
    config.seed = options.seed;
    const std::vector<SweepEntry> entries =
        sweep(options.model, options.n, grid, options.depth, config);

    GenerateResult out;
    nlohmann::json exclusions = nlohmann::json::array();
    int label_counts[2] = {0, 0};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const SweepEntry& entry = entries[i];
        if (!entry.result.has_value()) {
            exclusions.push_back({{"index", i},
                                  {"coupling", entry.coupling},
                                  {"error", entry.error}});
            continue;
        }
        SampleRecord record;
        record.model = options.model;
        record.n_qubits = options.n;
        record.coupling = entry.coupling;
        record.ansatz = {options.n, options.depth, "checkerboard-v1"};
        record.theta = entry.result->theta_opt;
        record.label = assign_label(options.model, entry.coupling);
        record.seed = entry.seed;
        ++label_counts[record.label];
        out.records.push_back(std::move(record));
    }
    out.excluded = entries.size() - out.records.size();

    out.manifest = {
        {"generator_version", "phaselearn-1"},
        {"model", model_name(options.model)},
        {"n", options.n},
        {"depth", options.depth},
        {"count", options.count},
        {"seed", options.seed},
        {"window", {lo, hi}},
        {"grid", grid},
        {"class_balance", {{"label0", label_counts[0]}, {"label1", label_counts[1]}}},
        {"exclusions", std::move(exclusions)},
        {"optimizer",
         {{"kind", config.optimizer == OptimizerKind::Adam ? "adam" : "gd"},
          {"learning_rate", config.learning_rate},
          {"max_iters", config.max_iters},
          {"grad_tolerance", config.grad_tolerance}}},
    };
    return out;
}

} // namespace phaselearn
