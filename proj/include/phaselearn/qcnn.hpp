#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phaselearn/dataset.hpp"
#include "phaselearn/rng.hpp"
#include "phaselearn/statevector.hpp"
#include "phaselearn/threading.hpp"

namespace phaselearn {

/// One quantum stage: a dense map onto 3 angle offsets feeding the 3-qubit
/// circuit (H then RY per qubit), read out as the 7 basis probabilities below
/// the all-ones outcome.
struct QuantumStage {
    int in_dim = 0;
    std::vector<double> fc_w;  // 3 x in_dim, row-major
    std::vector<double> fc_b;  // 3
    std::vector<double> thetas;  // 3 trainable angles
};

/// Hybrid classifier: conv1d (kernel = feature length, 30 channels), ReLU,
/// max-pool of kernel 1 (identity at this length), two dense layers, one or
/// more quantum stages, dropout on the 7 quantum outputs, dense to a single
/// sigmoid probability.
struct QcnnModel {
    int feature_len = 0;
    int conv_channels = 30;
    int hidden = 16;
    double dropout_p = 0.5;
    std::vector<double> conv_w;  // conv_channels x feature_len
    std::vector<double> conv_b;
    std::vector<double> fc1_w;  // hidden x conv_channels
    std::vector<double> fc1_b;
    std::vector<QuantumStage> stages;  // stage 0 reads `hidden`, later ones 7
    std::vector<double> fc3_w;  // 7
    std::vector<double> fc3_b;  // 1
};

/// Mutable views over every trainable array, in a fixed order.
inline std::vector<std::span<double>> parameter_arrays(QcnnModel& model) {
    std::vector<std::span<double>> arrays = {model.conv_w, model.conv_b, model.fc1_w,
                                             model.fc1_b};
    for (QuantumStage& stage : model.stages) {
        arrays.emplace_back(stage.fc_w);
        arrays.emplace_back(stage.fc_b);
        arrays.emplace_back(stage.thetas);
    }
    arrays.emplace_back(model.fc3_w);
    arrays.emplace_back(model.fc3_b);
    return arrays;
}

inline std::size_t parameter_count(QcnnModel& model) {
    std::size_t total = 0;
    for (const auto& a : parameter_arrays(model)) total += a.size();
    return total;
}

/// Zero-filled gradient container with the model's shapes.
inline QcnnModel zeros_like(const QcnnModel& model) {
    QcnnModel z = model;
    for (auto& a : parameter_arrays(z)) std::fill(a.begin(), a.end(), 0.0);
    return z;
}

inline QcnnModel init_qcnn_model(int feature_len, int hidden, int quantum_stages,
                                 std::uint64_t seed) {
    if (feature_len < 1) throw std::invalid_argument("feature length must be >= 1");
    if (hidden < 1) throw std::invalid_argument("hidden width must be >= 1");
    if (quantum_stages < 1) throw std::invalid_argument("need at least one quantum stage");
    QcnnModel model;
    model.feature_len = feature_len;
    model.hidden = hidden;

    std::mt19937_64 rng = make_engine(mix_seed(seed, 0xA11C0DE));
    auto fill_normal = [&](std::vector<double>& v, std::size_t count, double stddev) {
        v.resize(count);
        std::normal_distribution<double> dist(0.0, stddev);
        for (double& x : v) x = dist(rng);
    };
    const auto c = static_cast<std::size_t>(model.conv_channels);
    const auto l = static_cast<std::size_t>(feature_len);
    const auto h = static_cast<std::size_t>(hidden);
    fill_normal(model.conv_w, c * l, std::sqrt(2.0 / static_cast<double>(l)));
    model.conv_b.assign(c, 0.0);
    fill_normal(model.fc1_w, h * c, std::sqrt(2.0 / static_cast<double>(c)));
    model.fc1_b.assign(h, 0.0);
    for (int s = 0; s < quantum_stages; ++s) {
        QuantumStage stage;
        stage.in_dim = (s == 0) ? hidden : 7;
        const auto in = static_cast<std::size_t>(stage.in_dim);
        fill_normal(stage.fc_w, 3 * in, std::sqrt(1.0 / static_cast<double>(in)));
        stage.fc_b.assign(3, 0.0);
        fill_normal(stage.thetas, 3, 0.1);
        model.stages.push_back(std::move(stage));
    }
    fill_normal(model.fc3_w, 7, std::sqrt(1.0 / 7.0));
    model.fc3_b.assign(1, 0.0);
    return model;
}

/// All eight outcome probabilities of the 3-qubit circuit H then RY(phi_q),
/// computed through the statevector simulator.
inline std::array<double, 8> quantum_layer_probabilities(const std::array<double, 3>& phi) {
    StateVector state(3);
    for (int q = 0; q < 3; ++q) state.apply_gate(GateOp::h(q));
    for (int q = 0; q < 3; ++q) state.apply_gate(GateOp::ry(q, phi[static_cast<std::size_t>(q)]));
    const std::vector<double> probs = basis_probabilities(state);
    std::array<double, 8> out{};
    std::copy(probs.begin(), probs.end(), out.begin());
    return out;
}

/// The 7 outputs for inputs x and trainable angles thetas; the effective
/// angle is phi_q = x_q + theta_q, outcomes ordered by basis index 0..6
/// (the all-ones outcome is dropped).
inline std::array<double, 7> quantum_layer_forward(const std::array<double, 3>& x,
                                                   const std::array<double, 3>& thetas) {
    const std::array<double, 3> phi = {x[0] + thetas[0], x[1] + thetas[1], x[2] + thetas[2]};
    const std::array<double, 8> probs = quantum_layer_probabilities(phi);
    std::array<double, 7> out{};
    std::copy_n(probs.begin(), 7, out.begin());
    return out;
}

/// Binary cross-entropy with the prediction snapped into [1e-12, 1-1e-12].
inline double loss(double prediction, int label) {
    if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
    const double p = std::clamp(prediction, 1e-12, 1.0 - 1e-12);
    return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

namespace detail {

struct StageTrace {
    std::vector<double> input;
    std::array<double, 3> pre{};  // dense output before the angle offset
    std::array<double, 3> phi{};
    std::array<double, 7> probs{};
};

struct ForwardTrace {
    std::vector<double> conv_pre, conv_post;
    std::vector<double> fc1_pre, fc1_post;
    std::vector<StageTrace> stages;
    std::array<double, 7> dropout_scale{};  // 0 or 1/(1-p) per output
    std::array<double, 7> dropped{};
    double logit = 0.0;
    double probability = 0.0;
};

inline ForwardTrace forward_trace(const QcnnModel& model, std::span<const double> features,
                                  bool training, std::mt19937_64* rng) {
    if (features.size() != static_cast<std::size_t>(model.feature_len)) {
        throw std::invalid_argument("feature vector has length " +
                                    std::to_string(features.size()) + ", model expects " +
                                    std::to_string(model.feature_len));
    }
    if (training && rng == nullptr) {
        throw std::invalid_argument("training-mode forward needs an RNG for dropout");
    }
    ForwardTrace trace;
    const auto channels = static_cast<std::size_t>(model.conv_channels);
    const auto len = static_cast<std::size_t>(model.feature_len);

    // Kernel length equals the feature length, so each channel emits one
    // scalar; the kernel-1 max pool over that length-1 map is the identity.
    trace.conv_pre.resize(channels);
    trace.conv_post.resize(channels);
    for (std::size_t c = 0; c < channels; ++c) {
        double acc = model.conv_b[c];
        const double* w = model.conv_w.data() + c * len;
        for (std::size_t i = 0; i < len; ++i) acc += w[i] * features[i];
        trace.conv_pre[c] = acc;
        trace.conv_post[c] = std::max(acc, 0.0);
    }

    const auto hidden = static_cast<std::size_t>(model.hidden);
    trace.fc1_pre.resize(hidden);
    trace.fc1_post.resize(hidden);
    for (std::size_t j = 0; j < hidden; ++j) {
        double acc = model.fc1_b[j];
        const double* w = model.fc1_w.data() + j * channels;
        for (std::size_t c = 0; c < channels; ++c) acc += w[c] * trace.conv_post[c];
        trace.fc1_pre[j] = acc;
        trace.fc1_post[j] = std::max(acc, 0.0);
    }

    std::vector<double> current = trace.fc1_post;
    for (const QuantumStage& stage : model.stages) {
        StageTrace st;
        st.input = current;
        const auto in = static_cast<std::size_t>(stage.in_dim);
        if (current.size() != in) throw std::invalid_argument("stage input width mismatch");
        std::array<double, 3> phi{};
        for (std::size_t t = 0; t < 3; ++t) {
            double acc = stage.fc_b[t];
            const double* w = stage.fc_w.data() + t * in;
            for (std::size_t j = 0; j < in; ++j) acc += w[j] * current[j];
            st.pre[t] = acc;
            phi[t] = acc + stage.thetas[t];
        }
        st.phi = phi;
        const std::array<double, 8> probs = quantum_layer_probabilities(phi);
        std::copy_n(probs.begin(), 7, st.probs.begin());
        current.assign(st.probs.begin(), st.probs.end());
        trace.stages.push_back(std::move(st));
    }

    const double keep = 1.0 - model.dropout_p;
    for (std::size_t o = 0; o < 7; ++o) {
        double scale = 1.0;
        if (training) {
            std::bernoulli_distribution drop(model.dropout_p);
            scale = drop(*rng) ? 0.0 : 1.0 / keep;  // inverted dropout
        }
        trace.dropout_scale[o] = scale;
        trace.dropped[o] = current[o] * scale;
    }

    double logit = model.fc3_b[0];
    for (std::size_t o = 0; o < 7; ++o) logit += model.fc3_w[o] * trace.dropped[o];
    trace.logit = logit;
    trace.probability = 1.0 / (1.0 + std::exp(-logit));
    return trace;
}

// Shift-rule Jacobian d probs[o] / d phi[t] of the 7 quantum outputs.
inline std::array<std::array<double, 7>, 3> quantum_jacobian(const std::array<double, 3>& phi) {
    std::array<std::array<double, 7>, 3> jac{};
    const double shift = std::numbers::pi / 2.0;
    for (std::size_t t = 0; t < 3; ++t) {
        std::array<double, 3> plus = phi;
        std::array<double, 3> minus = phi;
        plus[t] += shift;
        minus[t] -= shift;
        const std::array<double, 8> pp = quantum_layer_probabilities(plus);
        const std::array<double, 8> pm = quantum_layer_probabilities(minus);
        for (std::size_t o = 0; o < 7; ++o) jac[t][o] = (pp[o] - pm[o]) / 2.0;
    }
    return jac;
}

// Accumulates d loss / d params for one sample into `grads`.
inline void backward_into(const QcnnModel& model, std::span<const double> features,
                          int label, const ForwardTrace& trace, QcnnModel& grads) {
    const double d_logit = trace.probability - static_cast<double>(label);

    grads.fc3_b[0] += d_logit;
    std::array<double, 7> d_current{};
    for (std::size_t o = 0; o < 7; ++o) {
        grads.fc3_w[o] += d_logit * trace.dropped[o];
        d_current[o] = d_logit * model.fc3_w[o] * trace.dropout_scale[o];
    }

    std::vector<double> d_vec(d_current.begin(), d_current.end());
    for (std::size_t s = model.stages.size(); s-- > 0;) {
        const QuantumStage& stage = model.stages[s];
        const StageTrace& st = trace.stages[s];
        QuantumStage& g = grads.stages[s];
        const auto jac = quantum_jacobian(st.phi);
        std::array<double, 3> d_phi{};
        for (std::size_t t = 0; t < 3; ++t) {
            double acc = 0.0;
            for (std::size_t o = 0; o < 7; ++o) acc += d_vec[o] * jac[t][o];
            d_phi[t] = acc;
            g.thetas[t] += acc;  // d phi / d theta = 1
            g.fc_b[t] += acc;
        }
        const auto in = static_cast<std::size_t>(stage.in_dim);
        std::vector<double> d_input(in, 0.0);
        for (std::size_t t = 0; t < 3; ++t) {
            const double* w = stage.fc_w.data() + t * in;
            double* gw = g.fc_w.data() + t * in;
            for (std::size_t j = 0; j < in; ++j) {
                gw[j] += d_phi[t] * st.input[j];
                d_input[j] += d_phi[t] * w[j];
            }
        }
        d_vec = std::move(d_input);
    }

    const auto hidden = static_cast<std::size_t>(model.hidden);
    const auto channels = static_cast<std::size_t>(model.conv_channels);
    std::vector<double> d_conv(channels, 0.0);
    for (std::size_t j = 0; j < hidden; ++j) {
        const double dh = trace.fc1_pre[j] > 0.0 ? d_vec[j] : 0.0;
        grads.fc1_b[j] += dh;
        const double* w = model.fc1_w.data() + j * channels;
        double* gw = grads.fc1_w.data() + j * channels;
        for (std::size_t c = 0; c < channels; ++c) {
            gw[c] += dh * trace.conv_post[c];
            d_conv[c] += dh * w[c];
        }
    }
    const auto len = static_cast<std::size_t>(model.feature_len);
    for (std::size_t c = 0; c < channels; ++c) {
        const double dc = trace.conv_pre[c] > 0.0 ? d_conv[c] : 0.0;
        grads.conv_b[c] += dc;
        double* gw = grads.conv_w.data() + c * len;
        for (std::size_t i = 0; i < len; ++i) gw[i] += dc * features[i];
    }
}

} // namespace detail

/// Single forward pass. Dropout fires in training mode only, so inference is
/// deterministic.
inline double forward(const QcnnModel& model, std::span<const double> features, bool training,
                      std::mt19937_64* rng = nullptr) {
    return detail::forward_trace(model, features, training, rng).probability;
}

struct Batch {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    // Per-sample dropout seeds; inference-style backward uses training=false.
    std::vector<std::uint64_t> dropout_seeds;
    bool training = true;
};

struct BackwardResult {
    QcnnModel gradients;  // averaged over the batch
    double mean_loss = 0.0;
};

/// Mean-loss gradients over a batch. Samples are processed concurrently into
/// per-sample slots and reduced in sample order, so the result does not
/// depend on the worker count.
inline BackwardResult backward(const QcnnModel& model, const Batch& batch) {
    const std::size_t count = batch.features.size();
    if (count == 0) throw std::invalid_argument("backward needs a non-empty batch");
    if (batch.labels.size() != count ||
        (batch.training && batch.dropout_seeds.size() != count)) {
        throw std::invalid_argument("batch fields have inconsistent lengths");
    }
    std::vector<QcnnModel> partials(count, zeros_like(model));
    std::vector<double> losses(count, 0.0);
    parallel_tasks(count, [&](std::size_t i) {
        std::mt19937_64 rng =
            make_engine(batch.training ? batch.dropout_seeds[i] : 0);
        const auto trace = detail::forward_trace(model, batch.features[i], batch.training,
                                                 batch.training ? &rng : nullptr);
        losses[i] = loss(trace.probability, batch.labels[i]);
        detail::backward_into(model, batch.features[i], batch.labels[i], trace, partials[i]);
    });

    BackwardResult out{zeros_like(model), 0.0};
    auto total = parameter_arrays(out.gradients);
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto part = parameter_arrays(partials[i]);
        for (std::size_t a = 0; a < total.size(); ++a) {
            for (std::size_t k = 0; k < total[a].size(); ++k) total[a][k] += part[a][k] * inv;
        }
        out.mean_loss += losses[i] * inv;
    }
    return out;
}

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 1e-3;
    int batch_size = 16;
    double split_fraction = 0.8;
    double threshold = 0.5;
    std::uint64_t seed = 0;
    int hidden = 16;
    int quantum_stages = 1;
    FeatureMode feature_mode = FeatureMode::PauliExpectations;
    bool augment = false;  // training split only
    int augment_rotations = 1;

    void validate() const {
        if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
        if (!(threshold > 0.0 && threshold < 1.0)) {
            throw std::invalid_argument("threshold must be in (0, 1)");
        }
        if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be positive");
    }
};

struct TrainReport {
    std::vector<double> loss_history;            // mean training loss per epoch
    std::vector<double> train_accuracy_history;  // inference-mode, per epoch
    double test_accuracy = 0.0;
    std::array<std::array<int, 2>, 2> confusion{};  // [actual][predicted]
    std::size_t train_count_raw = 0;
    std::size_t train_count_effective = 0;
    std::size_t test_count = 0;
};

struct EvalEntry {
    double coupling = 0.0;
    double probability = 0.0;
    int label = 0;
};

struct EvalResult {
    double accuracy = 0.0;
    std::array<std::array<int, 2>, 2> confusion{};
    std::vector<EvalEntry> entries;
};

namespace detail {

inline std::vector<std::vector<double>> features_of(const Dataset& records, FeatureMode mode) {
    std::vector<std::vector<double>> features(records.size());
    parallel_tasks(records.size(), [&](std::size_t i) {
        features[i] = record_features(records[i], mode);
    });
    return features;
}

} // namespace detail

/// Inference over records; confusion is indexed [actual][predicted].
inline EvalResult evaluate(const QcnnModel& model, const Dataset& records,
                           FeatureMode mode = FeatureMode::PauliExpectations,
                           double threshold = 0.5) {
    if (records.empty()) throw std::invalid_argument("evaluate needs at least one record");
    const auto features = detail::features_of(records, mode);
    EvalResult result;
    result.entries.resize(records.size());
    parallel_tasks(records.size(), [&](std::size_t i) {
        const double p = forward(model, features[i], false);
        result.entries[i] = {records[i].coupling, p, records[i].label};
    });
    int correct = 0;
    for (const EvalEntry& e : result.entries) {
        const int predicted = e.probability > threshold ? 1 : 0;
        result.confusion[static_cast<std::size_t>(e.label)][static_cast<std::size_t>(predicted)]++;
        if (predicted == e.label) ++correct;
    }
    result.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
    return result;
}

struct TrainOutput {
    QcnnModel model;
    TrainReport report;
};

/// Shuffled 80/20 split, optional symmetry augmentation of the training half,
/// minibatch Adam. Deterministic for a fixed seed and any worker count.
inline TrainOutput train(const Dataset& dataset, const TrainConfig& config) {
    config.validate();
    if (dataset.empty()) throw std::invalid_argument("training needs a non-empty dataset");
    bool has[2] = {false, false};
    for (const auto& r : dataset) has[r.label != 0] = true;
    if (!has[0] || !has[1]) {
        throw std::invalid_argument("training needs records of both classes");
    }

    auto [train_records, test_records] = split(dataset, config.split_fraction, config.seed);
    const std::size_t raw_train = train_records.size();
    if (config.augment) {
        std::mt19937_64 rng = make_engine(mix_seed(config.seed, 0xA06u));
        Dataset augmented;
        for (const SampleRecord& r : train_records) {
            auto variants = augment(r, config.augment_rotations, rng);
            augmented.insert(augmented.end(), variants.begin(), variants.end());
        }
        train_records = std::move(augmented);
    }

    const auto train_features = detail::features_of(train_records, config.feature_mode);
    const std::size_t feature_len = train_features.empty() ? 0 : train_features.front().size();

    TrainOutput out;
    out.model = init_qcnn_model(static_cast<int>(feature_len), config.hidden,
                                config.quantum_stages, config.seed);
    out.report.train_count_raw = raw_train;
    out.report.train_count_effective = train_records.size();
    out.report.test_count = test_records.size();

    QcnnModel adam_m = zeros_like(out.model);
    QcnnModel adam_v = zeros_like(out.model);
    auto params = parameter_arrays(out.model);
    auto m_arrays = parameter_arrays(adam_m);
    auto v_arrays = parameter_arrays(adam_v);
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;
    long step = 0;

    std::vector<std::size_t> order(train_records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 shuffle_rng = make_engine(mix_seed(config.seed, 0x54Fu));

    std::vector<int> labels(train_records.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = train_records[i].label;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            Batch batch;
            batch.training = true;
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t idx = order[i];
                batch.features.push_back(train_features[idx]);
                batch.labels.push_back(labels[idx]);
                batch.dropout_seeds.push_back(
                    mix_seed(mix_seed(config.seed, static_cast<std::uint64_t>(epoch)), idx + 1));
            }
            const BackwardResult grads = backward(out.model, batch);
            epoch_loss += grads.mean_loss;
            ++batches;
            ++step;
            QcnnModel g = grads.gradients;
            auto g_arrays = parameter_arrays(g);
            const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
            for (std::size_t a = 0; a < params.size(); ++a) {
                for (std::size_t k = 0; k < params[a].size(); ++k) {
                    double& m = m_arrays[a][k];
                    double& v = v_arrays[a][k];
                    const double grad = g_arrays[a][k];
                    m = kBeta1 * m + (1.0 - kBeta1) * grad;
                    v = kBeta2 * v + (1.0 - kBeta2) * grad * grad;
                    params[a][k] -=
                        config.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + kEps);
                }
            }
        }
        out.report.loss_history.push_back(epoch_loss / static_cast<double>(batches));

        std::vector<int> predictions(train_records.size());
        parallel_tasks(train_records.size(), [&](std::size_t i) {
            predictions[i] = forward(out.model, train_features[i], false) > config.threshold;
        });
        int correct = 0;
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            correct += predictions[i] == labels[i];
        }
        out.report.train_accuracy_history.push_back(static_cast<double>(correct) /
                                                    static_cast<double>(train_records.size()));
    }

    const EvalResult test = evaluate(out.model, test_records, config.feature_mode,
                                     config.threshold);
    out.report.test_accuracy = test.accuracy;
    out.report.confusion = test.confusion;
    return out;
}

/// Checkpoint round-trip. The file also records which model family and
/// feature layout the classifier was trained on.
inline nlohmann::json checkpoint_to_json(const QcnnModel& model, ModelKind trained_on,
                                         FeatureMode mode) {
    nlohmann::json stages = nlohmann::json::array();
    for (const QuantumStage& s : model.stages) {
        stages.push_back({{"in_dim", s.in_dim},
                          {"fc_w", s.fc_w},
                          {"fc_b", s.fc_b},
                          {"thetas", s.thetas}});
    }
    return nlohmann::json{
        {"format_version", 1},
        {"feature_len", model.feature_len},
        {"conv_channels", model.conv_channels},
        {"hidden", model.hidden},
        {"dropout_p", model.dropout_p},
        {"conv_w", model.conv_w},
        {"conv_b", model.conv_b},
        {"fc1_w", model.fc1_w},
        {"fc1_b", model.fc1_b},
        {"stages", std::move(stages)},
        {"fc3_w", model.fc3_w},
        {"fc3_b", model.fc3_b},
        {"trained_on_model", model_name(trained_on)},
        {"feature_mode",
         mode == FeatureMode::PauliExpectations ? "pauli" : "probabilities"},
    };
}

struct Checkpoint {
    QcnnModel model;
    ModelKind trained_on = ModelKind::TFIM;
    FeatureMode feature_mode = FeatureMode::PauliExpectations;
};

inline Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
    if (doc.at("format_version").get<int>() != 1) {
        throw std::invalid_argument("unsupported checkpoint format version");
    }
    Checkpoint cp;
    cp.model.feature_len = doc.at("feature_len").get<int>();
    cp.model.conv_channels = doc.at("conv_channels").get<int>();
    cp.model.hidden = doc.at("hidden").get<int>();
    cp.model.dropout_p = doc.at("dropout_p").get<double>();
    cp.model.conv_w = doc.at("conv_w").get<std::vector<double>>();
    cp.model.conv_b = doc.at("conv_b").get<std::vector<double>>();
    cp.model.fc1_w = doc.at("fc1_w").get<std::vector<double>>();
    cp.model.fc1_b = doc.at("fc1_b").get<std::vector<double>>();
    for (const auto& s : doc.at("stages")) {
        QuantumStage stage;
        stage.in_dim = s.at("in_dim").get<int>();
        stage.fc_w = s.at("fc_w").get<std::vector<double>>();
        stage.fc_b = s.at("fc_b").get<std::vector<double>>();
        stage.thetas = s.at("thetas").get<std::vector<double>>();
        cp.model.stages.push_back(std::move(stage));
    }
    cp.model.fc3_w = doc.at("fc3_w").get<std::vector<double>>();
    cp.model.fc3_b = doc.at("fc3_b").get<std::vector<double>>();
    cp.trained_on = model_from_name(doc.at("trained_on_model").get<std::string>());
    cp.feature_mode = doc.at("feature_mode").get<std::string>() == "probabilities"
                          ? FeatureMode::BasisProbabilities
                          : FeatureMode::PauliExpectations;
    return cp;
}

inline void save_checkpoint(const std::string& path, const QcnnModel& model,
                            ModelKind trained_on, FeatureMode mode) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << checkpoint_to_json(model, trained_on, mode).dump(2) << '\n';
}

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json doc;
    in >> doc;
    return checkpoint_from_json(doc);
}

} // namespace phaselearn
