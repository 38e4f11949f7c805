#ifndef RISKWARN_BPNET_HPP
#define RISKWARN_BPNET_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskwarn/dataprep.hpp"
#include "riskwarn/rng.hpp"

namespace riskwarn::bpnet {

// ============================================================================
// Activations
// ============================================================================

enum class ActivationKind { Sigmoid, Linear, Relu, LeakyRelu, Prelu };

inline const char* activation_kind_name(ActivationKind k) {
    switch (k) {
        case ActivationKind::Sigmoid: return "sigmoid";
        case ActivationKind::Linear: return "linear";
        case ActivationKind::Relu: return "relu";
        case ActivationKind::LeakyRelu: return "leaky_relu";
        case ActivationKind::Prelu: return "prelu";
    }
    return "?";
}

inline ActivationKind activation_kind_from_name(const std::string& name) {
    if (name == "sigmoid") return ActivationKind::Sigmoid;
    if (name == "linear") return ActivationKind::Linear;
    if (name == "relu") return ActivationKind::Relu;
    if (name == "leaky_relu") return ActivationKind::LeakyRelu;
    if (name == "prelu") return ActivationKind::Prelu;
    throw std::invalid_argument("unknown activation kind '" + name + "'");
}

/// Unit activation. `alpha` is the negative-side slope: fixed at 0.01 for
/// leaky ReLU, user-chosen for parametric ReLU, ignored otherwise.
struct Activation {
    ActivationKind kind = ActivationKind::Sigmoid;
    double alpha = 0.01;

    static Activation sigmoid() { return {ActivationKind::Sigmoid, 0.0}; }
    static Activation linear() { return {ActivationKind::Linear, 0.0}; }
    static Activation relu() { return {ActivationKind::Relu, 0.0}; }
    static Activation leaky_relu() { return {ActivationKind::LeakyRelu, 0.01}; }
    static Activation prelu(double alpha) { return {ActivationKind::Prelu, alpha}; }

    void validate() const {
        if ((kind == ActivationKind::LeakyRelu || kind == ActivationKind::Prelu) && !(alpha > 0.0)) {
            throw std::invalid_argument("activation: alpha must be positive for leaky/parametric relu");
        }
    }
};

inline double activation_apply(const Activation& a, double x) {
    switch (a.kind) {
        case ActivationKind::Sigmoid: {
            if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
            const double e = std::exp(x);
            return e / (1.0 + e);
        }
        case ActivationKind::Linear: return x;
        case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
        case ActivationKind::LeakyRelu:
        case ActivationKind::Prelu: return x > 0.0 ? x : a.alpha * x;
    }
    return x;
}

/// Derivative w.r.t. the pre-activation. At the ReLU-family kink (x == 0)
/// the left value is used: 0 for ReLU, alpha for leaky/parametric.
inline double activation_derivative(const Activation& a, double x) {
    switch (a.kind) {
        case ActivationKind::Sigmoid: {
            const double s = activation_apply(a, x);
            return s * (1.0 - s);
        }
        case ActivationKind::Linear: return 1.0;
        case ActivationKind::Relu: return x > 0.0 ? 1.0 : 0.0;
        case ActivationKind::LeakyRelu:
        case ActivationKind::Prelu: return x > 0.0 ? 1.0 : a.alpha;
    }
    return 1.0;
}

// ============================================================================
// Network
// ============================================================================

/// Three-layer feedforward network: n inputs, one hidden layer of r units,
/// a single output unit. Weight layout is row-major (w1[j*n + i] connects
/// input i to hidden unit j).
struct Network {
    int inputs = 0;   // n
    int hidden = 0;   // r
    std::vector<double> w1;  // r x n
    std::vector<double> b1;  // r
    std::vector<double> w2;  // 1 x r
    double b2 = 0.0;
    Activation hidden_activation;
    Activation output_activation;

    std::size_t parameter_count() const {
        return w1.size() + b1.size() + w2.size() + 1;
    }

    void validate() const {
        if (inputs < 1) throw std::invalid_argument("network: need at least one input");
        if (hidden < 1) throw std::invalid_argument("network: need at least one hidden unit");
        if (w1.size() != static_cast<std::size_t>(inputs) * static_cast<std::size_t>(hidden) ||
            b1.size() != static_cast<std::size_t>(hidden) ||
            w2.size() != static_cast<std::size_t>(hidden)) {
            throw std::invalid_argument("network: weight shapes do not match n and r");
        }
        for (double v : w1) {
            if (!std::isfinite(v)) throw std::invalid_argument("network: non-finite weight");
        }
        for (double v : b1) {
            if (!std::isfinite(v)) throw std::invalid_argument("network: non-finite bias");
        }
        for (double v : w2) {
            if (!std::isfinite(v)) throw std::invalid_argument("network: non-finite weight");
        }
        if (!std::isfinite(b2)) throw std::invalid_argument("network: non-finite bias");
        hidden_activation.validate();
        output_activation.validate();
    }
};

/// Midpoint of the admissible range 1 < r < n.
inline int default_hidden_width(int n) {
    const int r = (n + 2) / 2;  // ceil((n+1)/2)
    return std::max(2, std::min(r, n - 1));
}

/// Weights drawn uniformly from [-init_scale, init_scale], biases zero.
/// The width constraint 1 < r < n is enforced unless `allow_any_width`.
inline Network init_network(int n, int r, Activation hidden, Activation output,
                            double init_scale, std::uint64_t seed,
                            bool allow_any_width = false) {
    if (n < 1) throw std::invalid_argument("init_network: need at least one input");
    if (r < 1) throw std::invalid_argument("init_network: need at least one hidden unit");
    if (!allow_any_width && !(1 < r && r < n)) {
        throw std::invalid_argument("init_network: hidden width " + std::to_string(r) +
                                    " violates 1 < r < n for n = " + std::to_string(n) +
                                    " (pass the override to relax)");
    }
    if (init_scale < 0.0) throw std::invalid_argument("init_network: negative init scale");
    hidden.validate();
    output.validate();

    Network net;
    net.inputs = n;
    net.hidden = r;
    net.hidden_activation = hidden;
    net.output_activation = output;
    net.b1.assign(static_cast<std::size_t>(r), 0.0);
    net.b2 = 0.0;

    Rng rng(seed);
    net.w1.resize(static_cast<std::size_t>(r) * static_cast<std::size_t>(n));
    for (double& w : net.w1) w = rng.uniform(-init_scale, init_scale);
    net.w2.resize(static_cast<std::size_t>(r));
    for (double& w : net.w2) w = rng.uniform(-init_scale, init_scale);
    return net;
}

// ============================================================================
// Forward / loss / backward
// ============================================================================

/// Everything backprop needs from a forward pass.
struct ForwardTrace {
    std::vector<double> z1;  // hidden pre-activations
    std::vector<double> h;   // hidden activations
    double z2 = 0.0;         // output pre-activation
    double y = 0.0;          // network output
};

inline ForwardTrace forward(const Network& net, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(net.inputs)) {
        throw std::invalid_argument("forward: input has dimension " + std::to_string(x.size()) +
                                    ", network expects " + std::to_string(net.inputs));
    }
    const std::size_t n = static_cast<std::size_t>(net.inputs);
    const std::size_t r = static_cast<std::size_t>(net.hidden);

    ForwardTrace trace;
    trace.z1.resize(r);
    trace.h.resize(r);
    for (std::size_t j = 0; j < r; ++j) {
        double z = net.b1[j];
        const double* row = net.w1.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) z += row[i] * x[i];
        trace.z1[j] = z;
        trace.h[j] = activation_apply(net.hidden_activation, z);
    }
    double z2 = net.b2;
    for (std::size_t j = 0; j < r; ++j) z2 += net.w2[j] * trace.h[j];
    trace.z2 = z2;
    trace.y = activation_apply(net.output_activation, z2);
    return trace;
}

inline double predict(const Network& net, std::span<const double> x) {
    return forward(net, x).y;
}

inline double mse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size()) {
        throw std::invalid_argument("mse: length mismatch");
    }
    if (predictions.empty()) throw std::invalid_argument("mse: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - targets[i];
        s += d * d;
    }
    return s / static_cast<double>(predictions.size());
}

/// Gradients of the squared error (y - target)^2, shaped like the network.
struct Gradients {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;

    static Gradients zeros_like(const Network& net) {
        Gradients g;
        g.w1.assign(net.w1.size(), 0.0);
        g.b1.assign(net.b1.size(), 0.0);
        g.w2.assign(net.w2.size(), 0.0);
        return g;
    }

    void accumulate(const Gradients& other) {
        for (std::size_t i = 0; i < w1.size(); ++i) w1[i] += other.w1[i];
        for (std::size_t i = 0; i < b1.size(); ++i) b1[i] += other.b1[i];
        for (std::size_t i = 0; i < w2.size(); ++i) w2[i] += other.w2[i];
        b2 += other.b2;
    }

    void scale(double f) {
        for (double& v : w1) v *= f;
        for (double& v : b1) v *= f;
        for (double& v : w2) v *= f;
        b2 *= f;
    }
};

/// Exact chain-rule gradients of L = (y - target)^2 for one sample.
inline Gradients backprop(const Network& net, std::span<const double> x, double target) {
    const ForwardTrace trace = forward(net, x);
    const std::size_t n = static_cast<std::size_t>(net.inputs);
    const std::size_t r = static_cast<std::size_t>(net.hidden);

    Gradients grads = Gradients::zeros_like(net);
    const double dl_dy = 2.0 * (trace.y - target);
    const double delta2 = dl_dy * activation_derivative(net.output_activation, trace.z2);
    if (!std::isfinite(delta2)) {
        throw std::runtime_error("backprop: non-finite output error signal");
    }

    grads.b2 = delta2;
    for (std::size_t j = 0; j < r; ++j) {
        grads.w2[j] = delta2 * trace.h[j];
        const double delta1 = delta2 * net.w2[j] *
                              activation_derivative(net.hidden_activation, trace.z1[j]);
        grads.b1[j] = delta1;
        double* row = grads.w1.data() + j * n;
        for (std::size_t i = 0; i < n; ++i) row[i] = delta1 * x[i];
    }
    return grads;
}

/// Central-difference verification of backprop. Returns the maximum relative
/// error over all parameters, with |a - b| / max(|a|, |b|, 1e-12).
inline double grad_check(Network net, std::span<const double> x, double target, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("grad_check: epsilon must be positive");

    const Gradients analytic = backprop(net, x, target);
    auto loss = [&net, &x, target]() {
        const double y = predict(net, x);
        return (y - target) * (y - target);
    };
    auto central = [&](double& param) {
        const double saved = param;
        param = saved + epsilon;
        const double up = loss();
        param = saved - epsilon;
        const double down = loss();
        param = saved;
        return (up - down) / (2.0 * epsilon);
    };
    auto rel_error = [](double a, double b) {
        const double denom = std::max({std::fabs(a), std::fabs(b), 1e-12});
        return std::fabs(a - b) / denom;
    };

    double worst = 0.0;
    for (std::size_t i = 0; i < net.w1.size(); ++i) {
        worst = std::max(worst, rel_error(analytic.w1[i], central(net.w1[i])));
    }
    for (std::size_t i = 0; i < net.b1.size(); ++i) {
        worst = std::max(worst, rel_error(analytic.b1[i], central(net.b1[i])));
    }
    for (std::size_t i = 0; i < net.w2.size(); ++i) {
        worst = std::max(worst, rel_error(analytic.w2[i], central(net.w2[i])));
    }
    worst = std::max(worst, rel_error(analytic.b2, central(net.b2)));
    return worst;
}

// ============================================================================
// Training
// ============================================================================

enum class BatchMode { FullBatch, PerSample };

struct TrainConfig {
    double learning_rate = 0.5;
    int max_epochs = 2000;
    double target_mse = 0.01;
    std::uint64_t seed = 0;
    double init_scale = 0.5;
    BatchMode batch_mode = BatchMode::FullBatch;

    void validate() const {
        if (!(learning_rate >= 0.0)) throw std::invalid_argument("train: negative learning rate");
        if (max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");
        if (!(target_mse > 0.0)) throw std::invalid_argument("train: target_mse must be positive");
        if (!(init_scale > 0.0)) throw std::invalid_argument("train: init_scale must be positive");
    }
};

enum class TrainStatus { TargetReached, MaxEpochs };

/// Per-epoch MSE record; entry 0 is the untouched starting network.
struct TrainHistory {
    struct Entry {
        int epoch;
        double mse;
    };
    std::vector<Entry> entries;
    TrainStatus status = TrainStatus::MaxEpochs;

    double final_mse() const { return entries.back().mse; }
    int epochs_run() const { return entries.back().epoch; }
};

struct TrainResult {
    Network net;
    TrainHistory history;
};

inline void save_history_csv(const TrainHistory& history, std::ostream& out) {
    out << "epoch,mse\n";
    char buf[64];
    for (const auto& e : history.entries) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.mse);
        out << e.epoch << ',' << buf << '\n';
    }
}

namespace detail_train {

inline double target_value(dataprep::Label label) {
    return label == dataprep::Label::St ? 1.0 : 0.0;
}

inline void check_target_range(const Activation& out, double t) {
    switch (out.kind) {
        case ActivationKind::Sigmoid:
            if (t < 0.0 || t > 1.0) {
                throw std::invalid_argument("train: target outside [0,1] for sigmoid output");
            }
            break;
        case ActivationKind::Relu:
            if (t < 0.0) throw std::invalid_argument("train: negative target for relu output");
            break;
        default:
            break;
    }
}

inline double dataset_mse(const Network& net, const dataprep::Dataset& data) {
    double s = 0.0;
    for (const auto& sample : data.samples) {
        const double d = predict(net, sample.features) - target_value(sample.label);
        s += d * d;
    }
    return s / static_cast<double>(data.size());
}

inline void apply_update(Network& net, const Gradients& g, double lr) {
    for (std::size_t i = 0; i < net.w1.size(); ++i) net.w1[i] -= lr * g.w1[i];
    for (std::size_t i = 0; i < net.b1.size(); ++i) net.b1[i] -= lr * g.b1[i];
    for (std::size_t i = 0; i < net.w2.size(); ++i) net.w2[i] -= lr * g.w2[i];
    net.b2 -= lr * g.b2;
}

}  // namespace detail_train

/// Gradient descent on the mean squared error. FullBatch averages sample
/// gradients once per epoch; PerSample updates after every sample in a
/// seed-shuffled order. Stops once the epoch MSE drops below target_mse.
inline TrainResult train(Network net, const dataprep::Dataset& data, const TrainConfig& config) {
    net.validate();
    config.validate();
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    if (data.dim() != static_cast<std::size_t>(net.inputs)) {
        throw std::invalid_argument("train: dataset feature dimension " + std::to_string(data.dim()) +
                                    " does not match network inputs " + std::to_string(net.inputs));
    }
    for (const auto& sample : data.samples) {
        detail_train::check_target_range(net.output_activation,
                                         detail_train::target_value(sample.label));
    }

    TrainResult result;
    result.history.entries.push_back({0, detail_train::dataset_mse(net, data)});
    if (result.history.entries[0].mse < config.target_mse) {
        result.history.status = TrainStatus::TargetReached;
        result.net = std::move(net);
        return result;
    }

    Rng shuffle_rng(config.seed);
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        if (config.batch_mode == BatchMode::FullBatch) {
            Gradients total = Gradients::zeros_like(net);
            for (const auto& sample : data.samples) {
                total.accumulate(backprop(net, sample.features,
                                          detail_train::target_value(sample.label)));
            }
            total.scale(1.0 / static_cast<double>(data.size()));
            detail_train::apply_update(net, total, config.learning_rate);
        } else {
            shuffle_rng.shuffle(order);
            for (std::size_t idx : order) {
                const auto& sample = data.samples[idx];
                const Gradients g = backprop(net, sample.features,
                                             detail_train::target_value(sample.label));
                detail_train::apply_update(net, g, config.learning_rate);
            }
        }

        const double epoch_mse = detail_train::dataset_mse(net, data);
        if (!std::isfinite(epoch_mse)) {
            throw std::runtime_error("train: loss diverged to a non-finite value at epoch " +
                                     std::to_string(epoch));
        }
        result.history.entries.push_back({epoch, epoch_mse});
        if (epoch_mse < config.target_mse) {
            result.history.status = TrainStatus::TargetReached;
            break;
        }
    }
    result.net = std::move(net);
    return result;
}

}  // namespace riskwarn::bpnet

#endif  // RISKWARN_BPNET_HPP
