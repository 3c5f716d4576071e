#include "ecoamlp/mlp.hpp"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/kernels.hpp"
#include "ecoamlp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ecoamlp {

namespace {

constexpr double kOutputFloor = 0x1.0p-53;

// log(1 + e^z) without overflow.
double softplus(double z) noexcept {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Cross-entropy of a logit against a 0/1 target.
double bce_from_logit(double z, int target) noexcept { return softplus(z) - (target == 1 ? z : 0.0); }

// Forward pass buffers for one instance.
struct Activations {
    std::vector<double> input;  // scaled features
    std::vector<double> hidden; // sigmoid outputs
    double logit = 0.0;
};

void run_forward(const MlpNetwork& net, std::span<const double> features, Activations& act) {
    const std::size_t in = net.input_dim();
    const std::size_t hidden = net.hidden_units();
    const auto& scaling = net.scaling();
    act.input.resize(in);
    for (std::size_t i = 0; i < in; ++i) {
        act.input[i] = (features[i] - scaling.offset[i]) * scaling.scale[i];
    }
    act.hidden.resize(hidden);
    const auto w_ih = net.weights_ih();
    const std::size_t stride = in + 1;
    for (std::size_t j = 0; j < hidden; ++j) {
        const auto row = w_ih.subspan(j * stride, stride);
        act.hidden[j] = sigmoid(kernels::dot(row.first(in), act.input) + row[in]);
    }
    const auto w_ho = net.weights_ho();
    act.logit = kernels::dot(w_ho.first(hidden), act.hidden) + w_ho[hidden];
}

void check_dim(const MlpNetwork& net, std::size_t dim) {
    if (dim != net.input_dim()) {
        throw ConfigError("mlp: expected " + std::to_string(net.input_dim()) + " features, got " +
                          std::to_string(dim));
    }
}

} // namespace

void MlpConfig::validate() const {
    if (input_dim == 0) {
        throw ConfigError("mlp: input_dim must be positive");
    }
    if (hidden_units == 0) {
        throw ConfigError("mlp: hidden_units must be positive");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("mlp: learning_rate must be a finite non-negative number");
    }
}

InputScaling InputScaling::identity(std::size_t dim) {
    return InputScaling{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

InputScaling InputScaling::fit(const Dataset& data) {
    const std::size_t dim = data.arity();
    auto out = identity(dim);
    if (data.empty()) {
        return out;
    }
    const auto n = static_cast<double>(data.size());
    for (std::size_t j = 0; j < dim; ++j) {
        double mean = 0.0;
        for (const auto& inst : data.instances()) {
            mean += inst.features[j];
        }
        mean /= n;
        double var = 0.0;
        for (const auto& inst : data.instances()) {
            const double d = inst.features[j] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        out.offset[j] = mean;
        out.scale[j] = sd > 0.0 ? 1.0 / sd : 0.0;
    }
    return out;
}

bool InputScaling::is_identity() const noexcept {
    return std::all_of(offset.begin(), offset.end(), [](double v) { return v == 0.0; }) &&
           std::all_of(scale.begin(), scale.end(), [](double v) { return v == 1.0; });
}

double sigmoid(double z) noexcept {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

MlpNetwork MlpNetwork::init(const MlpConfig& config) {
    config.validate();
    MlpNetwork net;
    net.config_ = config;
    net.scaling_ = InputScaling::identity(config.input_dim);
    Xoshiro256 rng(config.weight_init_seed);
    const double ih_bound = 1.0 / std::sqrt(static_cast<double>(config.input_dim));
    net.weights_ih_.resize(config.hidden_units * (config.input_dim + 1));
    for (auto& w : net.weights_ih_) {
        w = rng.uniform(-ih_bound, ih_bound);
    }
    const double ho_bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_units));
    net.weights_ho_.resize(config.hidden_units + 1);
    for (auto& w : net.weights_ho_) {
        w = rng.uniform(-ho_bound, ho_bound);
    }
    return net;
}

MlpNetwork MlpNetwork::from_parts(MlpConfig config, std::vector<double> weights_ih, std::vector<double> weights_ho,
                                  std::size_t epochs_trained, InputScaling scaling) {
    config.validate();
    if (weights_ih.size() != config.hidden_units * (config.input_dim + 1) ||
        weights_ho.size() != config.hidden_units + 1) {
        throw DataError("mlp: weight arrays do not match the configured topology");
    }
    MlpNetwork net;
    net.config_ = config;
    net.weights_ih_ = std::move(weights_ih);
    net.weights_ho_ = std::move(weights_ho);
    net.epochs_trained_ = epochs_trained;
    net.set_scaling(std::move(scaling));
    if (!net.all_finite()) {
        throw DataError("mlp: non-finite weight");
    }
    return net;
}

void MlpNetwork::set_scaling(InputScaling scaling) {
    if (scaling.offset.size() != config_.input_dim || scaling.scale.size() != config_.input_dim) {
        throw ConfigError("mlp: input scaling does not match input_dim");
    }
    scaling_ = std::move(scaling);
}

double MlpNetwork::logit(std::span<const double> features) const {
    check_dim(*this, features.size());
    Activations act;
    run_forward(*this, features, act);
    return act.logit;
}

double MlpNetwork::forward(std::span<const double> features) const {
    return std::clamp(sigmoid(logit(features)), kOutputFloor, 1.0 - kOutputFloor);
}

int MlpNetwork::predict(std::span<const double> features) const { return forward(features) >= 0.5 ? 1 : 0; }

bool MlpNetwork::all_finite() const noexcept {
    const auto finite = [](double v) { return std::isfinite(v); };
    return std::all_of(weights_ih_.begin(), weights_ih_.end(), finite) &&
           std::all_of(weights_ho_.begin(), weights_ho_.end(), finite);
}

double mean_loss(const MlpNetwork& net, const Dataset& data) {
    check_dim(net, data.arity());
    if (data.empty()) {
        throw DataError("mlp: loss over an empty dataset");
    }
    Activations act;
    double total = 0.0;
    for (const auto& inst : data.instances()) {
        run_forward(net, inst.features, act);
        total += bce_from_logit(act.logit, inst.label);
    }
    return total / static_cast<double>(data.size());
}

MlpGradient loss_gradient(const MlpNetwork& net, const Dataset& data) {
    check_dim(net, data.arity());
    if (data.empty()) {
        throw DataError("mlp: gradient over an empty dataset");
    }
    const std::size_t in = net.input_dim();
    const std::size_t hidden = net.hidden_units();
    const std::size_t stride = in + 1;
    MlpGradient grad{std::vector<double>(net.weights_ih().size(), 0.0),
                     std::vector<double>(net.weights_ho().size(), 0.0)};
    const double inv_n = 1.0 / static_cast<double>(data.size());
    const auto w_ho = net.weights_ho();
    Activations act;
    for (const auto& inst : data.instances()) {
        run_forward(net, inst.features, act);
        const double delta_out = (sigmoid(act.logit) - inst.label) * inv_n;
        for (std::size_t j = 0; j < hidden; ++j) {
            grad.ho[j] += delta_out * act.hidden[j];
            const double h = act.hidden[j];
            const double delta_h = delta_out * w_ho[j] * h * (1.0 - h);
            for (std::size_t i = 0; i < in; ++i) {
                grad.ih[j * stride + i] += delta_h * act.input[i];
            }
            grad.ih[j * stride + in] += delta_h;
        }
        grad.ho[hidden] += delta_out;
    }
    return grad;
}

double train_epoch_in_place(MlpNetwork& net, const Dataset& data, std::uint64_t shuffle_seed) {
    check_dim(net, data.arity());
    if (data.empty()) {
        throw DataError("mlp: training on an empty dataset");
    }
    const std::size_t in = net.input_dim();
    const std::size_t hidden = net.hidden_units();
    const std::size_t stride = in + 1;
    const double rate = net.learning_rate();

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Xoshiro256 rng(shuffle_seed);
    shuffle(std::span(order), rng);

    Activations act;
    std::vector<double> delta_hidden(hidden);
    double total_loss = 0.0;
    for (std::size_t idx : order) {
        const auto& inst = data[idx];
        run_forward(net, inst.features, act);
        total_loss += bce_from_logit(act.logit, inst.label);
        const double delta_out = sigmoid(act.logit) - inst.label;

        auto w_ho = net.weights_ho();
        for (std::size_t j = 0; j < hidden; ++j) {
            const double h = act.hidden[j];
            delta_hidden[j] = delta_out * w_ho[j] * h * (1.0 - h);
        }
        kernels::axpy(-rate * delta_out, act.hidden, w_ho.first(hidden));
        w_ho[hidden] -= rate * delta_out;

        auto w_ih = net.weights_ih();
        for (std::size_t j = 0; j < hidden; ++j) {
            auto row = w_ih.subspan(j * stride, stride);
            kernels::axpy(-rate * delta_hidden[j], act.input, row.first(in));
            row[in] -= rate * delta_hidden[j];
        }
    }
    net.mark_epoch();
    return total_loss / static_cast<double>(data.size());
}

MlpNetwork train_epoch(MlpNetwork net, const Dataset& data, std::uint64_t shuffle_seed) {
    train_epoch_in_place(net, data, shuffle_seed);
    return net;
}

double evaluate_error(const MlpNetwork& net, const Dataset& data) {
    check_dim(net, data.arity());
    if (data.empty()) {
        throw DataError("mlp: evaluation on an empty dataset");
    }
    std::size_t wrong = 0;
    for (const auto& inst : data.instances()) {
        wrong += net.predict(inst.features) != inst.label ? 1 : 0;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

} // namespace ecoamlp
