#pragma once

// One-hidden-layer sigmoid perceptron for binary classification, trained
// by per-instance SGD on binary cross-entropy.

#include "ecoamlp/data.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ecoamlp {

struct MlpConfig {
    std::size_t input_dim = 0;
    std::size_t hidden_units = 0;
    double learning_rate = 0.1;
    std::uint64_t weight_init_seed = 0;

    void validate() const;

    friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

/// Per-feature affine map x' = (x - offset) * scale applied in front of the
/// input layer. Identity unless fitted.
struct InputScaling {
    std::vector<double> offset;
    std::vector<double> scale;

    static InputScaling identity(std::size_t dim);
    /// offset = mean, scale = 1/std (population); constant features get
    /// scale 0.
    static InputScaling fit(const Dataset& data);

    bool is_identity() const noexcept;

    friend bool operator==(const InputScaling&, const InputScaling&) = default;
};

double sigmoid(double z) noexcept;

class MlpNetwork {
public:
    /// Weights drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)] per
    /// layer (fan_in = input_dim, then hidden_units), biases included,
    /// from xoshiro256** seeded with config.weight_init_seed.
    static MlpNetwork init(const MlpConfig& config);

    const MlpConfig& config() const noexcept { return config_; }
    std::size_t input_dim() const noexcept { return config_.input_dim; }
    std::size_t hidden_units() const noexcept { return config_.hidden_units; }
    double learning_rate() const noexcept { return config_.learning_rate; }
    void set_learning_rate(double rate) { config_.learning_rate = rate; }

    /// hidden_units x (input_dim + 1), row-major, last column is the bias.
    std::span<const double> weights_ih() const noexcept { return weights_ih_; }
    std::span<double> weights_ih() noexcept { return weights_ih_; }
    /// hidden_units + 1, last entry is the bias.
    std::span<const double> weights_ho() const noexcept { return weights_ho_; }
    std::span<double> weights_ho() noexcept { return weights_ho_; }

    std::size_t epochs_trained() const noexcept { return epochs_trained_; }
    void mark_epoch() noexcept { ++epochs_trained_; }

    const InputScaling& scaling() const noexcept { return scaling_; }
    void set_scaling(InputScaling scaling);

    /// Probability of the positive class, in (0, 1). Throws ConfigError on
    /// a dimension mismatch.
    double forward(std::span<const double> features) const;
    /// Pre-activation of the output unit.
    double logit(std::span<const double> features) const;
    /// 1 when forward() >= 0.5.
    int predict(std::span<const double> features) const;

    bool all_finite() const noexcept;

    /// Restores a network from stored parts (used by deserialization).
    static MlpNetwork from_parts(MlpConfig config, std::vector<double> weights_ih, std::vector<double> weights_ho,
                                 std::size_t epochs_trained, InputScaling scaling);

    friend bool operator==(const MlpNetwork&, const MlpNetwork&) = default;

private:
    MlpNetwork() = default;

    MlpConfig config_;
    std::vector<double> weights_ih_;
    std::vector<double> weights_ho_;
    std::size_t epochs_trained_ = 0;
    InputScaling scaling_;
};

struct MlpGradient {
    std::vector<double> ih;
    std::vector<double> ho;
};

/// Mean binary cross-entropy over the dataset.
double mean_loss(const MlpNetwork& net, const Dataset& data);

/// Gradient of mean_loss with respect to every weight, by backpropagation.
MlpGradient loss_gradient(const MlpNetwork& net, const Dataset& data);

/// One SGD pass over `data` in an order shuffled by `shuffle_seed`.
/// Returns the mean per-instance loss observed before each update.
double train_epoch_in_place(MlpNetwork& net, const Dataset& data, std::uint64_t shuffle_seed);

/// Value-semantics wrapper around train_epoch_in_place.
MlpNetwork train_epoch(MlpNetwork net, const Dataset& data, std::uint64_t shuffle_seed);

/// Misclassification rate at the 0.5 threshold.
double evaluate_error(const MlpNetwork& net, const Dataset& data);

} // namespace ecoamlp
