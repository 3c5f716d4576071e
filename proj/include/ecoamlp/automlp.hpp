#pragma once

// Evolutionary ensemble of MLPs: members with different hidden widths and
// learning rates train side by side; after every generation the worst half
// is replaced by freshly initialized offspring whose hyperparameters are
// jittered copies of surviving members'.

#include "ecoamlp/data.hpp"
#include "ecoamlp/mlp.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace ecoamlp {

struct AutoMlpParams {
    std::size_t ensemble_size = 4;
    std::size_t cycles_per_generation = 10;
    std::size_t generations = 10;
    std::size_t hidden_min = 2;
    std::size_t hidden_max = 256;
    double lr_min = 1e-3;
    double lr_max = 1.0;
    std::uint64_t seed = 0;
    /// Offspring copy the parent's weights and width instead of starting
    /// fresh; only the learning rate is resampled.
    bool warm_start = false;
    /// Standardize inputs inside every network using training-set moments.
    bool scale_inputs = true;
    /// Worker threads for member training (0 = hardware concurrency).
    /// Results do not depend on this value.
    std::size_t threads = 0;

    void validate() const;
};

/// Log-space standard deviations of the offspring jitter.
inline constexpr double kHiddenJitterSigma = 0.3;
inline constexpr double kRateJitterSigma = 0.5;

struct Member {
    MlpNetwork network;
    /// Unset until the member has been trained and evaluated once.
    std::optional<double> validation_error;
};

struct MemberRecord {
    std::size_t slot = 0;
    std::size_t hidden_units = 0;
    double learning_rate = 0.0;
    double validation_error = 0.0;
    bool replaced = false;
};

struct GenerationRecord {
    std::size_t generation = 0;
    std::vector<MemberRecord> members;
    double best_error = 0.0;
    /// Minimum of best_error over this and all earlier generations.
    double running_best_error = 0.0;
};

struct AutoMlpPopulation {
    std::vector<Member> members;
    std::size_t generation = 0;
    std::vector<GenerationRecord> history;
    InputScaling scaling;
};

/// Hidden widths and learning rates drawn log-uniformly over the configured
/// ranges; every member gets its own derived weight seed.
AutoMlpPopulation init_population(const AutoMlpParams& params, std::size_t input_dim);

/// Trains every member for cycles_per_generation epochs, ranks them by
/// validation error (ties by slot), records the generation, and replaces
/// the worst floor(size/2) members with offspring of the survivors.
AutoMlpPopulation run_generation(AutoMlpPopulation population, const Dataset& train, const Dataset& validation,
                                 const AutoMlpParams& params);

struct AutoMlpResult {
    MlpNetwork winner;
    std::size_t winner_slot = 0;
    double winner_validation_error = 0.0;
    AutoMlpPopulation population;
};

/// Member with the lowest validation error in the last generation (ties by
/// slot).
AutoMlpResult select_winner(AutoMlpPopulation population);

/// Full run over `generations` generations. Only train and validation are
/// read.
AutoMlpResult train_automlp(const Dataset& train, const Dataset& validation, const AutoMlpParams& params);
AutoMlpResult train_automlp(const DataSplit& split, const AutoMlpParams& params);

} // namespace ecoamlp
