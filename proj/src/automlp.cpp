#include "ecoamlp/automlp.hpp"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/rng.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ecoamlp {

namespace {

// Sub-seed stream tags.
enum : std::uint64_t { kInitWeights = 0, kInitHyper = 1, kShuffle = 2, kOffspringHyper = 3, kOffspringWeights = 4 };

std::size_t clamp_width(double width, const AutoMlpParams& params) {
    const double rounded = std::round(width);
    return static_cast<std::size_t>(
        std::clamp(rounded, static_cast<double>(params.hidden_min), static_cast<double>(params.hidden_max)));
}

double log_uniform(Xoshiro256& rng, double lo, double hi) {
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

MlpNetwork fresh_network(std::size_t input_dim, std::size_t hidden, double rate, std::uint64_t seed,
                         const InputScaling& scaling) {
    auto net = MlpNetwork::init(MlpConfig{input_dim, hidden, rate, seed});
    net.set_scaling(scaling);
    return net;
}

} // namespace

void AutoMlpParams::validate() const {
    if (ensemble_size < 2) {
        throw ConfigError("automlp: ensemble_size must be at least 2");
    }
    if (cycles_per_generation == 0 || generations == 0) {
        throw ConfigError("automlp: cycles and generations must be positive");
    }
    if (hidden_min == 0 || hidden_min >= hidden_max) {
        throw ConfigError("automlp: hidden range must satisfy 0 < min < max");
    }
    if (!(lr_min > 0.0) || !(lr_min < lr_max) || !std::isfinite(lr_max)) {
        throw ConfigError("automlp: learning-rate range must satisfy 0 < min < max");
    }
}

AutoMlpPopulation init_population(const AutoMlpParams& params, std::size_t input_dim) {
    params.validate();
    AutoMlpPopulation pop;
    pop.scaling = InputScaling::identity(input_dim);
    pop.members.reserve(params.ensemble_size);
    for (std::size_t slot = 0; slot < params.ensemble_size; ++slot) {
        Xoshiro256 rng(derive_seed(params.seed, {kInitHyper, slot}));
        const auto hidden = clamp_width(
            log_uniform(rng, static_cast<double>(params.hidden_min), static_cast<double>(params.hidden_max)), params);
        const double rate = std::clamp(log_uniform(rng, params.lr_min, params.lr_max), params.lr_min, params.lr_max);
        pop.members.push_back(
            Member{fresh_network(input_dim, hidden, rate, derive_seed(params.seed, {kInitWeights, slot}), pop.scaling),
                   std::nullopt});
    }
    return pop;
}

AutoMlpPopulation run_generation(AutoMlpPopulation pop, const Dataset& train, const Dataset& validation,
                                 const AutoMlpParams& params) {
    params.validate();
    if (train.empty() || validation.empty()) {
        throw DataError("automlp: training and validation sets must be non-empty");
    }
    if (train.arity() != validation.arity()) {
        throw DataError("automlp: training and validation feature counts differ");
    }
    const std::size_t size = pop.members.size();
    const std::size_t generation = pop.generation;

    parallel_for(
        size,
        [&](std::size_t slot) {
            auto& member = pop.members[slot];
            for (std::size_t cycle = 0; cycle < params.cycles_per_generation; ++cycle) {
                train_epoch_in_place(member.network, train, derive_seed(params.seed, {kShuffle, generation, slot, cycle}));
            }
            member.validation_error = evaluate_error(member.network, validation);
        },
        params.threads);

    std::vector<std::size_t> ranking(size);
    std::iota(ranking.begin(), ranking.end(), std::size_t{0});
    std::stable_sort(ranking.begin(), ranking.end(), [&](std::size_t a, std::size_t b) {
        return *pop.members[a].validation_error < *pop.members[b].validation_error;
    });

    const std::size_t replaced = size / 2;
    const std::size_t survivors = size - replaced;

    GenerationRecord record;
    record.generation = generation;
    for (std::size_t slot = 0; slot < size; ++slot) {
        const auto& net = pop.members[slot].network;
        record.members.push_back(
            MemberRecord{slot, net.hidden_units(), net.learning_rate(), *pop.members[slot].validation_error, false});
    }
    record.best_error = *pop.members[ranking.front()].validation_error;
    record.running_best_error =
        pop.history.empty() ? record.best_error : std::min(pop.history.back().running_best_error, record.best_error);

    for (std::size_t r = survivors; r < size; ++r) {
        const std::size_t slot = ranking[r];
        record.members[slot].replaced = true;
        Xoshiro256 rng(derive_seed(params.seed, {kOffspringHyper, generation, slot}));
        const auto& parent = pop.members[ranking[rng.below(survivors)]].network;

        const double rate = std::clamp(std::exp(std::log(parent.learning_rate()) + kRateJitterSigma * rng.normal()),
                                       params.lr_min, params.lr_max);
        if (params.warm_start) {
            MlpNetwork child = parent;
            child.set_learning_rate(rate);
            pop.members[slot] = Member{std::move(child), std::nullopt};
        } else {
            const auto hidden = clamp_width(
                std::exp(std::log(static_cast<double>(parent.hidden_units())) + kHiddenJitterSigma * rng.normal()),
                params);
            pop.members[slot] =
                Member{fresh_network(parent.input_dim(), hidden, rate,
                                     derive_seed(params.seed, {kOffspringWeights, generation, slot}), pop.scaling),
                       std::nullopt};
        }
    }

    pop.history.push_back(std::move(record));
    ++pop.generation;
    return pop;
}

AutoMlpResult select_winner(AutoMlpPopulation pop) {
    if (pop.history.empty()) {
        throw ConfigError("automlp: no generation has been run");
    }
    const auto& last = pop.history.back();
    std::size_t best = pop.members.size();
    double best_error = 0.0;
    for (const auto& rec : last.members) {
        if (rec.replaced) {
            continue;
        }
        if (best == pop.members.size() || rec.validation_error < best_error) {
            best = rec.slot;
            best_error = rec.validation_error;
        }
    }
    MlpNetwork winner = pop.members[best].network;
    return AutoMlpResult{std::move(winner), best, best_error, std::move(pop)};
}

AutoMlpResult train_automlp(const Dataset& train, const Dataset& validation, const AutoMlpParams& params) {
    params.validate();
    auto pop = init_population(params, train.arity());
    if (params.scale_inputs) {
        pop.scaling = InputScaling::fit(train);
        for (auto& member : pop.members) {
            member.network.set_scaling(pop.scaling);
        }
    }
    for (std::size_t g = 0; g < params.generations; ++g) {
        pop = run_generation(std::move(pop), train, validation, params);
    }
    return select_winner(std::move(pop));
}

AutoMlpResult train_automlp(const DataSplit& split, const AutoMlpParams& params) {
    return train_automlp(split.train, split.validation, params);
}

} // namespace ecoamlp
