#include "ecoamlp/baselines.hpp"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ecoamlp {

std::string_view preprocessor_name(PreprocessorKind kind) noexcept {
    switch (kind) {
    case PreprocessorKind::none:
        return "none";
    case PreprocessorKind::ztransform:
        return "ztransform";
    case PreprocessorKind::bootstrap_sample:
        return "bootstrap";
    case PreprocessorKind::stratified_sample:
        return "stratified";
    case PreprocessorKind::ecodb_outlier_removal:
        return "ecodb";
    }
    return "?";
}

PreprocessorKind parse_preprocessor(std::string_view name) {
    for (auto kind : {PreprocessorKind::none, PreprocessorKind::ztransform, PreprocessorKind::bootstrap_sample,
                      PreprocessorKind::stratified_sample, PreprocessorKind::ecodb_outlier_removal}) {
        if (name == preprocessor_name(kind)) {
            return kind;
        }
    }
    throw ConfigError("unknown preprocessor '" + std::string(name) +
                      "' (expected none|ztransform|bootstrap|stratified|ecodb)");
}

ZTransform ZTransform::fit(const Dataset& train) {
    if (train.empty()) {
        throw DataError("ztransform: cannot fit on an empty dataset");
    }
    const std::size_t dim = train.arity();
    const auto n = static_cast<double>(train.size());
    ZTransform z{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
    for (std::size_t j = 0; j < dim; ++j) {
        for (const auto& inst : train.instances()) {
            z.mean[j] += inst.features[j];
        }
        z.mean[j] /= n;
        double ss = 0.0;
        for (const auto& inst : train.instances()) {
            const double d = inst.features[j] - z.mean[j];
            ss += d * d;
        }
        z.stddev[j] = std::sqrt(ss / n);
    }
    return z;
}

std::vector<double> ZTransform::apply(std::span<const double> features) const {
    if (features.size() != mean.size()) {
        throw ConfigError("ztransform: feature count mismatch");
    }
    std::vector<double> out(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
        out[j] = stddev[j] > 0.0 ? (features[j] - mean[j]) / stddev[j] : 0.0;
    }
    return out;
}

Dataset ZTransform::apply(const Dataset& data) const {
    std::vector<Instance> out;
    out.reserve(data.size());
    for (const auto& inst : data.instances()) {
        Instance copy = inst;
        copy.features = apply(inst.features);
        out.push_back(std::move(copy));
    }
    return Dataset(data.schema(), std::move(out));
}

std::pair<Dataset, std::vector<Dataset>> ztransform_fit_apply(const Dataset& train, std::span<const Dataset> others) {
    const auto z = ZTransform::fit(train);
    std::vector<Dataset> transformed;
    transformed.reserve(others.size());
    for (const auto& d : others) {
        transformed.push_back(z.apply(d));
    }
    return {z.apply(train), std::move(transformed)};
}

namespace {

void check_fraction(double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("sampling: fraction must lie in (0, 1]");
    }
}

} // namespace

Dataset bootstrap_sample(const Dataset& train, double fraction, std::uint64_t seed) {
    check_fraction(fraction);
    if (train.empty()) {
        throw DataError("bootstrap: empty dataset");
    }
    const auto m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(train.size())));
    Xoshiro256 rng(seed);
    std::vector<Instance> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Instance inst = train[static_cast<std::size_t>(rng.below(train.size()))];
        inst.source_id = inst.id;
        inst.id = i;
        out.push_back(std::move(inst));
    }
    return Dataset(train.schema(), std::move(out));
}

Dataset stratified_sample(const Dataset& train, double fraction, std::uint64_t seed) {
    check_fraction(fraction);
    Xoshiro256 rng(seed);
    std::vector<std::size_t> picked;
    for (std::size_t c = 0; c < train.schema().class_labels().size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (static_cast<std::size_t>(train[i].label) == c) {
                members.push_back(i);
            }
        }
        if (members.empty()) {
            continue;
        }
        const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(members.size())));
        if (take == 0) {
            throw DataError("stratified sample: fraction yields no instances for class '" +
                            train.schema().class_labels()[c] + "'");
        }
        shuffle(std::span(members), rng);
        picked.insert(picked.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    }
    // Interleave the classes so the result is an ordinary shuffled sample.
    shuffle(std::span(picked), rng);
    return train.subset(picked);
}

int knn_classify(const Dataset& train, std::span<const double> query, std::size_t k, const Measure& measure) {
    if (train.empty()) {
        throw DataError("knn: empty training set");
    }
    if (k == 0 || k > train.size()) {
        throw ConfigError("knn: k must lie in [1, training size]");
    }
    struct Candidate {
        double distance;
        InstanceId id;
        int label;
    };
    std::vector<Candidate> all;
    all.reserve(train.size());
    for (const auto& inst : train.instances()) {
        all.push_back({distance(query, inst.features, measure), inst.id, inst.label});
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                      [](const Candidate& a, const Candidate& b) {
                          return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
                      });
    std::size_t positive = 0;
    for (std::size_t i = 0; i < k; ++i) {
        positive += all[i].label == 1 ? 1 : 0;
    }
    return 2 * positive > k ? 1 : 0;
}

NaiveBayes NaiveBayes::fit(const Dataset& train) {
    const auto counts = train.class_counts();
    for (std::size_t c = 0; c < 2; ++c) {
        if (counts[c] < 2) {
            throw DataError("naive bayes: class '" + train.schema().class_labels()[c] +
                            "' needs at least 2 training instances");
        }
    }
    const std::size_t dim = train.arity();
    NaiveBayes nb;
    for (std::size_t c = 0; c < 2; ++c) {
        nb.log_prior_[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(train.size()));
        nb.mean_[c].assign(dim, 0.0);
        nb.variance_[c].assign(dim, 0.0);
    }
    for (const auto& inst : train.instances()) {
        auto& mean = nb.mean_[static_cast<std::size_t>(inst.label)];
        for (std::size_t j = 0; j < dim; ++j) {
            mean[j] += inst.features[j];
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        for (auto& m : nb.mean_[c]) {
            m /= static_cast<double>(counts[c]);
        }
    }
    for (const auto& inst : train.instances()) {
        const auto c = static_cast<std::size_t>(inst.label);
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = inst.features[j] - nb.mean_[c][j];
            nb.variance_[c][j] += d * d;
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        for (auto& v : nb.variance_[c]) {
            v = std::max(v / static_cast<double>(counts[c]), kVarianceFloor);
        }
    }
    return nb;
}

std::array<double, 2> NaiveBayes::log_scores(std::span<const double> query) const {
    if (query.size() != mean_[0].size()) {
        throw ConfigError("naive bayes: feature count mismatch");
    }
    std::array<double, 2> scores = log_prior_;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t j = 0; j < query.size(); ++j) {
            const double d = query[j] - mean_[c][j];
            const double var = variance_[c][j];
            scores[c] += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
        }
    }
    return scores;
}

int NaiveBayes::classify(std::span<const double> query) const {
    const auto scores = log_scores(query);
    return scores[1] > scores[0] ? 1 : 0;
}

} // namespace ecoamlp
