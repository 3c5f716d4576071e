#include "ecoamlp/class_outlier.hpp"

#include "ecoamlp/errors.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace ecoamlp {

std::string_view algorithm_name(OutlierAlgorithm algorithm) noexcept {
    return algorithm == OutlierAlgorithm::codb ? "codb" : "ecodb";
}

OutlierAlgorithm parse_algorithm(std::string_view name) {
    if (name == "codb") {
        return OutlierAlgorithm::codb;
    }
    if (name == "ecodb") {
        return OutlierAlgorithm::ecodb;
    }
    throw ConfigError("unknown outlier algorithm '" + std::string(name) + "' (expected ecodb|codb)");
}

void OutlierParams::validate(std::size_t dataset_size) const {
    if (k == 0) {
        throw ConfigError("outliers: k must be positive");
    }
    if (k >= dataset_size) {
        throw ConfigError("outliers: k = " + std::to_string(k) + " must be smaller than the dataset size " +
                          std::to_string(dataset_size));
    }
    if (n > dataset_size) {
        throw ConfigError("outliers: n = " + std::to_string(n) + " exceeds the dataset size " +
                          std::to_string(dataset_size));
    }
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw ConfigError("outliers: alpha and beta must be positive");
    }
}

std::vector<InstanceId> OutlierReport::ids() const {
    std::vector<InstanceId> out;
    out.reserve(ranked.size());
    for (const auto& s : ranked) {
        out.push_back(s.id);
    }
    return out;
}

namespace {

bool neighbor_before(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

void check_k(const Dataset& dataset, std::size_t k) {
    if (k == 0 || k >= dataset.size()) {
        throw ConfigError("knn: k = " + std::to_string(k) + " must lie in [1, " + std::to_string(dataset.size()) +
                          ")");
    }
}

std::vector<Neighbor> nearest_from_row(const Dataset& dataset, std::size_t query, std::size_t k,
                                       const std::vector<double>& row) {
    std::vector<Neighbor> all;
    all.reserve(dataset.size() - 1);
    for (std::size_t j = 0; j < dataset.size(); ++j) {
        if (j != query) {
            all.push_back({dataset[j].id, row[j]});
        }
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), neighbor_before);
    all.resize(k);
    return all;
}

std::vector<double> distances_from(const Dataset& dataset, std::size_t query, const Measure& measure) {
    std::vector<double> row(dataset.size(), 0.0);
    for (std::size_t j = 0; j < dataset.size(); ++j) {
        if (j != query) {
            row[j] = distance(dataset[query].features, dataset[j].features, measure);
        }
    }
    return row;
}

ScoredInstance components_from_row(const Dataset& dataset, std::size_t query, std::size_t k,
                                   const std::vector<double>& row) {
    const auto neighbors = nearest_from_row(dataset, query, k, row);
    const int label = dataset[query].label;
    ScoredInstance s;
    s.id = dataset[query].id;
    for (const auto& nb : neighbors) {
        s.kdist += nb.distance;
        if (dataset[dataset.index_of(nb.id)].label == label) {
            ++s.same_label_neighbors;
        }
    }
    s.pcl = static_cast<double>(s.same_label_neighbors) / static_cast<double>(k);
    for (std::size_t j = 0; j < dataset.size(); ++j) {
        if (j != query && dataset[j].label == label) {
            s.deviation += row[j];
        }
    }
    return s;
}

} // namespace

std::vector<Neighbor> knn(const Dataset& dataset, InstanceId query, std::size_t k, const Measure& measure) {
    check_k(dataset, k);
    const std::size_t q = dataset.index_of(query);
    return nearest_from_row(dataset, q, k, distances_from(dataset, q, measure));
}

double pcl(const Dataset& dataset, InstanceId query, std::size_t k, const Measure& measure) {
    check_k(dataset, k);
    const std::size_t q = dataset.index_of(query);
    return components_from_row(dataset, q, k, distances_from(dataset, q, measure)).pcl;
}

double deviation(const Dataset& dataset, InstanceId query, const Measure& measure) {
    const std::size_t q = dataset.index_of(query);
    const int label = dataset[q].label;
    double total = 0.0;
    for (std::size_t j = 0; j < dataset.size(); ++j) {
        if (j != q && dataset[j].label == label) {
            total += distance(dataset[q].features, dataset[j].features, measure);
        }
    }
    return total;
}

double kdist(const Dataset& dataset, InstanceId query, std::size_t k, const Measure& measure) {
    double total = 0.0;
    for (const auto& nb : knn(dataset, query, k, measure)) {
        total += nb.distance;
    }
    return total;
}

double cof(std::size_t k, double pcl, double deviation, double kdist, double alpha, double beta, bool* degenerate) {
    const bool guarded = deviation <= 0.0;
    if (degenerate != nullptr) {
        *degenerate = guarded;
    }
    const double inverse = 1.0 / (guarded ? kDeviationEpsilon : deviation);
    return static_cast<double>(k) * pcl + alpha * inverse + beta * kdist;
}

double ecof(std::size_t k, double pcl, double norm_deviation, double norm_kdist) {
    return static_cast<double>(k) * pcl - norm_deviation + norm_kdist;
}

double min_max_normalize(double value, double lo, double hi) {
    if (hi == lo) {
        return 0.0;
    }
    return (value - lo) / (hi - lo);
}

std::vector<ScoredInstance> score_components(const Dataset& dataset, std::size_t k, const Measure& measure) {
    check_k(dataset, k);
    const std::size_t n = dataset.size();
    const auto matrix = distance_matrix(dataset, measure);
    std::vector<ScoredInstance> out;
    out.reserve(n);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(matrix.begin() + static_cast<std::ptrdiff_t>(i * n), n, row.begin());
        out.push_back(components_from_row(dataset, i, k, row));
    }
    return out;
}

ScoredInstance codb_score(const Dataset& dataset, InstanceId query, const OutlierParams& params) {
    params.validate(dataset.size());
    const auto measure = Measure::of(params.measure, dataset.schema());
    const std::size_t q = dataset.index_of(query);
    auto s = components_from_row(dataset, q, params.k, distances_from(dataset, q, measure));
    s.score = cof(params.k, s.pcl, s.deviation, s.kdist, params.alpha, params.beta, &s.degenerate);
    return s;
}

OutlierReport codb_detect(const Dataset& dataset, const OutlierParams& params) {
    params.validate(dataset.size());
    auto scored = score_components(dataset, params.k, Measure::of(params.measure, dataset.schema()));
    for (auto& s : scored) {
        s.score = cof(params.k, s.pcl, s.deviation, s.kdist, params.alpha, params.beta, &s.degenerate);
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
        return a.score < b.score || (a.score == b.score && a.id < b.id);
    });
    scored.resize(params.n);
    return OutlierReport{std::move(scored), params, OutlierAlgorithm::codb};
}

OutlierReport ecodb_detect(const Dataset& dataset, const OutlierParams& params) {
    params.validate(dataset.size());
    auto scored = score_components(dataset, params.k, Measure::of(params.measure, dataset.schema()));

    // Pass 1: candidate set.
    std::sort(scored.begin(), scored.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
        if (a.same_label_neighbors != b.same_label_neighbors) {
            return a.same_label_neighbors < b.same_label_neighbors;
        }
        if (a.deviation != b.deviation) {
            return a.deviation > b.deviation;
        }
        if (a.kdist != b.kdist) {
            return a.kdist < b.kdist;
        }
        return a.id < b.id;
    });
    scored.resize(params.n);
    if (scored.empty()) {
        return OutlierReport{{}, params, OutlierAlgorithm::ecodb};
    }

    // Pass 2: normalize over the candidates and re-rank by ECOF.
    const auto [dev_lo, dev_hi] = std::minmax_element(
        scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.deviation < b.deviation; });
    const auto [kd_lo, kd_hi] = std::minmax_element(
        scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.kdist < b.kdist; });
    const double min_dev = dev_lo->deviation;
    const double max_dev = dev_hi->deviation;
    const double min_kd = kd_lo->kdist;
    const double max_kd = kd_hi->kdist;
    for (auto& s : scored) {
        s.norm_deviation = min_max_normalize(s.deviation, min_dev, max_dev);
        s.norm_kdist = min_max_normalize(s.kdist, min_kd, max_kd);
        s.score = ecof(params.k, s.pcl, s.norm_deviation, s.norm_kdist);
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
        return a.score < b.score || (a.score == b.score && a.id < b.id);
    });
    return OutlierReport{std::move(scored), params, OutlierAlgorithm::ecodb};
}

OutlierReport detect_outliers(const Dataset& dataset, const OutlierParams& params) {
    return params.algorithm == OutlierAlgorithm::codb ? codb_detect(dataset, params) : ecodb_detect(dataset, params);
}

Dataset remove_outliers(const Dataset& dataset, const OutlierReport& report) {
    std::unordered_set<InstanceId> removed;
    for (const auto& s : report.ranked) {
        if (!dataset.contains(s.id)) {
            throw DataError("remove_outliers: unknown instance id " + std::to_string(s.id));
        }
        removed.insert(s.id);
    }
    std::vector<std::size_t> keep;
    keep.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!removed.contains(dataset[i].id)) {
            keep.push_back(i);
        }
    }
    return dataset.subset(keep);
}

} // namespace ecoamlp
