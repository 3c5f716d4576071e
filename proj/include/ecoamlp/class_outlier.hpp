#pragma once

// Class-aware, distance-based outlier scoring (CODB) and its normalized
// variant (ECODB). Lower scores mark stronger class outliers.

#include "ecoamlp/data.hpp"
#include "ecoamlp/distance.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace ecoamlp {

enum class OutlierAlgorithm { codb, ecodb };

std::string_view algorithm_name(OutlierAlgorithm algorithm) noexcept;
OutlierAlgorithm parse_algorithm(std::string_view name);

/// Guard used in place of 1/Deviation when Deviation is zero.
inline constexpr double kDeviationEpsilon = 1e-12;

struct OutlierParams {
    std::size_t k = 12;
    std::size_t n = 10;
    MeasureKind measure = MeasureKind::correlation_similarity;
    double alpha = 100.0;
    double beta = 0.1;
    OutlierAlgorithm algorithm = OutlierAlgorithm::ecodb;

    /// Throws ConfigError unless k, alpha, beta > 0, k < size and n <= size.
    void validate(std::size_t dataset_size) const;
};

struct Neighbor {
    InstanceId id = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct ScoredInstance {
    InstanceId id = 0;
    double pcl = 0.0;
    double deviation = 0.0;
    double kdist = 0.0;
    /// COF or ECOF, depending on the algorithm that produced it.
    double score = 0.0;
    /// Min-max normalized components over the candidate set (ECODB only).
    double norm_deviation = 0.0;
    double norm_kdist = 0.0;
    /// Count of the k neighbors sharing the instance's label (k * pcl).
    std::size_t same_label_neighbors = 0;
    /// Deviation was zero and the 1/epsilon guard was used (CODB only).
    bool degenerate = false;
};

struct OutlierReport {
    /// Ascending by score: ranked.front() is the strongest outlier.
    std::vector<ScoredInstance> ranked;
    OutlierParams params;
    OutlierAlgorithm algorithm = OutlierAlgorithm::ecodb;

    std::vector<InstanceId> ids() const;
};

/// The k nearest instances to the query (the query itself excluded),
/// ascending by distance, ties by ascending id.
std::vector<Neighbor> knn(const Dataset& dataset, InstanceId query, std::size_t k, const Measure& measure);

/// Fraction of the query's k nearest neighbors that share its label.
double pcl(const Dataset& dataset, InstanceId query, std::size_t k, const Measure& measure);

/// Sum of distances from the query to every other instance of its class.
double deviation(const Dataset& dataset, InstanceId query, const Measure& measure);

/// Sum of the distances to the k nearest neighbors.
double kdist(const Dataset& dataset, InstanceId query, std::size_t k, const Measure& measure);

// Score formulas on precomputed components.
double cof(std::size_t k, double pcl, double deviation, double kdist, double alpha, double beta,
           bool* degenerate = nullptr);
double ecof(std::size_t k, double pcl, double norm_deviation, double norm_kdist);
/// (value - lo) / (hi - lo), or 0 when hi == lo.
double min_max_normalize(double value, double lo, double hi);

/// PCL, Deviation and KDist for every instance, in dataset order, from one
/// shared distance matrix. score fields are left at zero.
std::vector<ScoredInstance> score_components(const Dataset& dataset, std::size_t k, const Measure& measure);

/// COF of one instance; `degenerate` is set on the epsilon case.
ScoredInstance codb_score(const Dataset& dataset, InstanceId query, const OutlierParams& params);

/// Ranks every instance by COF ascending (ties by id) and keeps the first n.
OutlierReport codb_detect(const Dataset& dataset, const OutlierParams& params);

/// Two passes. Pass 1 orders all instances by k*pcl ascending, then
/// deviation descending, kdist ascending, id ascending, and keeps the first
/// n as candidates. Pass 2 min-max normalizes deviation and kdist over the
/// candidates and re-ranks them by ECOF ascending (ties by id).
OutlierReport ecodb_detect(const Dataset& dataset, const OutlierParams& params);

/// Dispatches on params.algorithm.
OutlierReport detect_outliers(const Dataset& dataset, const OutlierParams& params);

/// Dataset minus the reported instances, survivors in their original order.
Dataset remove_outliers(const Dataset& dataset, const OutlierReport& report);

} // namespace ecoamlp
