#pragma once

#include "ecoamlp/data.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ecoamlp {

enum class MeasureKind { euclidean, correlation_similarity, mixed };

/// A distance measure. `mixed` needs per-feature kinds: Euclidean over the
/// numeric features plus one per mismatched nominal feature.
class Measure {
public:
    static Measure euclidean() { return Measure(MeasureKind::euclidean, {}); }
    static Measure correlation() { return Measure(MeasureKind::correlation_similarity, {}); }
    static Measure mixed(const Schema& schema) { return Measure(MeasureKind::mixed, schema.kinds()); }
    /// Builds the measure named by `kind` for datasets with this schema.
    static Measure of(MeasureKind kind, const Schema& schema);

    MeasureKind kind() const noexcept { return kind_; }
    std::span<const FeatureKind> feature_kinds() const noexcept { return feature_kinds_; }

    friend bool operator==(const Measure&, const Measure&) = default;

private:
    Measure(MeasureKind kind, std::vector<FeatureKind> feature_kinds)
        : kind_(kind), feature_kinds_(std::move(feature_kinds)) {}

    MeasureKind kind_;
    std::vector<FeatureKind> feature_kinds_;
};

/// Throws ConfigError on mismatched lengths, on correlation over fewer than
/// two coordinates, or on a mixed measure whose kinds do not cover the
/// vectors.
double distance(std::span<const double> a, std::span<const double> b, const Measure& measure);

/// Pearson-correlation distance 1 - r. Zero-variance vectors give r = 0,
/// except element-wise equal vectors which are at distance 0.
double correlation_distance(std::span<const double> a, std::span<const double> b);

/// Full symmetric distance matrix, row-major n x n, zero diagonal.
std::vector<double> distance_matrix(const Dataset& dataset, const Measure& measure);

std::string_view measure_name(MeasureKind kind) noexcept;
/// Accepts "euclidean", "correlation" (or "correlation_similarity"), "mixed".
MeasureKind parse_measure(std::string_view name);

} // namespace ecoamlp
