#include "ecoamlp/distance.hpp"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/kernels.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ecoamlp {

Measure Measure::of(MeasureKind kind, const Schema& schema) {
    switch (kind) {
    case MeasureKind::euclidean:
        return euclidean();
    case MeasureKind::correlation_similarity:
        return correlation();
    case MeasureKind::mixed:
        return mixed(schema);
    }
    throw ConfigError("unknown measure");
}

double correlation_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ConfigError("distance: vector lengths differ");
    }
    if (a.size() < 2) {
        throw ConfigError("distance: correlation needs at least two coordinates");
    }
    if (std::equal(a.begin(), a.end(), b.begin())) {
        return 0.0;
    }
    const auto n = static_cast<double>(a.size());
    const double mean_a = kernels::sum(a) / n;
    const double mean_b = kernels::sum(b) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    kernels::active().centered_moments(a.data(), b.data(), a.size(), mean_a, mean_b, &sab, &saa, &sbb);
    if (saa <= 0.0 || sbb <= 0.0) {
        return 1.0;
    }
    const double r = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    return 1.0 - r;
}

double distance(std::span<const double> a, std::span<const double> b, const Measure& measure) {
    if (a.size() != b.size()) {
        throw ConfigError("distance: vector lengths differ (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
    }
    switch (measure.kind()) {
    case MeasureKind::euclidean:
        return std::sqrt(kernels::squared_distance(a, b));
    case MeasureKind::correlation_similarity:
        return correlation_distance(a, b);
    case MeasureKind::mixed: {
        const auto kinds = measure.feature_kinds();
        if (kinds.size() != a.size()) {
            throw ConfigError("distance: mixed measure kinds do not match vector length");
        }
        double squared = 0.0;
        double mismatches = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (kinds[i] == FeatureKind::nominal) {
                mismatches += (a[i] != b[i]) ? 1.0 : 0.0;
            } else {
                const double d = a[i] - b[i];
                squared += d * d;
            }
        }
        return std::sqrt(squared) + mismatches;
    }
    }
    throw ConfigError("distance: unknown measure");
}

std::vector<double> distance_matrix(const Dataset& dataset, const Measure& measure) {
    const std::size_t n = dataset.size();
    std::vector<double> out(n * n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const auto& xi = dataset[i].features;
        for (std::size_t j = i + 1; j < n; ++j) {
            out[i * n + j] = distance(xi, dataset[j].features, measure);
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            out[i * n + j] = out[j * n + i];
        }
    }
    return out;
}

std::string_view measure_name(MeasureKind kind) noexcept {
    switch (kind) {
    case MeasureKind::euclidean:
        return "euclidean";
    case MeasureKind::correlation_similarity:
        return "correlation";
    case MeasureKind::mixed:
        return "mixed";
    }
    return "?";
}

MeasureKind parse_measure(std::string_view name) {
    if (name == "euclidean") {
        return MeasureKind::euclidean;
    }
    if (name == "correlation" || name == "correlation_similarity") {
        return MeasureKind::correlation_similarity;
    }
    if (name == "mixed") {
        return MeasureKind::mixed;
    }
    throw ConfigError("unknown measure '" + std::string(name) + "' (expected euclidean|correlation|mixed)");
}

} // namespace ecoamlp
