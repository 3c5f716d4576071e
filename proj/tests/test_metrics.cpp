#include "doctest.h"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/metrics.hpp"
#include "ecoamlp/rng.hpp"

#include <algorithm>
#include <vector>

using namespace ecoamlp;

TEST_CASE("confusion counts") {
    const std::vector<int> pred{1, 1, 0, 0};
    const std::vector<int> truth{1, 0, 0, 1};
    const auto m = confusion(pred, truth);
    CHECK(m == ConfusionMatrix{1, 1, 1, 1});
    CHECK(report(m).accuracy == 0.5);

    CHECK_THROWS_AS(confusion(std::vector<int>{1}, std::vector<int>{1, 0}), ConfigError);
    CHECK_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}), ConfigError);
    CHECK_THROWS_AS(confusion(std::vector<int>{2}, std::vector<int>{1}), DataError);
}

TEST_CASE("report on a hand-computed matrix") {
    const auto r = report(ConfusionMatrix{50, 40, 5, 5});
    CHECK(r.accuracy == doctest::Approx(0.90));
    CHECK(r.precision_pos == doctest::Approx(50.0 / 55.0));
    CHECK(r.recall_pos == doctest::Approx(50.0 / 55.0));
    CHECK(r.precision_neg == doctest::Approx(40.0 / 45.0));
    CHECK(r.recall_neg == doctest::Approx(40.0 / 45.0));
    CHECK(r.weighted_mean_precision == doctest::Approx((50.0 / 55.0 + 40.0 / 45.0) / 2.0));
    CHECK(r.undefined.empty());
}

TEST_CASE("0/0 metrics are flagged and reported as zero") {
    // Never predicts positive: positive precision is 0/0.
    const auto r = report(ConfusionMatrix{0, 7, 0, 3});
    CHECK(r.precision_pos == 0.0);
    CHECK(r.undefined == std::vector<std::string>{"precision_pos"});
    CHECK_THROWS_AS(report(ConfusionMatrix{}), ConfigError);
}

TEST_CASE("property: identities on random matrices") {
    Xoshiro256 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const ConfusionMatrix m{rng.below(50), rng.below(50), rng.below(50), rng.below(50) + 1};
        const auto r = report(m);
        const double n = static_cast<double>(m.total());
        CHECK(r.accuracy == doctest::Approx((m.tp + m.tn) / n).epsilon(1e-12));
        // Accuracy is the class-share-weighted mean of the two recalls.
        const double pos = static_cast<double>(m.tp + m.fn);
        const double neg = static_cast<double>(m.tn + m.fp);
        CHECK(r.accuracy == doctest::Approx((pos * r.recall_pos + neg * r.recall_neg) / n).epsilon(1e-12));
        for (double v : {r.accuracy, r.precision_pos, r.recall_pos, r.precision_neg, r.recall_neg,
                         r.weighted_mean_precision, r.weighted_mean_recall}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        const auto s = report(swap_classes(m));
        CHECK(s.accuracy == r.accuracy);
        CHECK(s.weighted_mean_precision == doctest::Approx(r.weighted_mean_precision).epsilon(1e-15));
        CHECK(s.weighted_mean_recall == doctest::Approx(r.weighted_mean_recall).epsilon(1e-15));
        CHECK(swap_classes(swap_classes(m)) == m);
    }
}
