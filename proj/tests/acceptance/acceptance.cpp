// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include "ecoamlp/automlp.hpp"
#include "ecoamlp/class_outlier.hpp"
#include "ecoamlp/harness.hpp"
#include "ecoamlp/metrics.hpp"
#include "ecoamlp/mlp.hpp"
#include "ecoamlp/report.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace ecoamlp;

namespace {

// Tolerances and budgets.
constexpr double kScoreTol = 1e-9;
constexpr double kComponentTol = 1e-12;
constexpr double kGradientRelTol = 1e-4;
constexpr double kGradientStep = 1e-5;
constexpr double kMetricTol = 1e-12;
constexpr double kOracleBudgetSeconds = 10.0;
constexpr double kGradientBudgetSeconds = 5.0;
constexpr double kPiddBudgetSeconds = 120.0;
constexpr double kPiddMinMedianAccuracy = 0.72;
constexpr std::size_t kPiddSeeds = 10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (pass) {
            detail << why;
        }
        pass = false;
    }
};

int failures = 0;

void report_line(int id, const std::string& name, const Outcome& o) {
    std::printf("%s  criterion %d: %s  %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

void run(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    report_line(id, name, o);
}

Dataset pidd() { return load_csv(test::data_path("pima-indians-diabetes.csv"), pidd_schema()); }

ExperimentConfig reference_config() {
    ExperimentConfig c;
    c.split = SplitSpec{0.70, 0.15, 0.15, 0, false};
    c.preprocessor.kind = PreprocessorKind::ecodb_outlier_removal;
    c.preprocessor.outliers.k = 12;
    c.preprocessor.outliers.n = 10;
    c.preprocessor.outliers.measure = MeasureKind::correlation_similarity;
    c.classifier.kind = ClassifierKind::automlp;
    c.classifier.automlp.ensemble_size = 4;
    c.classifier.automlp.cycles_per_generation = 10;
    c.classifier.automlp.generations = 10;
    c.repeats = kPiddSeeds;
    return c;
}

// 1. ECODB ranking equals an exhaustive evaluation of the definition.
void oracle_equivalence(Outcome& o) {
    const auto start = Clock::now();
    Xoshiro256 rng(20240601);
    const std::size_t ks[] = {3, 5, 12};
    const std::size_t ns[] = {3, 5, 10};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t size = 14 + rng.below(27); // 14..40
        const auto data = test::random_dataset(rng(), size, 2 + rng.below(6), 0.5 + rng.uniform(), 1.0);
        OutlierParams p;
        p.k = ks[rng.below(3)];
        p.n = ns[rng.below(3)];
        p.measure = trial % 2 == 0 ? MeasureKind::euclidean : MeasureKind::correlation_similarity;
        const auto got = ecodb_detect(data, p).ranked;
        const auto want = oracle::ecodb(data, p.k, p.n,
                                        p.measure == MeasureKind::euclidean ? oracle::Kind::euclidean
                                                                            : oracle::Kind::correlation);
        if (got.size() != want.size()) {
            o.fail("size mismatch on trial " + std::to_string(trial));
            return;
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            worst = std::max(worst, std::abs(got[i].score - want[i].score));
            if (got[i].id != want[i].id) {
                o.fail("rank " + std::to_string(i) + " differs on trial " + std::to_string(trial));
            }
        }
    }
    const double elapsed = seconds_since(start);
    if (worst > kScoreTol) {
        o.fail("score error " + std::to_string(worst));
    }
    if (elapsed > kOracleBudgetSeconds) {
        o.fail("took " + std::to_string(elapsed) + " s");
    }
    o.detail << " (50 datasets, max |score diff| " << worst << ", " << elapsed << " s)";
}

// 2. Per-instance components and the COF/ECOF formulas.
void component_formulas(Outcome& o) {
    Xoshiro256 rng(77);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto data = test::random_dataset(rng(), 25, 3);
        const std::size_t k = 2 + rng.below(8);
        for (auto kind : {MeasureKind::euclidean, MeasureKind::correlation_similarity}) {
            const auto m = Measure::of(kind, data.schema());
            const auto ok = kind == MeasureKind::euclidean ? oracle::Kind::euclidean : oracle::Kind::correlation;
            for (std::size_t q = 0; q < data.size(); ++q) {
                const auto want = oracle::components(data, q, k, ok);
                const InstanceId id = data[q].id;
                const double dpcl = std::abs(pcl(data, id, k, m) - want.pcl);
                const double ddev = std::abs(deviation(data, id, m) - want.dev) / std::max(1.0, want.dev);
                const double dkd = std::abs(kdist(data, id, k, m) - want.kd) / std::max(1.0, want.kd);
                double dcof = 0.0;
                if (want.dev > 0) {
                    const double expected = static_cast<double>(k) * want.pcl + 100.0 / want.dev + 0.1 * want.kd;
                    dcof = std::abs(cof(k, want.pcl, want.dev, want.kd, 100.0, 0.1) - expected) /
                           std::max(1.0, std::abs(expected));
                }
                const double decof = std::abs(ecof(k, want.pcl, 0.25, 0.75) -
                                              (static_cast<double>(k) * want.pcl - 0.25 + 0.75));
                worst = std::max({worst, dpcl, ddev, dkd, dcof, decof});
                ++checked;
            }
        }
    }
    if (worst > kComponentTol) {
        o.fail("component error " + std::to_string(worst));
    }
    o.detail << " (" << checked << " instances, max rel err " << worst << ")";
}

// Mean BCE through an independent forward pass.
double loss_oracle(const MlpNetwork& net, const Dataset& data) {
    const std::size_t in = net.input_dim();
    const std::size_t h = net.hidden_units();
    const auto wih = net.weights_ih();
    const auto who = net.weights_ho();
    double total = 0;
    for (const auto& inst : data.instances()) {
        double z = who[h];
        for (std::size_t j = 0; j < h; ++j) {
            double a = wih[j * (in + 1) + in];
            for (std::size_t i = 0; i < in; ++i) {
                a += wih[j * (in + 1) + i] * inst.features[i];
            }
            z += who[j] / (1.0 + std::exp(-a));
        }
        const double p = 1.0 / (1.0 + std::exp(-z));
        total += inst.label == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(data.size());
}

// 3. Backprop gradient against central differences.
void gradient_check(Outcome& o) {
    const auto start = Clock::now();
    Xoshiro256 rng(31);
    double worst = 0.0;
    for (int fixture = 0; fixture < 20; ++fixture) {
        const std::size_t in = 1 + rng.below(8);
        const std::size_t hidden = 1 + rng.below(12);
        const auto data = test::random_dataset(rng(), 10 + rng.below(20), in);
        auto net = MlpNetwork::init(MlpConfig{in, hidden, 0.1, rng()});
        const auto grad = loss_gradient(net, data);
        auto check = [&](std::span<double> w, const std::vector<double>& analytic) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double saved = w[i];
                w[i] = saved + kGradientStep;
                const double up = loss_oracle(net, data);
                w[i] = saved - kGradientStep;
                const double down = loss_oracle(net, data);
                w[i] = saved;
                const double numeric = (up - down) / (2 * kGradientStep);
                const double rel =
                    std::abs(numeric - analytic[i]) / std::max(1e-8, std::abs(numeric) + std::abs(analytic[i]));
                worst = std::max(worst, rel);
            }
        };
        check(net.weights_ih(), grad.ih);
        check(net.weights_ho(), grad.ho);
    }
    const double elapsed = seconds_since(start);
    if (worst > kGradientRelTol) {
        o.fail("relative error " + std::to_string(worst));
    }
    if (elapsed > kGradientBudgetSeconds) {
        o.fail("took " + std::to_string(elapsed) + " s");
    }
    o.detail << " (20 fixtures, max rel err " << worst << ", " << elapsed << " s)";
}

// 4. Ensemble size, replacement count, ranges, running best, winner choice.
void automlp_bookkeeping(Outcome& o) {
    const auto data = test::random_dataset(5, 120, 5);
    const auto parts = split(data, SplitSpec{0.6, 0.2, 0.2, 5, true});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        AutoMlpParams p;
        p.seed = seed;
        p.cycles_per_generation = 3;
        p.generations = 5;
        p.hidden_max = 64;
        const auto r = train_automlp(parts, p);
        const auto& hist = r.population.history;
        if (hist.size() != p.generations || r.population.members.size() != p.ensemble_size) {
            o.fail("wrong generation or member count for seed " + std::to_string(seed));
            continue;
        }
        for (std::size_t g = 0; g < hist.size(); ++g) {
            const auto& members = hist[g].members;
            const auto replaced = std::count_if(members.begin(), members.end(), [](const auto& m) { return m.replaced; });
            if (members.size() != p.ensemble_size || static_cast<std::size_t>(replaced) != p.ensemble_size / 2) {
                o.fail("replacement count in generation " + std::to_string(g));
            }
            for (const auto& m : members) {
                if (m.hidden_units < p.hidden_min || m.hidden_units > p.hidden_max || m.learning_rate < p.lr_min ||
                    m.learning_rate > p.lr_max) {
                    o.fail("hyperparameter outside range");
                }
                for (const auto& other : members) {
                    if (m.replaced && !other.replaced && m.validation_error < other.validation_error) {
                        o.fail("a better member was replaced");
                    }
                }
            }
            if (g > 0 && hist[g].running_best_error > hist[g - 1].running_best_error) {
                o.fail("running best increased");
            }
        }
        const auto& last = hist.back();
        if (last.members[r.winner_slot].replaced || r.winner_validation_error != last.best_error) {
            o.fail("winner is not the best survivor of the last generation");
        }
    }
    o.detail << " (10 seeds)";
}

// 5. Metric identities on random confusion matrices.
void metric_identities(Outcome& o) {
    Xoshiro256 rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const ConfusionMatrix m{rng.below(100), rng.below(100), rng.below(100), rng.below(100) + 1};
        const auto r = report(m);
        const double n = static_cast<double>(m.total());
        const double pos = static_cast<double>(m.tp + m.fn);
        const double neg = static_cast<double>(m.tn + m.fp);
        if (std::abs(r.accuracy - (m.tp + m.tn) / n) > kMetricTol ||
            std::abs(r.accuracy - (pos * r.recall_pos + neg * r.recall_neg) / n) > kMetricTol) {
            o.fail("accuracy identity");
        }
        if (std::abs(r.weighted_mean_recall - (r.recall_pos + r.recall_neg) / 2) > kMetricTol ||
            std::abs(r.weighted_mean_precision - (r.precision_pos + r.precision_neg) / 2) > kMetricTol) {
            o.fail("weighted mean identity");
        }
        for (double v : {r.accuracy, r.precision_pos, r.recall_pos, r.precision_neg, r.recall_neg}) {
            if (v < 0.0 || v > 1.0) {
                o.fail("metric outside [0, 1]");
            }
        }
        const auto s = report(swap_classes(m));
        if (s.accuracy != r.accuracy || std::abs(s.weighted_mean_recall - r.weighted_mean_recall) > kMetricTol) {
            o.fail("class swap changed a symmetric metric");
        }
    }
    const auto zero = report(ConfusionMatrix{0, 5, 0, 5});
    if (zero.undefined != std::vector<std::string>{"precision_pos"}) {
        o.fail("0/0 precision not flagged");
    }
    o.detail << " (1000 matrices)";
}

// 6. PIDD with the reference configuration.
void pidd_accuracy(Outcome& o, const Dataset& data) {
    const auto start = Clock::now();
    const auto r = run_experiment(reference_config(), data);
    const double elapsed = seconds_since(start);
    const auto& acc = r.test_summary.at("accuracy");
    if (acc.median < kPiddMinMedianAccuracy) {
        o.fail("median test accuracy " + percent(acc.median) + "%");
    }
    if (elapsed > kPiddBudgetSeconds) {
        o.fail("took " + std::to_string(elapsed) + " s");
    }
    o.detail << " (median " << percent(acc.median) << "%, range " << percent(acc.min) << "-" << percent(acc.max)
             << "%, " << kPiddSeeds << " seeds, " << elapsed << " s)";
}

// 7. Preprocessor ablation table. The improvement expectation is reported,
// not enforced.
void ablation(Outcome& o, const Dataset& data) {
    const auto sweep =
        run_sweep(reference_config(), data, SweepAxis::preprocessor, default_variants(SweepAxis::preprocessor));
    if (sweep.runs.size() != 5) {
        o.fail("expected 5 rows");
    }
    for (const auto& run : sweep.runs) {
        if (run.repeats.size() != kPiddSeeds) {
            o.fail("row with missing repeats");
        }
    }
    if (!sweep.ecodb_vs_none || sweep.ecodb_vs_none->paired_deltas.size() != kPiddSeeds) {
        o.fail("ECODB vs none comparison missing");
        return;
    }
    std::printf("%s", sweep_text(sweep).c_str());
    const auto& e = *sweep.ecodb_vs_none;
    o.detail << " (ECODB - none median delta " << percent(e.observed_median_delta) << " points; expectation >"
             << percent(e.expected_min_delta) << " " << (e.met ? "met" : "NOT met, flagged") << ")";
}

// 8. The held-out test set is read only at final evaluation.
void isolation(Outcome& o, const Dataset& data) {
    auto config = reference_config();
    config.repeats = 2;
    config.classifier.automlp.generations = 2;
    std::size_t combos = 0;
    for (const auto& pre : default_variants(SweepAxis::preprocessor)) {
        for (const auto& cls : default_variants(SweepAxis::classifier)) {
            const auto c =
                with_variant(with_variant(config, SweepAxis::preprocessor, pre), SweepAxis::classifier, cls);
            AccessLog log;
            run_experiment(c, data, &log);
            ++combos;
            std::size_t test_reads = 0;
            const auto& ev = log.events();
            for (std::size_t i = 0; i < ev.size(); ++i) {
                if (ev[i].role != Role::test) {
                    if (ev[i].stage == Stage::final_evaluation) {
                        o.fail("non-test data read at final evaluation");
                    }
                    continue;
                }
                ++test_reads;
                if (ev[i].stage != Stage::final_evaluation) {
                    o.fail(pre + "/" + cls + ": test read during " + std::string(stage_name(ev[i].stage)));
                }
                if (i + 1 < ev.size() && ev[i + 1].role != Role::train) {
                    o.fail(pre + "/" + cls + ": read after the test evaluation");
                }
            }
            if (test_reads != c.repeats) {
                o.fail(pre + "/" + cls + ": expected one test read per repeat");
            }
        }
    }
    o.detail << " (" << combos << " preprocessor x classifier combinations)";
}

} // namespace

int main() {
    run(1, "ECODB matches the exhaustive oracle", oracle_equivalence);
    run(2, "PCL, deviation, k-distance, COF and ECOF formulas", component_formulas);
    run(3, "MLP gradient matches finite differences", gradient_check);
    run(4, "AutoMLP ensemble bookkeeping", automlp_bookkeeping);
    run(5, "metric identities", metric_identities);
    const auto data = pidd();
    run(6, "PIDD median test accuracy", [&](Outcome& o) { pidd_accuracy(o, data); });
    run(7, "preprocessor ablation table", [&](Outcome& o) { ablation(o, data); });
    run(8, "test-set isolation", [&](Outcome& o) { isolation(o, data); });
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
