#include "doctest.h"

#include "ecoamlp/errors.hpp"
#include "ecoamlp/kernels.hpp"
#include "ecoamlp/mlp.hpp"
#include "fixtures.hpp"

#include <cmath>

using namespace ecoamlp;

namespace {

MlpNetwork zero_network(std::size_t in, std::size_t hidden) {
    return MlpNetwork::from_parts(MlpConfig{in, hidden, 0.1, 0}, std::vector<double>(hidden * (in + 1), 0.0),
                                  std::vector<double>(hidden + 1, 0.0), 0, InputScaling::identity(in));
}

// Mean BCE with its own forward pass, used for finite differences.
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

} // namespace

TEST_CASE("init") {
    const MlpConfig cfg{8, 160, 0.1, 5};
    const auto a = MlpNetwork::init(cfg);
    CHECK(a == MlpNetwork::init(cfg));
    CHECK(a.weights_ih().size() == 160 * 9);
    CHECK(a.weights_ho().size() == 161);
    CHECK(a.epochs_trained() == 0);
    CHECK(a.scaling().is_identity());
    for (double w : a.weights_ih()) {
        CHECK(std::abs(w) <= 1.0 / std::sqrt(8.0));
    }
    for (double w : a.weights_ho()) {
        CHECK(std::abs(w) <= 1.0 / std::sqrt(160.0));
    }
    auto other = cfg;
    other.weight_init_seed = 6;
    CHECK_FALSE(MlpNetwork::init(other) == a);

    CHECK_THROWS_AS(MlpNetwork::init(MlpConfig{0, 3, 0.1, 0}), ConfigError);
    CHECK_THROWS_AS(MlpNetwork::init(MlpConfig{3, 0, 0.1, 0}), ConfigError);
    CHECK_THROWS_AS(MlpNetwork::init(MlpConfig{3, 3, -0.1, 0}), ConfigError);
}

TEST_CASE("forward") {
    SUBCASE("zero weights give one half") {
        const auto net = zero_network(4, 3);
        CHECK(net.forward(std::vector<double>{1, -2, 3, 100}) == 0.5);
        CHECK(net.predict(std::vector<double>{1, -2, 3, 100}) == 1);
    }
    SUBCASE("hand-computed 2-2-1 network") {
        // h1 = s(0.5*1 - 0.25*2 + 0.1) = s(0.1); h2 = s(-0.3*1 + 0.2*2 - 0.2) = s(-0.1)
        // z = 1.5 h1 - 2 h2 + 0.05
        const auto net = MlpNetwork::from_parts(MlpConfig{2, 2, 0.1, 0}, {0.5, -0.25, 0.1, -0.3, 0.2, -0.2},
                                                {1.5, -2.0, 0.05}, 0, InputScaling::identity(2));
        const double h1 = 1.0 / (1.0 + std::exp(-0.1));
        const double h2 = 1.0 / (1.0 + std::exp(0.1));
        const double z = 1.5 * h1 - 2.0 * h2 + 0.05;
        const std::vector<double> x{1.0, 2.0};
        CHECK(std::abs(net.logit(x) - z) <= 1e-12);
        CHECK(std::abs(net.forward(x) - 1.0 / (1.0 + std::exp(-z))) <= 1e-12);
    }
    SUBCASE("output stays strictly inside (0, 1)") {
        auto net = zero_network(1, 1);
        net.weights_ho()[1] = 1000.0;
        CHECK(net.forward(std::vector<double>{0.0}) < 1.0);
        net.weights_ho()[1] = -1000.0;
        CHECK(net.forward(std::vector<double>{0.0}) > 0.0);
    }
    SUBCASE("input scaling is applied first") {
        auto net = MlpNetwork::init(MlpConfig{2, 3, 0.1, 1});
        auto scaled = net;
        scaled.set_scaling(InputScaling{{10.0, -4.0}, {0.5, 2.0}});
        CHECK(scaled.logit(std::vector<double>{12.0, -3.5}) == net.logit(std::vector<double>{1.0, 1.0}));
        CHECK_THROWS_AS(net.set_scaling(InputScaling::identity(3)), ConfigError);
    }
    CHECK_THROWS_AS(zero_network(2, 2).forward(std::vector<double>{1.0}), ConfigError);
}

TEST_CASE("training") {
    const auto pair = test::make_dataset({{0.0, 0.0}, {1.0, 1.0}}, {0, 1});
    SUBCASE("zero learning rate leaves weights unchanged") {
        auto net = MlpNetwork::init(MlpConfig{2, 4, 0.0, 3});
        const auto before = net;
        train_epoch_in_place(net, pair, 1);
        CHECK(net.epochs_trained() == 1);
        CHECK(std::equal(net.weights_ih().begin(), net.weights_ih().end(), before.weights_ih().begin()));
        CHECK(std::equal(net.weights_ho().begin(), net.weights_ho().end(), before.weights_ho().begin()));
    }
    SUBCASE("loss decreases on a separable pair") {
        auto net = MlpNetwork::init(MlpConfig{2, 4, 0.5, 3});
        double prev = mean_loss(net, pair);
        const double start = prev;
        for (std::uint64_t e = 0; e < 500; ++e) {
            train_epoch_in_place(net, pair, e);
            const double now = mean_loss(net, pair);
            CHECK(now <= prev + 1e-12);
            prev = now;
        }
        CHECK(prev < 0.1 * start);
        CHECK(evaluate_error(net, pair) == 0.0);
        CHECK(net.all_finite());
    }
    SUBCASE("train_epoch matches the in-place version") {
        const auto net = MlpNetwork::init(MlpConfig{2, 3, 0.2, 9});
        auto copy = net;
        train_epoch_in_place(copy, pair, 4);
        CHECK(train_epoch(net, pair, 4) == copy);
    }
    SUBCASE("scalar and AVX2 backends train to nearly the same weights") {
        if (!kernels::backend_supported(kernels::Backend::avx2)) {
            return;
        }
        const auto data = test::random_dataset(8, 60, 7);
        auto a = MlpNetwork::init(MlpConfig{7, 13, 0.1, 2});
        auto b = a;
        {
            kernels::ScopedBackend s(kernels::Backend::scalar);
            for (int e = 0; e < 5; ++e) {
                train_epoch_in_place(a, data, e);
            }
        }
        {
            kernels::ScopedBackend s(kernels::Backend::avx2);
            for (int e = 0; e < 5; ++e) {
                train_epoch_in_place(b, data, e);
            }
        }
        for (std::size_t i = 0; i < a.weights_ih().size(); ++i) {
            CHECK(a.weights_ih()[i] == doctest::Approx(b.weights_ih()[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("gradient agrees with central differences") {
    const double h = 1e-5;
    for (std::size_t hidden = 1; hidden <= 8; ++hidden) {
        const auto data = test::random_dataset(100 + hidden, 12, 3);
        auto net = MlpNetwork::init(MlpConfig{3, hidden, 0.1, hidden});
        const auto grad = loss_gradient(net, data);
        CHECK(mean_loss(net, data) == doctest::Approx(loss_oracle(net, data)).epsilon(1e-12));
        auto check = [&](std::span<double> weights, const std::vector<double>& analytic) {
            for (std::size_t i = 0; i < weights.size(); ++i) {
                const double saved = weights[i];
                weights[i] = saved + h;
                const double up = loss_oracle(net, data);
                weights[i] = saved - h;
                const double down = loss_oracle(net, data);
                weights[i] = saved;
                const double numeric = (up - down) / (2 * h);
                const double rel = std::abs(numeric - analytic[i]) / std::max(1e-8, std::abs(numeric) + std::abs(analytic[i]));
                CHECK(rel <= 1e-4);
            }
        };
        check(net.weights_ih(), grad.ih);
        check(net.weights_ho(), grad.ho);
    }
}

TEST_CASE("evaluate_error") {
    const auto data = test::random_dataset(12, 50, 3);
    const auto zero = zero_network(3, 2);
    // Every prediction is 1, so the error is the fraction of negatives.
    CHECK(evaluate_error(zero, data) ==
          static_cast<double>(data.class_counts()[0]) / static_cast<double>(data.size()));
    const auto net = MlpNetwork::init(MlpConfig{3, 5, 0.1, 4});
    std::size_t wrong = 0;
    for (const auto& inst : data.instances()) {
        wrong += (net.forward(inst.features) >= 0.5 ? 1 : 0) != inst.label;
    }
    CHECK(evaluate_error(net, data) == static_cast<double>(wrong) / 50.0);
}

TEST_CASE("InputScaling::fit") {
    const auto d = test::make_dataset({{1.0, 5.0}, {3.0, 5.0}}, {0, 1});
    const auto s = InputScaling::fit(d);
    CHECK(s.offset == std::vector<double>{2.0, 5.0});
    CHECK(s.scale == std::vector<double>{1.0, 0.0});
}
