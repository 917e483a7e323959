#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "test_helpers.hpp"
#include "uab/adam.hpp"
#include "uab/gaussian.hpp"
#include "uab/network.hpp"

using namespace uab;
using namespace uab::testing;

TEST_CASE("all-zero parameters give mu 0 and the softplus-floor sigma") {
    NetworkConfig cfg{NetworkKind::feedforward, {4, 6}, 1, 9};
    Network net(cfg);
    std::fill(net.params().begin(), net.params().end(), 0.0);
    const auto pred = net.predict({{0.3, -0.7, 2.0, 0.1}, 1});
    CHECK(pred.mu == 0.0);
    CHECK(pred.sigma == doctest::Approx(std::sqrt(std::log(2.0) + 1e-6)).epsilon(1e-12));
    CHECK(pred.sigma == doctest::Approx(0.83256).epsilon(1e-5));
}

TEST_CASE("identity head passes the input through as mu") {
    // one input, no hidden layer: params are head W (2x1) then head b (2)
    NetworkConfig cfg{NetworkKind::feedforward, {1}, 1, 0};
    Network net(cfg);
    REQUIRE(net.param_count() == 4);
    net.params() = {1.0, 0.0, 0.0, 0.0};
    CHECK(net.predict({{5.0}, 1}).mu == 5.0);
    CHECK(net.predict({{-2.5}, 1}).mu == -2.5);
}

TEST_CASE("prediction is deterministic for a fixed seed and input") {
    NetworkConfig cfg{NetworkKind::feedforward, {3, 8, 4}, 1, 42};
    Network a(cfg);
    Network b(cfg);
    CHECK(a.params() == b.params());
    const Input x{{0.1, -0.4, 0.9}, 1};
    const auto p1 = a.predict(x);
    const auto p2 = a.predict(x);
    CHECK(p1.mu == p2.mu);
    CHECK(p1.sigma == p2.sigma);
}

TEST_CASE("sigma stays positive and finite across random nets") {
    Rng rng(100);
    for (int i = 0; i < 50; ++i) {
        const NetworkConfig cfg = random_config(rng, i % 2 == 1);
        Network net(cfg);
        const auto pred = net.predict(random_input(cfg, rng));
        CHECK(pred.sigma > 0.0);
        CHECK(std::isfinite(pred.mu));
        CHECK(std::isfinite(pred.sigma));
    }
}

TEST_CASE("dimension mismatch names expected and actual shapes") {
    NetworkConfig cfg{NetworkKind::feedforward, {11, 4}, 1, 0};
    Network net(cfg);
    CHECK_THROWS_WITH_AS(net.predict({{1.0, 2.0}, 1}),
                         doctest::Contains("expected flat vector of 11"), std::invalid_argument);

    NetworkConfig rc{NetworkKind::recurrent, {3, 5}, 4, 0};
    Network rnet(rc);
    CHECK_THROWS_WITH_AS(rnet.predict({{1.0, 2.0, 3.0}, 1}), doctest::Contains("expected 4 steps"),
                         std::invalid_argument);
}

TEST_CASE("zero residual zeroes the mu-head gradient") {
    NetworkConfig cfg{NetworkKind::feedforward, {1}, 1, 0};
    Network net(cfg);
    net.params() = {1.0, 0.0, 0.0, 0.0};  // mu = x, raw_sigma = 0
    std::vector<TrainSample> batch{{{{2.0}, 1}, 2.0, 1.0}};  // target equals mu
    std::vector<double> grad;
    net.backward(batch, grad);
    CHECK(grad[0] == 0.0);  // head W row for mu
    CHECK(grad[2] == 0.0);  // head bias for mu
    CHECK(grad[3] != 0.0);  // sigma still pulled toward the residual scale
}

TEST_CASE("analytic gradients match central finite differences") {
    Rng rng(2024);
    for (int i = 0; i < 60; ++i) {
        const NetworkConfig cfg = random_config(rng, i % 2 == 1);
        Network net(cfg);
        jitter_params(net, rng);
        const auto batch = random_batch(cfg, rng);
        const auto check = check_gradients(net, batch);
        CAPTURE(i);
        CAPTURE(check.worst_param);
        CHECK_MESSAGE(check.ok, "max relative error ", check.max_rel_err);
    }
}

TEST_CASE("weight (2,0) pair averages to the weight-1 gradient") {
    Rng rng(5);
    const NetworkConfig cfg = random_config(rng, false);
    Network net(cfg);
    const Input x = random_input(cfg, rng);

    std::vector<TrainSample> pair{{x, 1.5, 2.0}, {x, 1.5, 0.0}};
    std::vector<TrainSample> single{{x, 1.5, 1.0}};
    std::vector<double> g_pair, g_single;
    net.backward(pair, g_pair);
    net.backward(single, g_single);
    for (std::size_t p = 0; p < g_pair.size(); ++p)
        CHECK(g_pair[p] == doctest::Approx(g_single[p]).epsilon(1e-12));
}

TEST_CASE("adam zero gradient leaves parameters unchanged") {
    std::vector<double> params{1.0, -2.0, 0.5};
    AdamState state(3, 0.01);
    adam_step(state, params, {0.0, 0.0, 0.0});
    CHECK(params == std::vector<double>{1.0, -2.0, 0.5});
    CHECK(state.step == 1);
}

TEST_CASE("adam first step matches the hand-traced recurrences") {
    const double lr = 0.003, g = 0.7;
    std::vector<double> params{1.0};
    AdamState state(1, lr);
    adam_step(state, params, {g});
    // m_hat = g, v_hat = g^2  ->  delta = -lr * g / (|g| + eps)
    const double expected = 1.0 - lr * g / (std::fabs(g) + state.epsilon);
    CHECK(params[0] == doctest::Approx(expected).epsilon(1e-15));

    // second step with the same gradient keeps moving the same direction
    adam_step(state, params, {g});
    CHECK(params[0] < expected);
    CHECK(state.step == 2);
}

TEST_CASE("adam treats equal gradients identically") {
    std::vector<double> params{0.25, 0.25};
    AdamState state(2, 0.01);
    adam_step(state, params, {0.4, 0.4});
    CHECK(params[0] == params[1]);
    adam_step(state, params, {-0.1, -0.1});
    CHECK(params[0] == params[1]);
}

TEST_CASE("adam rejects shape mismatches") {
    std::vector<double> params{1.0, 2.0};
    AdamState state(3, 0.01);
    CHECK_THROWS_AS(adam_step(state, params, {0.0, 0.0}), std::invalid_argument);
}
