#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "uab/gaussian.hpp"
#include "uab/rng.hpp"

using namespace uab;

TEST_CASE("softplus matches ln(1+e^x) and is stable at the extremes") {
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(softplus(2.0) == doctest::Approx(std::log(1.0 + std::exp(2.0))).epsilon(1e-14));
    CHECK(softplus(800.0) == doctest::Approx(800.0));
    CHECK(softplus(-800.0) == doctest::Approx(0.0));
    CHECK(std::isfinite(softplus(1e12)));
}

TEST_CASE("weighted_nll worked values") {
    // standard normal at its mean: ln(2*pi)/2
    CHECK(weighted_nll({0.0, 1.0}, 0.0, 1.0) == doctest::Approx(0.918939).epsilon(1e-6));
    // two sigmas out adds (y-mu)^2/2 = 2
    CHECK(weighted_nll({0.0, 1.0}, 2.0, 1.0) == doctest::Approx(2.918939).epsilon(1e-6));
}

TEST_CASE("weighted_nll zero weight is exactly zero") {
    CHECK(weighted_nll({3.0, 0.25}, -17.0, 0.0) == 0.0);
    CHECK(weighted_nll({0.0, 1e-3}, 1e6, 0.0) == 0.0);
}

TEST_CASE("weighted_nll domain errors") {
    CHECK_THROWS_AS(weighted_nll({0.0, 0.0}, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(weighted_nll({0.0, -1.0}, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(weighted_nll({0.0, 1.0}, 1.0, -0.5), std::invalid_argument);
}

TEST_CASE("weighted_nll is linear in the weight") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const GaussianPrediction pred{rng.uniform(-10.0, 10.0), rng.uniform(0.05, 5.0)};
        const double y = rng.uniform(-10.0, 10.0);
        const double w = rng.uniform(0.0, 3.0);
        const double a = rng.uniform(0.0, 4.0);
        CHECK(weighted_nll(pred, y, a * w) ==
              doctest::Approx(a * weighted_nll(pred, y, w)).epsilon(1e-12));
    }
}
