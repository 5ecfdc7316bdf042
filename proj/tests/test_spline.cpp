#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "forge/periodic_spline.hpp"

using forge::PeriodicSpline;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> sample(double (*f)(double), std::size_t n, double period) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) f ? out[i] = f(period * i / n) : 0.0;
    return out;
}
}  // namespace

TEST_CASE("spline reproduces samples at the knots") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> values(64);
    for (double& v : values) v = dist(rng);
    PeriodicSpline spline(values, 3.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double t = 3.0 * static_cast<double>(i) / 64.0;
        CHECK(spline.eval(t) == doctest::Approx(values[i]).epsilon(1e-12));
    }
    // periodic continuation
    CHECK(spline.eval(3.0 + 3.0 / 64.0) == doctest::Approx(values[1]).epsilon(1e-12));
    CHECK(spline.eval(-3.0 / 64.0) == doctest::Approx(values.back()).epsilon(1e-12));
}

TEST_CASE("spline derivatives track a smooth periodic function") {
    const std::size_t n = 128;
    PeriodicSpline spline(sample([](double t) { return std::sin(t); }, n, kTwoPi), kTwoPi);
    for (double t : {0.1, 1.3, 2.9, 4.4, 6.0}) {
        CHECK(spline.eval(t, 0) == doctest::Approx(std::sin(t)).epsilon(1e-10));
        CHECK(spline.eval(t, 1) == doctest::Approx(std::cos(t)).epsilon(1e-8));
        CHECK(spline.eval(t, 2) == doctest::Approx(-std::sin(t)).epsilon(1e-6));
        CHECK(spline.eval(t, 3) == doctest::Approx(-std::cos(t)).epsilon(1e-4));
    }
}

TEST_CASE("spline interpolation error decays like h^6") {
    auto max_error = [](std::size_t n) {
        PeriodicSpline spline(sample([](double t) { return std::sin(t); }, n, kTwoPi), kTwoPi);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = kTwoPi * i / 1000.0 + 1e-3;
            worst = std::max(worst, std::fabs(spline.eval(t) - std::sin(t)));
        }
        return worst;
    };
    const double coarse = max_error(32);
    const double fine = max_error(64);
    CHECK(coarse / fine > 40.0);  // 2^6 = 64 up to constants
}

TEST_CASE("integral of the spline matches the closed form") {
    const std::size_t n = 128;
    PeriodicSpline spline(sample([](double t) { return std::cos(t); }, n, kTwoPi), kTwoPi);
    for (double t : {0.0, 0.7, 2.2, 5.1}) {
        CHECK(spline.integral(t) == doctest::Approx(std::sin(t)).epsilon(1e-10));
    }
    CHECK(spline.period_integral() == doctest::Approx(0.0).epsilon(1e-12));
    // wrap-around
    CHECK(spline.integral(kTwoPi + 0.7) == doctest::Approx(std::sin(0.7)).epsilon(1e-10));
    CHECK(spline.integral(-0.7) == doctest::Approx(std::sin(-0.7)).epsilon(1e-10));
}

TEST_CASE("integral is an antiderivative of the spline itself") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> values(48);
    for (double& v : values) v = dist(rng);
    PeriodicSpline spline(values, 2.5);
    const double h = 1e-6;
    for (double t : {0.2, 0.9, 1.7, 2.3}) {
        const double fd = (spline.integral(t + h) - spline.integral(t - h)) / (2.0 * h);
        CHECK(fd == doctest::Approx(spline.eval(t)).epsilon(1e-7));
    }
}
