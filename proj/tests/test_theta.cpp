#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "forge/theta.hpp"

using namespace forge;

namespace {

std::shared_ptr<const FrenetCurve> make_curve(const std::string& family,
                                              std::map<std::string, double> params,
                                              std::size_t resolution = 512) {
    return std::make_shared<const FrenetCurve>(ingest_analytic(family, params, resolution));
}

std::shared_ptr<const FrenetCurve> calibrated_torus(std::size_t resolution = 512) {
    auto params = calibrate_total_torsion("torus_curve", {{"p", 1.0}, {"q", 2.0}, {"R", 2.0}},
                                          "r", 1.2, 1.9, -1, resolution);
    return make_curve("torus_curve", params, resolution);
}

}  // namespace

TEST_CASE("theta is constant on planar curves") {
    const ThetaField theta = solve_theta(make_curve("ellipse", {{"a", 2.0}, {"b", 1.0}}), 0.7);
    for (double value : theta.grid_values()) CHECK(value == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(theta.winding() == 0);
}

TEST_CASE("theta winds by -2 pi m around a quantized curve") {
    const auto curve = calibrated_torus();
    const ThetaField theta = solve_theta(curve, 1.3);
    CHECK(theta.winding() == -1);
    const double drop = theta.value(curve->length()) - theta.theta0();
    CHECK(std::fabs(drop + 2.0 * std::numbers::pi * static_cast<double>(theta.winding())) < 1e-6);
}

TEST_CASE("non-quantized curves are rejected") {
    const auto curve =
        make_curve("torus_curve", {{"p", 1.0}, {"q", 2.0}, {"R", 2.0}, {"r", 0.5}});
    CHECK(total_torsion(*curve).residual > 0.1);
    CHECK_THROWS_WITH_AS(solve_theta(curve, 0.0), doctest::Contains("NotQuantized"), Error);
}

TEST_CASE("normal direction on a planar curve with theta0 = 0 is the plane normal") {
    const ThetaField theta = solve_theta(make_curve("ellipse", {{"a", 2.0}, {"b", 1.0}}), 0.0);
    for (double frac : {0.0, 0.3, 0.65, 0.9}) {
        const Vec3 n = normal_direction(theta, frac * theta.curve()->length());
        CHECK(norm(n - Vec3{0, 0, 1}) < 1e-10);
    }
}

TEST_CASE("normal direction closes up around the loop") {
    const auto curve = calibrated_torus();
    const ThetaField theta = solve_theta(curve, 0.9);
    for (double frac : {0.0, 0.25, 0.6}) {
        const double s = frac * curve->length();
        const Vec3 gap = normal_direction(theta, s + curve->length()) - normal_direction(theta, s);
        CHECK(norm(gap) < 1e-8);
    }
}

TEST_CASE("normal direction is unit and tangent-orthogonal") {
    const auto curve = calibrated_torus();
    const ThetaField theta = solve_theta(curve, 2.1);
    for (double frac : {0.13, 0.44, 0.78}) {
        const double s = frac * curve->length();
        const Vec3 n = normal_direction(theta, s);
        CHECK(std::fabs(norm(n) - 1.0) < 1e-12);
        CHECK(std::fabs(dot(n, curve->frenet(s).tangent)) < 1e-12);
    }
}

TEST_CASE("transported normal satisfies the Rodrigues condition") {
    // N'(s) must be parallel to the tangent; its conormal/normal components vanish
    const auto curve = calibrated_torus();
    const ThetaField theta = solve_theta(curve, 0.4);
    const double h = 1e-3;
    for (double frac : {0.07, 0.33, 0.59, 0.86}) {
        const double s = frac * curve->length();
        const Vec3 d = (normal_direction(theta, s - 2.0 * h) -
                        8.0 * normal_direction(theta, s - h) +
                        8.0 * normal_direction(theta, s + h) -
                        normal_direction(theta, s + 2.0 * h)) /
                       (12.0 * h);
        const FrenetFrame fr = curve->frenet(s);
        const double th = theta.value(s);
        // N' = k sin(theta) t when theta' + tau = 0
        CHECK(norm(d - fr.curvature * std::sin(th) * fr.tangent) < 1e-5);
        CHECK(std::fabs(dot(d, conormal_direction(theta, s))) < 1e-6);
        CHECK(std::fabs(dot(d, normal_direction(theta, s))) < 1e-6);
    }
}

TEST_CASE("two initial angles differ by a rigid rotation of the conormal") {
    const auto curve = calibrated_torus();
    const double delta = 1.1;
    const ThetaField theta_a = solve_theta(curve, 0.3);
    const ThetaField theta_b = solve_theta(curve, 0.3 + delta);
    for (double frac : {0.11, 0.37, 0.72, 0.95}) {
        const double s = frac * curve->length();
        const double cosangle =
            dot(conormal_direction(theta_a, s), conormal_direction(theta_b, s));
        CHECK(cosangle == doctest::Approx(std::cos(delta)).epsilon(1e-8));
    }
}
