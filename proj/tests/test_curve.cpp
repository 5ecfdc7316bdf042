#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "forge/curve.hpp"

using namespace forge;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Vec3> ellipse_samples(double a, double b, std::size_t n) {
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i <= n; ++i) {  // duplicate endpoint closes the loop
        const double t = kTwoPi * static_cast<double>(i % n) / static_cast<double>(n);
        pts.push_back({a * std::cos(t), b * std::sin(t), 0.0});
    }
    return pts;
}

std::vector<Vec3> circle_samples(double r, std::size_t n) { return ellipse_samples(r, r, n); }

// closed-form ellipse curvature at parameter t
double ellipse_curvature(double a, double b, double t) {
    const double w = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
    return a * b / std::pow(w, 1.5);
}

}  // namespace

TEST_CASE("circle samples ingest to constant curvature and zero torsion") {
    const FrenetCurve curve = ingest_samples(circle_samples(2.0, 256), true, 1e-9);
    CHECK(curve.length() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-8));
    for (std::size_t i = 0; i < curve.resolution(); ++i) {
        CHECK(curve.curvature_samples()[i] == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(std::fabs(curve.torsion_samples()[i]) < 1e-10);
    }
}

TEST_CASE("ellipse samples reproduce the closed-form curvature at the start") {
    const FrenetCurve curve = ingest_samples(ellipse_samples(2.0, 1.0, 256), true, 1e-9);
    CHECK(curve.curvature(0.0) == doctest::Approx(2.0).epsilon(1e-6));  // a/b^2
}

TEST_CASE("ingest guards") {
    SUBCASE("too few samples") {
        const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}};
        CHECK_THROWS_WITH_AS(ingest_samples(pts, true, 1e-9), doctest::Contains("TooFewSamples"),
                             Error);
    }
    SUBCASE("open gap") {
        std::vector<Vec3> pts = circle_samples(1.0, 64);
        pts.pop_back();
        pts.pop_back();  // drop closure marker and one more point
        CHECK_THROWS_WITH_AS(ingest_samples(pts, true, 1e-9), doctest::Contains("NotClosed"),
                             Error);
    }
    SUBCASE("declared open") {
        CHECK_THROWS_WITH_AS(ingest_samples(circle_samples(1.0, 64), false, 1e-9),
                             doctest::Contains("NotClosed"), Error);
    }
    SUBCASE("flat curve hits the curvature floor") {
        CHECK_THROWS_WITH_AS(ingest_samples(ellipse_samples(2.0, 1e-7, 64), true, 1e-9),
                             doctest::Contains("CurvatureVanishes"), Error);
    }
    SUBCASE("unknown family") {
        CHECK_THROWS_WITH_AS(ingest_analytic("banana", {}), doctest::Contains("UnknownFamily"),
                             Error);
    }
    SUBCASE("invalid torus params") {
        CHECK_THROWS_WITH_AS(ingest_analytic("torus_curve", {{"R", 1.0}, {"r", 1.5}}),
                             doctest::Contains("InvalidParams"), Error);
        CHECK_THROWS_WITH_AS(ingest_analytic("torus_curve", {{"p", 2.0}, {"q", 4.0}}),
                             doctest::Contains("InvalidParams"), Error);
    }
    SUBCASE("resolution too small") {
        CHECK_THROWS_WITH_AS(ingest_analytic("circle", {{"r", 1.0}}, 32),
                             doctest::Contains("InvalidParams"), Error);
    }
}

TEST_CASE("analytic circle has unit curvature and length 2 pi") {
    const FrenetCurve curve = ingest_analytic("circle", {{"r", 1.0}});
    CHECK(curve.length() == doctest::Approx(kTwoPi).epsilon(1e-10));
    for (double k : curve.curvature_samples()) CHECK(k == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spherical family lies on the unit sphere") {
    const FrenetCurve curve = ingest_analytic("spherical", {{"a", 0.3}});
    for (const Vec3& p : curve.points()) CHECK(std::fabs(norm(p) - 1.0) < 1e-12);
}

TEST_CASE("torus curve (2,3) with R=2, r=0.5 is Frenet") {
    const FrenetCurve curve =
        ingest_analytic("torus_curve", {{"p", 2.0}, {"q", 3.0}, {"R", 2.0}, {"r", 0.5}});
    double kmin = 1e300;
    for (double k : curve.curvature_samples()) kmin = std::min(kmin, k);
    CHECK(kmin > 0.0);
    CHECK(kmin == doctest::Approx(0.1333).epsilon(0.05));
}

TEST_CASE("frenet frame at specific points of the circle") {
    const FrenetCurve curve = ingest_analytic("circle", {{"r", 2.0}});
    const FrenetFrame fr = curve.frenet(0.0);
    CHECK(norm(fr.tangent - Vec3{0, 1, 0}) < 1e-10);
    CHECK(norm(fr.normal - Vec3{-1, 0, 0}) < 1e-10);
    CHECK(std::fabs(fr.torsion) < 1e-12);
}

TEST_CASE("frame orthonormality at arbitrary arc lengths") {
    const FrenetCurve curve =
        ingest_analytic("torus_curve", {{"p", 2.0}, {"q", 3.0}, {"R", 2.0}, {"r", 0.5}});
    for (double frac : {0.13, 0.31, 0.57, 0.83, 0.99}) {
        const FrenetFrame fr = curve.frenet(frac * curve.length());
        CHECK(std::fabs(dot(fr.tangent, fr.normal)) < 1e-10);
        CHECK(std::fabs(dot(fr.tangent, fr.binormal)) < 1e-10);
        CHECK(std::fabs(dot(fr.normal, fr.binormal)) < 1e-10);
        CHECK(std::fabs(norm(fr.tangent) - 1.0) < 1e-10);
        CHECK(norm(cross(fr.tangent, fr.normal) - fr.binormal) < 1e-10);
    }
}

TEST_CASE("ellipse frame matches the closed form") {
    const FrenetCurve curve = ingest_analytic("ellipse", {{"a", 2.0}, {"b", 1.0}});
    for (double frac : {0.1, 0.27, 0.42, 0.66, 0.91}) {
        const double s = frac * curve.length();
        const double t = curve.parameter_at(s);
        const Vec3 d1 = {-2.0 * std::sin(t), std::cos(t), 0.0};
        const Vec3 tangent = normalized(d1);
        const Vec3 binormal = {0, 0, 1};
        const Vec3 normal = cross(binormal, tangent);
        const FrenetFrame fr = curve.frenet(s);
        CHECK(norm(fr.tangent - tangent) < 1e-8);
        CHECK(norm(fr.normal - normal) < 1e-8);
        CHECK(norm(fr.binormal - binormal) < 1e-8);
        CHECK(fr.curvature == doctest::Approx(ellipse_curvature(2.0, 1.0, t)).epsilon(1e-8));
    }
}

TEST_CASE("planar curves have exactly zero total torsion") {
    const FrenetCurve curve = ingest_analytic("ellipse", {{"a", 2.0}, {"b", 1.0}});
    const TorsionSummary summary = total_torsion(curve);
    CHECK(std::fabs(summary.total) < 1e-10);
    CHECK(summary.m == 0);
    CHECK(summary.residual < 1e-10);
}

TEST_CASE("spherical curve has total torsion zero") {
    const TorsionSummary summary = total_torsion(ingest_analytic("spherical", {{"a", 0.3}}));
    CHECK(summary.m == 0);
    CHECK(summary.residual < 1e-6);
}

TEST_CASE("total torsion is invariant under rigid motions") {
    std::vector<Vec3> pts, moved;
    const std::size_t n = 200;
    const double c = std::cos(0.83), s = std::sin(0.83);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = kTwoPi * static_cast<double>(i % n) / static_cast<double>(n);
        const Vec3 p = {(2.0 + 0.5 * std::cos(3.0 * t)) * std::cos(2.0 * t),
                        (2.0 + 0.5 * std::cos(3.0 * t)) * std::sin(2.0 * t),
                        0.5 * std::sin(3.0 * t)};
        pts.push_back(p);
        // rotate about x, then about z, then translate
        const Vec3 rx = {p.x, c * p.y - s * p.z, s * p.y + c * p.z};
        moved.push_back({c * rx.x - s * rx.y + 10.0, s * rx.x + c * rx.y - 3.0, rx.z + 7.0});
    }
    const double total0 = total_torsion(ingest_samples(pts, true, 1e-9)).total;
    const double total1 = total_torsion(ingest_samples(moved, true, 1e-9)).total;
    CHECK(std::fabs(total0 - total1) < 1e-9);

    const FrenetCurve analytic =
        ingest_analytic("torus_curve", {{"p", 2.0}, {"q", 3.0}, {"R", 2.0}, {"r", 0.5}}, 256);
    CHECK(std::fabs(total0 - total_torsion(analytic).total) < 1e-4);
}

TEST_CASE("arc-length parametrization is unit speed") {
    for (const char* family : {"ellipse", "spherical"}) {
        const FrenetCurve curve = ingest_analytic(family, {});
        for (std::size_t i = 0; i < curve.resolution(); i += 17) {
            const double speed = norm(curve.position_derivative(curve.grid()[i], 1));
            CHECK(std::fabs(speed - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("frenet residual decays at second order under refinement") {
    auto residual = [](std::size_t n) {
        const FrenetCurve curve =
            ingest_analytic("torus_curve", {{"p", 2.0}, {"q", 3.0}, {"R", 2.0}, {"r", 0.5}}, n);
        const double h = curve.grid_spacing();
        double worst = 0.0;
        const auto& fr = curve.frames();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t prev = (i + n - 1) % n, next = (i + 1) % n;
            const double k = curve.curvature_samples()[i];
            const double tau = curve.torsion_samples()[i];
            const Vec3 dt = (fr[next].tangent - fr[prev].tangent) / (2.0 * h);
            const Vec3 dn = (fr[next].normal - fr[prev].normal) / (2.0 * h);
            const Vec3 db = (fr[next].binormal - fr[prev].binormal) / (2.0 * h);
            worst = std::max(worst, norm(dt - k * fr[i].normal));
            worst = std::max(worst, norm(dn - (-k * fr[i].tangent + tau * fr[i].binormal)));
            worst = std::max(worst, norm(db - (-tau) * fr[i].normal));
        }
        return worst;
    };
    CHECK(residual(256) / residual(512) > 3.0);  // O(h^2)
}

TEST_CASE("torsion calibration") {
    SUBCASE("planar family with target zero returns params unchanged") {
        const auto params =
            calibrate_total_torsion("ellipse", {{"a", 2.0}, {"b", 1.0}}, "a", 1.5, 2.5, 0, 256);
        CHECK(params.at("a") == 2.0);
        CHECK(params.at("b") == 1.0);
    }
    SUBCASE("torus curve calibrates to m = -1") {
        const auto params = calibrate_total_torsion(
            "torus_curve", {{"p", 1.0}, {"q", 2.0}, {"R", 2.0}}, "r", 1.2, 1.9, -1, 512);
        CHECK(params.at("r") == doctest::Approx(1.6999).epsilon(1e-3));
        const TorsionSummary summary = total_torsion(ingest_analytic("torus_curve", params, 512));
        CHECK(summary.m == -1);
        CHECK(summary.residual < 1e-8);
    }
    SUBCASE("bracket without a sign change is rejected") {
        CHECK_THROWS_WITH_AS(
            calibrate_total_torsion("ellipse", {{"b", 1.0}}, "a", 1.5, 2.5, 5, 256),
            doctest::Contains("NoSignChange"), Error);
    }
}
