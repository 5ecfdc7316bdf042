#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "forge/theta.hpp"

namespace forge {

// Periodic scalar function of arc length with derivatives: fn(s, order), order 0..2
// (0..3 for the deformation profile, whose second derivative enters the forms).
struct ScalarField {
    std::function<double(double, int)> fn;
    double operator()(double s, int order = 0) const { return fn(s, order); }
    explicit operator bool() const { return static_cast<bool>(fn); }
};

// Function of (s, v), L-periodic in s; fn(s, v, ds_order, dv_order), orders 0..2 each.
struct TransverseField {
    std::function<double(double, double, int, int)> fn;
    double operator()(double s, double v, int ds = 0, int dv = 0) const {
        return fn(s, v, ds, dv);
    }
    explicit operator bool() const { return static_cast<bool>(fn); }
};

ScalarField zero_scalar_field();
TransverseField zero_transverse_field();
ScalarField spline_scalar_field(std::shared_ptr<const PeriodicSpline> spline,
                                int derivative_shift = 0);

struct GermProfiles {
    ScalarField A;       // v^2/2 normal coefficient (1/length)
    ScalarField B;       // v^3/6 normal coefficient (1/length^2)
    TransverseField C;   // v^4 remainder, C(s,0) = 0
    ScalarField a;       // deformation profile (k sin theta)'
    double eps = 0.0;    // deformation magnitude
    std::string mode = "custom";
    double theta_ref = 0.0;  // reference angle for frozen mode
};

// A = (1 - sin theta) k, B = C = 0, eps = 0, a = (k sin theta)'.
GermProfiles default_profiles(const ThetaField& theta);

// A identically zero (the ruled candidate); B = C = 0, a as in default_profiles.
GermProfiles ruled_profiles(const ThetaField& theta);

struct FundamentalForms {
    double E = 0, F = 0, G = 0;
    double e = 0, f = 0, g = 0;
    double mean = 0;   // H
    double gauss = 0;  // K
    double k1 = 0, k2 = 0;  // principal curvatures, k1 <= k2
};

// Strip surface alpha(s, v) around the curve; immutable, evaluation is pure.
class SurfaceGerm {
public:
    // v_max <= 0 selects the default 0.2 / max curvature.
    SurfaceGerm(ThetaField theta, GermProfiles profiles, double v_max = 0.0);

    const FrenetCurve& curve() const { return *theta_.curve(); }
    const std::shared_ptr<const FrenetCurve>& curve_ptr() const { return theta_.curve(); }
    const ThetaField& theta() const { return theta_; }
    const GermProfiles& profiles() const { return profiles_; }
    double v_max() const { return v_max_; }

    Vec3 point(double s, double v) const;              // throws OutOfStrip beyond v_max
    FundamentalForms forms(double s, double v) const;  // throws DegenerateMetric

    // Effective v^2/2 coefficient A + eps*a and its derivatives (order 0..2).
    double effective_profile(double s, int order = 0) const;

private:
    ThetaField theta_;
    GermProfiles profiles_;
    double v_max_ = 0.0;
};

// Measured v-slopes of E, e, f, g at (s, 0) against the series coefficients
// {-2 k cos, k cos (k sin - A), A', B}; residuals = measured - expected.
struct SeriesCheck {
    std::array<double, 4> measured;
    std::array<double, 4> expected;
    std::array<double, 4> residual;
};
SeriesCheck forms_series_check(const SurfaceGerm& germ, double s);

// Zeros of A + k sin theta on the cycle (bisection to 1e-10 after a grid scan).
std::vector<double> umbilic_roots(const SurfaceGerm& germ);

struct QuadMesh {
    std::vector<Vec3> vertices;              // welded, index = column + row * columns
    std::vector<std::array<int, 4>> faces;   // quads, 0-based vertex indices
    std::size_t columns = 0;                 // along s
    std::size_t rows = 0;                    // along v
    double seam_gap = 0.0;                   // max |alpha(L,v) - alpha(0,v)| before welding
};

QuadMesh build_mesh(const SurfaceGerm& germ, std::size_t resolution_s, std::size_t resolution_v);
void write_obj(const QuadMesh& mesh, std::ostream& out);

}  // namespace forge
