#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "forge/errors.hpp"
#include "forge/periodic_spline.hpp"
#include "forge/vec3.hpp"

namespace forge {

// Underlying closed-curve geometry in its own parameter u; derivatives up to order 3.
class CurveGeometry {
public:
    virtual ~CurveGeometry() = default;
    virtual double period() const = 0;
    virtual Vec3 eval(double u, int order) const = 0;
};

struct FrenetFrame {
    Vec3 tangent;
    Vec3 normal;
    Vec3 binormal;
    double curvature = 0.0;
    double torsion = 0.0;
};

struct TorsionSummary {
    double total = 0.0;    // loop integral of tau (radians)
    long m = 0;            // nearest integer of total / 2pi
    double residual = 0.0; // |total - 2 pi m|
};

// Arc-length parametrized closed Frenet curve. Immutable; safe to share across threads.
class FrenetCurve {
public:
    double length() const { return length_; }
    std::size_t resolution() const { return grid_.size(); }
    double grid_spacing() const { return length_ / static_cast<double>(grid_.size()); }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<Vec3>& points() const { return points_; }
    const std::vector<FrenetFrame>& frames() const { return frames_; }
    const std::vector<double>& curvature_samples() const { return curvature_samples_; }
    const std::vector<double>& torsion_samples() const { return torsion_samples_; }

    // Evaluator backed by the exact geometry composed with the arc-length inverse.
    Vec3 position(double s) const;
    Vec3 position_derivative(double s, int order) const;  // order 1..3
    FrenetFrame frenet(double s) const;

    // Spline-backed scalar fields on the arc-length grid (orders 0..3 resp. 0..2).
    double curvature(double s, int order = 0) const { return k_spline_.eval(s, order); }
    double torsion(double s, int order = 0) const { return tau_spline_.eval(s, order); }
    double torsion_integral(double s) const { return tau_spline_.integral(s); }

    double parameter_at(double s) const;  // u(s)

    // Trapezoid loop integral of per-sample values f(i) over the closed curve.
    template <typename F>
    double loop_integral(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) acc += f(i);
        return acc * grid_spacing();
    }

    const std::string& source_description() const { return source_; }

    friend FrenetCurve build_frenet_curve(std::shared_ptr<const CurveGeometry> geometry,
                                          std::size_t resolution, std::string source);

private:
    FrenetCurve() = default;

    std::shared_ptr<const CurveGeometry> geometry_;
    double length_ = 0.0;
    std::vector<double> grid_;
    std::vector<Vec3> points_;
    std::vector<FrenetFrame> frames_;
    std::vector<double> curvature_samples_;
    std::vector<double> torsion_samples_;
    PeriodicSpline k_spline_;
    PeriodicSpline tau_spline_;
    // fine table for inverting arc length: u_k uniform, s_k cumulative
    std::vector<double> fine_u_;
    std::vector<double> fine_s_;
    std::vector<double> fine_speed_;
    std::string source_;
};

FrenetCurve build_frenet_curve(std::shared_ptr<const CurveGeometry> geometry,
                               std::size_t resolution, std::string source);

FrenetCurve ingest_samples(const std::vector<Vec3>& points, bool closed, double tol,
                           std::size_t resolution = 0);

// Built-in families: circle {r}, ellipse {a,b}, spherical {a},
// torus_curve {p,q,R,r} (p longitudes, q meridians).
FrenetCurve ingest_analytic(const std::string& family,
                            const std::map<std::string, double>& params,
                            std::size_t resolution = 512);

TorsionSummary total_torsion(const FrenetCurve& curve);

// Bisects the named family parameter until total torsion hits 2*pi*target_m
// (residual tolerance 1e-10). The bracket must straddle the root.
std::map<std::string, double> calibrate_total_torsion(const std::string& family,
                                                      std::map<std::string, double> params,
                                                      const std::string& free_param,
                                                      double bracket_lo, double bracket_hi,
                                                      long target_m,
                                                      std::size_t resolution = 512);

}  // namespace forge
