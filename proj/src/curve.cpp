#include "forge/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace forge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array<double, 6> kGaussNodes = {
    -0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
    0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kGaussWeights = {
    0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
    0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

double arc_segment(const CurveGeometry& geom, double ua, double ub) {
    double acc = 0.0;
    for (int g = 0; g < 6; ++g) {
        const double u = ua + 0.5 * (ub - ua) * (kGaussNodes[g] + 1.0);
        acc += kGaussWeights[g] * norm(geom.eval(u, 1));
    }
    return 0.5 * (ub - ua) * acc;
}

class CircleGeometry final : public CurveGeometry {
public:
    explicit CircleGeometry(double r) : r_(r) {}
    double period() const override { return kTwoPi; }
    Vec3 eval(double t, int order) const override {
        const double c = std::cos(t), s = std::sin(t);
        switch (order) {
            case 0: return {r_ * c, r_ * s, 0.0};
            case 1: return {-r_ * s, r_ * c, 0.0};
            case 2: return {-r_ * c, -r_ * s, 0.0};
            default: return {r_ * s, -r_ * c, 0.0};
        }
    }

private:
    double r_;
};

class EllipseGeometry final : public CurveGeometry {
public:
    EllipseGeometry(double a, double b) : a_(a), b_(b) {}
    double period() const override { return kTwoPi; }
    Vec3 eval(double t, int order) const override {
        const double c = std::cos(t), s = std::sin(t);
        switch (order) {
            case 0: return {a_ * c, b_ * s, 0.0};
            case 1: return {-a_ * s, b_ * c, 0.0};
            case 2: return {-a_ * c, -b_ * s, 0.0};
            default: return {a_ * s, -b_ * c, 0.0};
        }
    }

private:
    double a_, b_;
};

// p(t)/|p(t)| with p(t) = (cos t, sin t, a cos 2t); lies on the unit sphere.
class SphericalGeometry final : public CurveGeometry {
public:
    explicit SphericalGeometry(double a) : a_(a) {}
    double period() const override { return kTwoPi; }
    Vec3 eval(double t, int order) const override {
        const Vec3 p = {std::cos(t), std::sin(t), a_ * std::cos(2.0 * t)};
        const Vec3 p1 = {-std::sin(t), std::cos(t), -2.0 * a_ * std::sin(2.0 * t)};
        const Vec3 p2 = {-std::cos(t), -std::sin(t), -4.0 * a_ * std::cos(2.0 * t)};
        const Vec3 p3 = {std::sin(t), -std::cos(t), 8.0 * a_ * std::sin(2.0 * t)};
        const double w = norm(p);
        if (order == 0) return p / w;
        const double wp = dot(p, p1) / w;
        const double wpp = (dot(p1, p1) + dot(p, p2) - wp * wp) / w;
        if (order == 1) return p1 / w - p * (wp / (w * w));
        const double w2 = w * w, w3 = w2 * w;
        if (order == 2)
            return p2 / w - p1 * (2.0 * wp / w2) - p * (wpp / w2) + p * (2.0 * wp * wp / w3);
        const double wppp = (3.0 * dot(p1, p2) + dot(p, p3) - 3.0 * wp * wpp) / w;
        const double w4 = w3 * w;
        return p3 / w - p2 * (3.0 * wp / w2) + p1 * (-3.0 * wpp / w2 + 6.0 * wp * wp / w3) +
               p * (-wppp / w2 + 6.0 * wp * wpp / w3 - 6.0 * wp * wp * wp / w4);
    }

private:
    double a_;
};

// Closed curve on the torus of radii (R, r): p longitudes, q meridians.
class TorusCurveGeometry final : public CurveGeometry {
public:
    TorusCurveGeometry(int p, int q, double major, double minor)
        : p_(p), q_(q), big_(major), small_(minor) {}
    double period() const override { return kTwoPi; }
    Vec3 eval(double t, int order) const override {
        const double p = p_, q = q_;
        const double cp = std::cos(p * t), sp = std::sin(p * t);
        const double cq = std::cos(q * t), sq = std::sin(q * t);
        // rho(t) = R + r cos(qt) modulates the longitude circle
        const double rho0 = big_ + small_ * cq;
        const double rho1 = -small_ * q * sq;
        const double rho2 = -small_ * q * q * cq;
        const double rho3 = small_ * q * q * q * sq;
        switch (order) {
            case 0: return {rho0 * cp, rho0 * sp, small_ * sq};
            case 1:
                return {rho1 * cp - rho0 * p * sp, rho1 * sp + rho0 * p * cp, small_ * q * cq};
            case 2:
                return {rho2 * cp - 2.0 * rho1 * p * sp - rho0 * p * p * cp,
                        rho2 * sp + 2.0 * rho1 * p * cp - rho0 * p * p * sp,
                        -small_ * q * q * sq};
            default:
                return {rho3 * cp - 3.0 * rho2 * p * sp - 3.0 * rho1 * p * p * cp +
                            rho0 * p * p * p * sp,
                        rho3 * sp + 3.0 * rho2 * p * cp - 3.0 * rho1 * p * p * sp -
                            rho0 * p * p * p * cp,
                        -small_ * q * q * q * cq};
        }
    }

private:
    int p_, q_;
    double big_, small_;
};

// Periodic quintic spline through sample points, parametrized uniformly by index.
class SplineGeometry final : public CurveGeometry {
public:
    explicit SplineGeometry(const std::vector<Vec3>& pts) {
        const double period = static_cast<double>(pts.size());
        std::vector<double> x(pts.size()), y(pts.size()), z(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            x[i] = pts[i].x;
            y[i] = pts[i].y;
            z[i] = pts[i].z;
        }
        x_ = PeriodicSpline(std::move(x), period);
        y_ = PeriodicSpline(std::move(y), period);
        z_ = PeriodicSpline(std::move(z), period);
    }
    double period() const override { return x_.period(); }
    Vec3 eval(double u, int order) const override {
        return {x_.eval(u, order), y_.eval(u, order), z_.eval(u, order)};
    }

private:
    PeriodicSpline x_, y_, z_;
};

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

FrenetCurve build_frenet_curve(std::shared_ptr<const CurveGeometry> geometry,
                               std::size_t resolution, std::string source) {
    FrenetCurve curve;
    curve.geometry_ = std::move(geometry);
    curve.source_ = std::move(source);
    const CurveGeometry& geom = *curve.geometry_;
    const double uper = geom.period();
    const std::size_t n = resolution;

    // cumulative arc length on a fine uniform parameter table
    const std::size_t fine = std::max<std::size_t>(8 * n, 4096);
    curve.fine_u_.resize(fine + 1);
    curve.fine_s_.resize(fine + 1);
    curve.fine_speed_.resize(fine + 1);
    for (std::size_t k = 0; k <= fine; ++k) {
        curve.fine_u_[k] = uper * static_cast<double>(k) / static_cast<double>(fine);
        curve.fine_speed_[k] = norm(geom.eval(curve.fine_u_[k], 1));
    }
    curve.fine_s_[0] = 0.0;
    for (std::size_t k = 0; k < fine; ++k)
        curve.fine_s_[k + 1] =
            curve.fine_s_[k] + arc_segment(geom, curve.fine_u_[k], curve.fine_u_[k + 1]);
    curve.length_ = curve.fine_s_.back();

    curve.grid_.resize(n);
    curve.points_.resize(n);
    curve.frames_.resize(n);
    curve.curvature_samples_.resize(n);
    curve.torsion_samples_.resize(n);
    const double kfloor = 1e-6 / curve.length_;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = curve.length_ * static_cast<double>(i) / static_cast<double>(n);
        curve.grid_[i] = s;
        const double u = curve.parameter_at(s);
        const Vec3 g1 = geom.eval(u, 1);
        const Vec3 g2 = geom.eval(u, 2);
        const Vec3 g3 = geom.eval(u, 3);
        const double w = norm(g1);
        const Vec3 cr = cross(g1, g2);
        const double crn = norm(cr);
        const double kappa = crn / (w * w * w);
        if (!(kappa > kfloor)) {
            std::ostringstream msg;
            msg << "curvature " << kappa << " at s=" << s << " is below the floor " << kfloor;
            throw Error(ErrorCode::CurvatureVanishes, msg.str());
        }
        FrenetFrame& fr = curve.frames_[i];
        fr.tangent = g1 / w;
        fr.binormal = cr / crn;
        fr.normal = cross(fr.binormal, fr.tangent);
        fr.curvature = kappa;
        fr.torsion = triple(g1, g2, g3) / (crn * crn);
        curve.points_[i] = geom.eval(u, 0);
        curve.curvature_samples_[i] = fr.curvature;
        curve.torsion_samples_[i] = fr.torsion;
    }
    curve.k_spline_ = PeriodicSpline(curve.curvature_samples_, curve.length_);
    curve.tau_spline_ = PeriodicSpline(curve.torsion_samples_, curve.length_);
    return curve;
}

double FrenetCurve::parameter_at(double s) const {
    const double wraps = std::floor(s / length_);
    double st = s - wraps * length_;
    if (st >= length_) st = 0.0;

    auto it = std::upper_bound(fine_s_.begin(), fine_s_.end(), st);
    std::size_t k = it == fine_s_.begin() ? 0 : static_cast<std::size_t>(it - fine_s_.begin()) - 1;
    k = std::min(k, fine_s_.size() - 2);

    // monotone cubic Hermite guess for u(s) on the bracketing table interval
    const double s0 = fine_s_[k], s1 = fine_s_[k + 1];
    const double u0 = fine_u_[k], u1 = fine_u_[k + 1];
    const double d0 = 1.0 / fine_speed_[k], d1 = 1.0 / fine_speed_[k + 1];
    const double hs = s1 - s0;
    const double x = hs > 0.0 ? (st - s0) / hs : 0.0;
    const double x2 = x * x, x3 = x2 * x;
    double u = u0 * (2.0 * x3 - 3.0 * x2 + 1.0) + hs * d0 * (x3 - 2.0 * x2 + x) +
               u1 * (-2.0 * x3 + 3.0 * x2) + hs * d1 * (x3 - x2);

    for (int iter = 0; iter < 4; ++iter) {
        const double su = fine_s_[k] + arc_segment(*geometry_, fine_u_[k], u);
        const double speed = norm(geometry_->eval(u, 1));
        const double step = (su - st) / speed;
        u -= step;
        if (std::fabs(step) <= 1e-14 * geometry_->period()) break;
    }
    return u + wraps * geometry_->period();
}

Vec3 FrenetCurve::position(double s) const { return geometry_->eval(parameter_at(s), 0); }

Vec3 FrenetCurve::position_derivative(double s, int order) const {
    const double u = parameter_at(s);
    const Vec3 g1 = geometry_->eval(u, 1);
    const double w = norm(g1);
    const double up = 1.0 / w;
    if (order == 1) return g1 * up;
    const Vec3 g2 = geometry_->eval(u, 2);
    const double w2 = w * w, w4 = w2 * w2;
    const double upp = -dot(g1, g2) / w4;
    if (order == 2) return g2 * (up * up) + g1 * upp;
    const Vec3 g3 = geometry_->eval(u, 3);
    const double w5 = w4 * w, w7 = w5 * w2;
    const double uppp = -(dot(g2, g2) + dot(g1, g3)) / w5 + 4.0 * dot(g1, g2) * dot(g1, g2) / w7;
    return g3 * (up * up * up) + g2 * (3.0 * up * upp) + g1 * uppp;
}

FrenetFrame FrenetCurve::frenet(double s) const {
    const double u = parameter_at(s);
    const Vec3 g1 = geometry_->eval(u, 1);
    const Vec3 g2 = geometry_->eval(u, 2);
    const Vec3 g3 = geometry_->eval(u, 3);
    const double w = norm(g1);
    const Vec3 cr = cross(g1, g2);
    const double crn = norm(cr);
    if (!(crn > 0.0))
        throw Error(ErrorCode::CurvatureVanishes, "frame undefined where curvature vanishes");
    FrenetFrame fr;
    fr.tangent = g1 / w;
    fr.binormal = cr / crn;
    fr.normal = cross(fr.binormal, fr.tangent);
    fr.curvature = crn / (w * w * w);
    fr.torsion = triple(g1, g2, g3) / (crn * crn);
    return fr;
}

FrenetCurve ingest_samples(const std::vector<Vec3>& points, bool closed, double tol,
                           std::size_t resolution) {
    if (points.size() < 16) {
        std::ostringstream msg;
        msg << "got " << points.size() << " samples, need at least 16";
        throw Error(ErrorCode::TooFewSamples, msg.str());
    }
    if (!closed)
        throw Error(ErrorCode::NotClosed, "input must be declared closed");
    std::vector<Vec3> pts = points;
    if (norm(pts.front() - pts.back()) <= tol)
        pts.pop_back();  // seam duplicate
    else {
        std::ostringstream msg;
        msg << "endpoint gap " << norm(pts.front() - pts.back()) << " exceeds tol " << tol;
        throw Error(ErrorCode::NotClosed, msg.str());
    }
    if (pts.size() < 16) {
        std::ostringstream msg;
        msg << "got " << pts.size() << " distinct samples, need at least 16";
        throw Error(ErrorCode::TooFewSamples, msg.str());
    }
    if (resolution == 0) resolution = std::max<std::size_t>(pts.size(), 256);
    auto geom = std::make_shared<SplineGeometry>(pts);
    return build_frenet_curve(std::move(geom), resolution, "samples");
}

FrenetCurve ingest_analytic(const std::string& family,
                            const std::map<std::string, double>& params,
                            std::size_t resolution) {
    if (resolution < 64)
        throw Error(ErrorCode::InvalidParams, "resolution must be at least 64");
    std::shared_ptr<const CurveGeometry> geom;
    std::ostringstream desc;
    if (family == "circle") {
        const double r = get_param(params, "r", 1.0);
        if (!(r > 0.0)) throw Error(ErrorCode::InvalidParams, "circle needs r > 0");
        geom = std::make_shared<CircleGeometry>(r);
        desc << "circle r=" << r;
    } else if (family == "ellipse") {
        const double a = get_param(params, "a", 2.0);
        const double b = get_param(params, "b", 1.0);
        if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidParams, "ellipse needs a,b > 0");
        geom = std::make_shared<EllipseGeometry>(a, b);
        desc << "ellipse a=" << a << " b=" << b;
    } else if (family == "spherical") {
        const double a = get_param(params, "a", 0.3);
        geom = std::make_shared<SphericalGeometry>(a);
        desc << "spherical a=" << a;
    } else if (family == "torus_curve") {
        const double pd = get_param(params, "p", 1.0);
        const double qd = get_param(params, "q", 2.0);
        const double major = get_param(params, "R", 2.0);
        const double minor = get_param(params, "r", 0.5);
        const int p = static_cast<int>(std::lround(pd));
        const int q = static_cast<int>(std::lround(qd));
        if (std::fabs(pd - p) > 1e-9 || std::fabs(qd - q) > 1e-9 || p < 1 || q < 1)
            throw Error(ErrorCode::InvalidParams, "torus_curve needs integer windings p,q >= 1");
        if (std::gcd(p, q) != 1)
            throw Error(ErrorCode::InvalidParams, "torus_curve windings must be coprime");
        if (!(major > 0.0) || !(minor > 0.0) || !(minor < major))
            throw Error(ErrorCode::InvalidParams, "torus_curve needs 0 < r < R");
        geom = std::make_shared<TorusCurveGeometry>(p, q, major, minor);
        desc << "torus_curve p=" << p << " q=" << q << " R=" << major << " r=" << minor;
    } else {
        throw Error(ErrorCode::UnknownFamily, family);
    }
    return build_frenet_curve(std::move(geom), resolution, desc.str());
}

TorsionSummary total_torsion(const FrenetCurve& curve) {
    TorsionSummary out;
    out.total = curve.loop_integral([&](std::size_t i) { return curve.torsion_samples()[i]; });
    out.m = std::lround(out.total / kTwoPi);
    out.residual = std::fabs(out.total - kTwoPi * static_cast<double>(out.m));
    return out;
}

std::map<std::string, double> calibrate_total_torsion(const std::string& family,
                                                      std::map<std::string, double> params,
                                                      const std::string& free_param,
                                                      double bracket_lo, double bracket_hi,
                                                      long target_m, std::size_t resolution) {
    const double target = kTwoPi * static_cast<double>(target_m);
    auto residual_at = [&](double x) {
        params[free_param] = x;
        return total_torsion(ingest_analytic(family, params, resolution)).total - target;
    };

    if (auto it = params.find(free_param); it != params.end()) {
        if (std::fabs(residual_at(it->second)) <= 1e-10) return params;
    }

    double lo = bracket_lo, hi = bracket_hi;
    double flo = residual_at(lo);
    if (std::fabs(flo) <= 1e-10) return params;
    double fhi = residual_at(hi);
    if (std::fabs(fhi) <= 1e-10) return params;
    if ((flo < 0.0) == (fhi < 0.0)) {
        std::ostringstream msg;
        msg << "residual has the same sign at both bracket ends (" << flo << ", " << fhi << ")";
        throw Error(ErrorCode::NoSignChange, msg.str());
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = residual_at(mid);
        if (std::fabs(fm) <= 1e-10) return params;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    throw Error(ErrorCode::NoSignChange, "bisection failed to reach the residual tolerance");
}

}  // namespace forge
