#include "forge/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace forge {

namespace {

// Dormand-Prince 5(4) with FSAL and a standard I step controller.
struct Dopri5 {
    std::function<double(double, double)> rhs;
    double rel_tol = 1e-10;
    double abs_tol = 1e-16;
    std::function<void(double, double)> on_accept;

    double integrate(double y, double s0, double s1) const {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                                a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                                a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                                a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        double s = s0;
        double h = (s1 - s0) * 1e-4;
        double k1 = rhs(s, y);
        std::size_t rejected_in_row = 0;
        for (std::size_t iter = 0; iter < 1000000; ++iter) {
            if (s >= s1) return y;
            h = std::min(h, s1 - s);
            const double k2 = rhs(s + h * a21, y + h * a21 * k1);
            const double k3 = rhs(s + h * 0.3, y + h * (a31 * k1 + a32 * k2));
            const double k4 = rhs(s + h * 0.8, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const double k5 =
                rhs(s + h * (8.0 / 9.0), y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const double k6 =
                rhs(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const double y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const double k7 = rhs(s + h, y1);
            const double err =
                h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const double scale = abs_tol + rel_tol * std::max(std::fabs(y), std::fabs(y1));
            const double ratio = std::fabs(err) / scale;
            if (ratio <= 1.0) {
                s += h;
                y = y1;
                k1 = k7;
                if (on_accept) on_accept(s, y);
                rejected_in_row = 0;
            } else if (++rejected_in_row > 60) {
                throw Error(ErrorCode::BranchAmbiguity, "step control failed to converge");
            }
            const double factor =
                ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            h *= std::clamp(factor, 0.2, 5.0);
        }
        throw Error(ErrorCode::BranchAmbiguity, "step budget exhausted");
    }
};

double stable_small_root(const PrincipalODECoefficients& c) {
    const double disc = c.q * c.q - 4.0 * c.p * c.r;
    if (disc <= 1e-12 * (c.q * c.q + std::fabs(4.0 * c.p * c.r))) {
        std::ostringstream msg;
        msg << "discriminant " << disc << " too close to zero (p=" << c.p << ", q=" << c.q
            << ", r=" << c.r << ")";
        throw Error(ErrorCode::BranchAmbiguity, msg.str());
    }
    if (c.p == 0.0) return -c.r / c.q;
    const double sign_q = c.q >= 0.0 ? 1.0 : -1.0;
    const double big = -0.5 * (c.q + sign_q * std::sqrt(disc));
    return c.r / big;
}

}  // namespace

PrincipalODECoefficients ode_coefficients(const SurfaceGerm& germ, double s, double v) {
    const FundamentalForms forms = germ.forms(s, v);
    PrincipalODECoefficients out;
    out.p = forms.F * forms.g - forms.G * forms.f;
    out.q = forms.E * forms.g - forms.G * forms.e;
    out.r = forms.E * forms.f - forms.F * forms.e;
    return out;
}

double transverse_slope(const SurfaceGerm& germ, double s, double v) {
    return stable_small_root(ode_coefficients(germ, s, v));
}

PrincipalFlowTrace integrate_principal_line(const SurfaceGerm& germ, double v0,
                                            const FlowOptions& options) {
    if (std::fabs(v0) > 0.1 * germ.v_max())
        throw Error(ErrorCode::OutOfStrip, "v0 must satisfy |v0| <= 0.1 v_max");
    PrincipalFlowTrace trace;
    trace.v0 = v0;
    trace.samples.emplace_back(0.0, v0);

    const double vmax = germ.v_max();
    Dopri5 solver;
    solver.rel_tol = options.rel_tol;
    solver.abs_tol = options.abs_tol > 0.0 ? options.abs_tol : 1e-14 * vmax;
    solver.rhs = [&](double s, double v) {
        if (std::fabs(v) > vmax)
            throw Error(ErrorCode::LeftStrip, "principal line left the strip");
        return transverse_slope(germ, s, v);
    };
    solver.on_accept = [&](double s, double v) {
        if (std::fabs(v) > vmax)
            throw Error(ErrorCode::LeftStrip, "principal line left the strip");
        trace.samples.emplace_back(s, v);
        ++trace.steps;
        const PrincipalODECoefficients c = ode_coefficients(germ, s, v);
        const double t = stable_small_root(c);
        const double residual = std::fabs(c.p * t * t + c.q * t + c.r);
        const double scale =
            std::fabs(c.p) * t * t + std::fabs(c.q * t) + std::fabs(c.r);
        if (scale > 1e-300) trace.max_residual = std::max(trace.max_residual, residual / scale);
    };

    trace.v_end = solver.integrate(v0, 0.0, germ.curve().length());
    return trace;
}

PoincareDerivative poincare_log_derivative(const SurfaceGerm& germ, const FlowOptions& options) {
    PoincareDerivative out;

    auto shoot = [&](double v0) { return integrate_principal_line(germ, v0, options).v_end; };
    const double h1 = 1e-3 * germ.v_max();
    const double h2 = 0.5 * h1;
    const double d1 = (shoot(h1) - shoot(-h1)) / (2.0 * h1);
    const double d2 = (shoot(h2) - shoot(-h2)) / (2.0 * h2);
    const double derivative = (4.0 * d2 - d1) / 3.0;
    if (!(derivative > 0.0))
        throw Error(ErrorCode::Mismatch, "return map derivative is not positive");
    out.shooting = std::log(derivative);

    // variational route: ln pi'(0) = -loop (dR/dv) / Q at v = 0
    const FrenetCurve& curve = germ.curve();
    const double hv = 1e-3 * germ.v_max();
    out.variational = -curve.loop_integral([&](std::size_t i) {
        const double s = curve.grid()[i];
        const double r1 = ode_coefficients(germ, s, hv).r;
        const double r2 = ode_coefficients(germ, s, 2.0 * hv).r;
        const double rm1 = ode_coefficients(germ, s, -hv).r;
        const double rm2 = ode_coefficients(germ, s, -2.0 * hv).r;
        const double rv = (-r2 + 8.0 * r1 - 8.0 * rm1 + rm2) / (12.0 * hv);
        return rv / ode_coefficients(germ, s, 0.0).q;
    });
    return out;
}

ValidationResult cross_validate(const SurfaceGerm& germ, const HyperbolicityReport& report,
                                double validation_tol, double hyperbolicity_threshold) {
    const PoincareDerivative pd = poincare_log_derivative(germ);

    ValidationResult out;
    out.log_pi_prime_shooting = pd.shooting;
    out.log_pi_prime_variational = pd.variational;
    out.lambda = report.lambda;
    out.discrepancy = std::fabs(std::fabs(pd.shooting) - std::fabs(report.lambda));

    const double tol = std::max(validation_tol, 1e-3 * std::fabs(report.lambda));
    if (out.discrepancy > tol) {
        std::ostringstream msg;
        msg << "|ln pi'(0)| = " << std::fabs(pd.shooting) << " vs |lambda| = "
            << std::fabs(report.lambda) << " differ by " << out.discrepancy << " > " << tol;
        throw Error(ErrorCode::Mismatch, msg.str());
    }
    if (std::fabs(pd.shooting - pd.variational) > tol) {
        std::ostringstream msg;
        msg << "shooting " << pd.shooting << " vs variational " << pd.variational
            << " estimators disagree beyond " << tol;
        throw Error(ErrorCode::Mismatch, msg.str());
    }

    const bool oracle_hyperbolic = std::fabs(pd.shooting) > hyperbolicity_threshold;
    out.confirmed = oracle_hyperbolic == (report.verdict == Verdict::Hyperbolic);
    if (std::fabs(report.lambda) > hyperbolicity_threshold && oracle_hyperbolic)
        out.sign_relation = (pd.shooting > 0.0 ? 1 : -1) * (report.lambda > 0.0 ? 1 : -1);

    std::ostringstream detail;
    detail << "oracle " << (oracle_hyperbolic ? "hyperbolic" : "non-hyperbolic")
           << ", |ln pi'(0)| - |lambda| = " << out.discrepancy;
    out.detail = detail.str();
    return out;
}

}  // namespace forge
