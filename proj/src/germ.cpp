#include "forge/germ.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace forge {

namespace {

// Bundle of every scalar needed to assemble alpha-derivatives at (s, v).
struct StripScalars {
    double k, kp;          // curvature and d/ds
    double tau;
    double sinth, costh;
    double P, Ps, Pv, Pss, Psv, Pvv;
    double m1, m1s, m1v;   // <alpha_s, t> and its s-/v-derivatives
};

StripScalars strip_scalars(const ThetaField& theta, const GermProfiles& prof, double s,
                           double v) {
    const FrenetCurve& curve = *theta.curve();
    StripScalars q;
    q.k = curve.curvature(s);
    q.kp = curve.curvature(s, 1);
    q.tau = curve.torsion(s);
    const double th = theta.value(s);
    q.sinth = std::sin(th);
    q.costh = std::cos(th);

    const double D = prof.A(s) + prof.eps * prof.a(s);
    const double Dp = prof.A(s, 1) + prof.eps * prof.a(s, 1);
    const double Dpp = prof.A(s, 2) + prof.eps * prof.a(s, 2);
    const double B = prof.B(s), Bp = prof.B(s, 1), Bpp = prof.B(s, 2);
    const double C = prof.C(s, v), Cs = prof.C(s, v, 1, 0), Cv = prof.C(s, v, 0, 1);
    const double Css = prof.C(s, v, 2, 0), Csv = prof.C(s, v, 1, 1), Cvv = prof.C(s, v, 0, 2);

    const double v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
    q.P = 0.5 * D * v2 + B * v3 / 6.0 + v4 * C;
    q.Pv = D * v + 0.5 * B * v2 + 4.0 * v3 * C + v4 * Cv;
    q.Pvv = D + B * v + 12.0 * v2 * C + 8.0 * v3 * Cv + v4 * Cvv;
    q.Ps = 0.5 * Dp * v2 + Bp * v3 / 6.0 + v4 * Cs;
    q.Psv = Dp * v + 0.5 * Bp * v2 + 4.0 * v3 * Cs + v4 * Csv;
    q.Pss = 0.5 * Dpp * v2 + Bpp * v3 / 6.0 + v4 * Css;

    // theta' = -tau, so (k cos)' = k' cos + k tau sin and (k sin)' = k' sin - k tau cos
    const double kcosp = q.kp * q.costh + q.k * q.tau * q.sinth;
    const double ksinp = q.kp * q.sinth - q.k * q.tau * q.costh;
    q.m1 = 1.0 - v * q.k * q.costh + q.P * q.k * q.sinth;
    q.m1s = -v * kcosp + q.Ps * q.k * q.sinth + q.P * ksinp;
    q.m1v = -q.k * q.costh + q.Pv * q.k * q.sinth;
    return q;
}

double profile_seam_gap(const ScalarField& f, double length) {
    double gap = 0.0;
    for (int order = 0; order <= 1; ++order)
        gap = std::max(gap, std::fabs(f(length, order) - f(0.0, order)));
    return gap;
}

}  // namespace

ScalarField zero_scalar_field() {
    return {[](double, int) { return 0.0; }};
}

TransverseField zero_transverse_field() {
    return {[](double, double, int, int) { return 0.0; }};
}

ScalarField spline_scalar_field(std::shared_ptr<const PeriodicSpline> spline,
                                int derivative_shift) {
    return {[spline = std::move(spline), derivative_shift](double s, int order) {
        return spline->eval(s, order + derivative_shift);
    }};
}

GermProfiles default_profiles(const ThetaField& theta) {
    const FrenetCurve& curve = *theta.curve();
    const std::size_t n = curve.resolution();
    std::vector<double> profile_samples(n), q_samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = curve.curvature_samples()[i];
        const double sinth = std::sin(theta.grid_values()[i]);
        profile_samples[i] = (1.0 - sinth) * k;
        q_samples[i] = k * sinth;
    }
    auto profile_spline =
        std::make_shared<PeriodicSpline>(std::move(profile_samples), curve.length());
    auto q_spline = std::make_shared<PeriodicSpline>(std::move(q_samples), curve.length());

    GermProfiles prof;
    prof.A = spline_scalar_field(profile_spline);
    prof.B = zero_scalar_field();
    prof.C = zero_transverse_field();
    prof.a = spline_scalar_field(q_spline, 1);  // (k sin theta)'
    prof.eps = 0.0;
    prof.mode = "default";
    prof.theta_ref = theta.theta0();
    return prof;
}

GermProfiles ruled_profiles(const ThetaField& theta) {
    GermProfiles prof = default_profiles(theta);
    prof.A = zero_scalar_field();
    prof.mode = "zero";
    return prof;
}

SurfaceGerm::SurfaceGerm(ThetaField theta, GermProfiles profiles, double v_max)
    : theta_(std::move(theta)), profiles_(std::move(profiles)) {
    const FrenetCurve& curve = *theta_.curve();
    const double kmax =
        *std::max_element(curve.curvature_samples().begin(), curve.curvature_samples().end());
    v_max_ = v_max > 0.0 ? v_max : 0.2 / kmax;

    const double L = curve.length();
    for (const ScalarField* f : {&profiles_.A, &profiles_.B, &profiles_.a}) {
        const double gap = profile_seam_gap(*f, L);
        if (gap > 1e-9) {
            std::ostringstream msg;
            msg << "profile seam gap " << gap << " exceeds 1e-9";
            throw Error(ErrorCode::SeamMismatch, msg.str());
        }
    }
}

double SurfaceGerm::effective_profile(double s, int order) const {
    return profiles_.A(s, order) + profiles_.eps * profiles_.a(s, order);
}

Vec3 SurfaceGerm::point(double s, double v) const {
    if (std::fabs(v) > v_max_ * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "|v| = " << std::fabs(v) << " exceeds the strip half-width " << v_max_;
        throw Error(ErrorCode::OutOfStrip, msg.str());
    }
    const FrenetCurve& curve = *theta_.curve();
    const FrenetFrame fr = curve.frenet(s);
    const double th = theta_.value(s);
    const Vec3 conormal = std::cos(th) * fr.normal + std::sin(th) * fr.binormal;
    const Vec3 normal = std::cos(th) * fr.binormal - std::sin(th) * fr.normal;
    const StripScalars q = strip_scalars(theta_, profiles_, s, v);
    return curve.position(s) + v * conormal + q.P * normal;
}

FundamentalForms SurfaceGerm::forms(double s, double v) const {
    const StripScalars q = strip_scalars(theta_, profiles_, s, v);

    FundamentalForms out;
    out.E = q.m1 * q.m1 + q.Ps * q.Ps;
    out.F = q.Ps * q.Pv;
    out.G = 1.0 + q.Pv * q.Pv;
    const double detg = q.m1 * q.m1 * (1.0 + q.Pv * q.Pv) + q.Ps * q.Ps;  // EG - F^2, exact
    if (!(detg > 1e-12)) {
        std::ostringstream msg;
        msg << "EG - F^2 = " << detg << " at (s, v) = (" << s << ", " << v << ")";
        throw Error(ErrorCode::DegenerateMetric, msg.str());
    }
    const double rg = std::sqrt(detg);
    out.e = (q.m1 * (q.Pss - q.m1 * q.k * q.sinth) - q.m1 * q.m1 * q.Pv * q.k * q.costh -
             q.Ps * (q.m1s + q.k * q.sinth * q.Ps)) /
            rg;
    out.f = (q.m1 * q.Psv - q.Ps * q.m1v) / rg;
    out.g = q.m1 * q.Pvv / rg;

    out.mean = (out.E * out.g - 2.0 * out.F * out.f + out.G * out.e) / (2.0 * detg);
    out.gauss = (out.e * out.g - out.f * out.f) / detg;
    const double disc = std::sqrt(std::max(out.mean * out.mean - out.gauss, 0.0));
    out.k1 = out.mean - disc;
    out.k2 = out.mean + disc;
    return out;
}

SeriesCheck forms_series_check(const SurfaceGerm& germ, double s) {
    const double h = 1e-3 * germ.v_max();
    auto slope = [&](auto pick) {
        const double f1 = pick(germ.forms(s, h));
        const double f2 = pick(germ.forms(s, 2.0 * h));
        const double fm1 = pick(germ.forms(s, -h));
        const double fm2 = pick(germ.forms(s, -2.0 * h));
        return (-f2 + 8.0 * f1 - 8.0 * fm1 + fm2) / (12.0 * h);
    };

    const FrenetCurve& curve = germ.curve();
    const double k = curve.curvature(s);
    const double th = germ.theta().value(s);
    const double D = germ.effective_profile(s);
    const double Dp = germ.effective_profile(s, 1);

    SeriesCheck check;
    check.measured = {slope([](const FundamentalForms& f) { return f.E; }),
                      slope([](const FundamentalForms& f) { return f.e; }),
                      slope([](const FundamentalForms& f) { return f.f; }),
                      slope([](const FundamentalForms& f) { return f.g; })};
    check.expected = {-2.0 * k * std::cos(th),
                      k * std::cos(th) * (k * std::sin(th) - D),
                      Dp,
                      germ.profiles().B(s)};
    for (int i = 0; i < 4; ++i) check.residual[i] = check.measured[i] - check.expected[i];
    return check;
}

std::vector<double> umbilic_roots(const SurfaceGerm& germ) {
    const FrenetCurve& curve = germ.curve();
    const ThetaField& theta = germ.theta();
    auto separation = [&](double s) {
        return germ.effective_profile(s) + curve.curvature(s) * std::sin(theta.value(s));
    };

    const std::size_t n = curve.resolution();
    const double L = curve.length();
    std::vector<double> values(n);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = separation(curve.grid()[i]);
        max_abs = std::max(max_abs, std::fabs(values[i]));
    }
    const double kmax =
        *std::max_element(curve.curvature_samples().begin(), curve.curvature_samples().end());
    if (max_abs <= 1e-10 * std::max(1.0, kmax))
        throw Error(ErrorCode::IdenticallyZero,
                    "A + k sin theta vanishes along the whole curve");

    std::vector<double> roots;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        double lo = curve.grid()[i];
        double hi = lo + L / static_cast<double>(n);
        double flo = values[i], fhi = values[j];
        if (flo == 0.0) {
            roots.push_back(lo);
            continue;
        }
        if ((flo < 0.0) == (fhi < 0.0) || fhi == 0.0) continue;
        for (int iter = 0; iter < 80 && hi - lo > 1e-10; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double fm = separation(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

QuadMesh build_mesh(const SurfaceGerm& germ, std::size_t resolution_s, std::size_t resolution_v) {
    if (resolution_s < 3 || resolution_v < 2)
        throw Error(ErrorCode::InvalidParams, "mesh needs resolution_s >= 3 and resolution_v >= 2");
    const double L = germ.curve().length();
    const double vmax = germ.v_max();

    QuadMesh mesh;
    mesh.columns = resolution_s;
    mesh.rows = resolution_v;
    mesh.vertices.resize(resolution_s * resolution_v);
    auto v_at = [&](std::size_t j) {
        return -vmax + 2.0 * vmax * static_cast<double>(j) / static_cast<double>(resolution_v - 1);
    };
    for (std::size_t j = 0; j < resolution_v; ++j) {
        for (std::size_t i = 0; i < resolution_s; ++i) {
            const double s = L * static_cast<double>(i) / static_cast<double>(resolution_s);
            mesh.vertices[i + j * resolution_s] = germ.point(s, v_at(j));
        }
    }

    // s = L column before welding; the gap measures how well the strip closes
    for (std::size_t j = 0; j < resolution_v; ++j) {
        const Vec3 seam = germ.point(L, v_at(j));
        mesh.seam_gap = std::max(mesh.seam_gap, norm(seam - mesh.vertices[0 + j * resolution_s]));
    }
    if (mesh.seam_gap > 1e-6) {
        std::ostringstream msg;
        msg << "seam gap " << mesh.seam_gap << " exceeds 1e-6";
        throw Error(ErrorCode::SeamMismatch, msg.str());
    }

    mesh.faces.reserve(resolution_s * (resolution_v - 1));
    for (std::size_t j = 0; j + 1 < resolution_v; ++j) {
        for (std::size_t i = 0; i < resolution_s; ++i) {
            const int i1 = static_cast<int>((i + 1) % resolution_s);
            mesh.faces.push_back({static_cast<int>(i + j * resolution_s),
                                  static_cast<int>(i1 + j * resolution_s),
                                  static_cast<int>(i1 + (j + 1) * resolution_s),
                                  static_cast<int>(i + (j + 1) * resolution_s)});
        }
    }
    return mesh;
}

void write_obj(const QuadMesh& mesh, std::ostream& out) {
    out.precision(17);
    for (const Vec3& p : mesh.vertices) out << "v " << p.x << " " << p.y << " " << p.z << "\n";
    for (const auto& face : mesh.faces)
        out << "f " << face[0] + 1 << " " << face[1] + 1 << " " << face[2] + 1 << " "
            << face[3] + 1 << "\n";
}

}  // namespace forge
