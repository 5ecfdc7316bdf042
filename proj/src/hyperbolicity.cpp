#include "forge/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

namespace forge {

namespace {

struct CycleData {
    std::vector<double> k1, k1p;  // -k sin theta and derivative
    std::vector<double> k2, k2p;  // A + eps a and derivative
};

CycleData cycle_data(const ThetaField& theta, const GermProfiles& prof) {
    const FrenetCurve& curve = *theta.curve();
    const std::size_t n = curve.resolution();
    CycleData data;
    data.k1.resize(n);
    data.k1p.resize(n);
    data.k2.resize(n);
    data.k2p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = curve.grid()[i];
        const double k = curve.curvature_samples()[i];
        const double kp = curve.curvature(s, 1);
        const double tau = curve.torsion_samples()[i];
        const double th = theta.grid_values()[i];
        const double sinth = std::sin(th), costh = std::cos(th);
        data.k1[i] = -k * sinth;
        data.k1p[i] = -(kp * sinth - k * tau * costh);
        data.k2[i] = prof.A(s) + prof.eps * prof.a(s);
        data.k2p[i] = prof.A(s, 1) + prof.eps * prof.a(s, 1);
    }
    return data;
}

void require_umbilic_free(const FrenetCurve& curve, const std::vector<double>& separation) {
    const double kmax =
        *std::max_element(curve.curvature_samples().begin(), curve.curvature_samples().end());
    const double floor = 1e-9 * std::max(1.0, kmax);
    for (std::size_t i = 0; i < separation.size(); ++i) {
        const std::size_t j = (i + 1) % separation.size();
        const bool crosses = (separation[i] < 0.0) != (separation[j] < 0.0);
        if (crosses || std::fabs(separation[i]) < floor) {
            std::ostringstream msg;
            msg << "k2 - k1 reaches zero near s = " << curve.grid()[i];
            throw Error(ErrorCode::UmbilicOnCycle, msg.str());
        }
    }
}

// Deformation profile samples (k sin theta)' straight from the curve splines.
std::vector<double> deformation_samples(const ThetaField& theta, int order) {
    const FrenetCurve& curve = *theta.curve();
    const std::size_t n = curve.resolution();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = curve.curvature_samples()[i] *
                                               std::sin(theta.grid_values()[i]);
    PeriodicSpline spline(std::move(q), curve.length());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = spline.eval(curve.grid()[i], order);
    return out;
}

}  // namespace

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Hyperbolic: return "Hyperbolic";
        case Verdict::NonHyperbolic: return "NonHyperbolic";
        case Verdict::UmbilicObstruction: return "UmbilicObstruction";
        case Verdict::CircleObstruction: return "CircleObstruction";
    }
    return "Unknown";
}

double characteristic_exponent(const ThetaField& theta, const GermProfiles& profiles) {
    const FrenetCurve& curve = *theta.curve();
    const CycleData data = cycle_data(theta, profiles);
    std::vector<double> separation(data.k1.size());
    for (std::size_t i = 0; i < data.k1.size(); ++i) separation[i] = data.k2[i] - data.k1[i];
    require_umbilic_free(curve, separation);
    return curve.loop_integral([&](std::size_t i) { return data.k2p[i] / separation[i]; });
}

GutierrezSotomayorIntegrals gs_criterion(const ThetaField& theta, const GermProfiles& profiles) {
    const FrenetCurve& curve = *theta.curve();
    const CycleData data = cycle_data(theta, profiles);
    std::vector<double> separation(data.k1.size());
    for (std::size_t i = 0; i < data.k1.size(); ++i) separation[i] = data.k2[i] - data.k1[i];
    require_umbilic_free(curve, separation);

    GutierrezSotomayorIntegrals out;
    out.dk1 = curve.loop_integral([&](std::size_t i) { return data.k1p[i] / separation[i]; });
    out.dk2 = curve.loop_integral([&](std::size_t i) { return data.k2p[i] / separation[i]; });
    out.mean_form = 0.5 * curve.loop_integral([&](std::size_t i) {
        const double hp = 0.5 * (data.k1p[i] + data.k2p[i]);
        const double h = 0.5 * (data.k1[i] + data.k2[i]);
        const double k = data.k1[i] * data.k2[i];
        return hp / std::sqrt(std::max(h * h - k, 0.0));
    });
    return out;
}

double dlambda_dtheta0(const ThetaField& theta, const GermProfiles& profiles) {
    const FrenetCurve& curve = *theta.curve();
    const CycleData data = cycle_data(theta, profiles);
    std::vector<double> separation(data.k1.size());
    for (std::size_t i = 0; i < data.k1.size(); ++i) separation[i] = data.k2[i] - data.k1[i];
    require_umbilic_free(curve, separation);
    return -curve.loop_integral([&](std::size_t i) {
        const double k = curve.curvature_samples()[i];
        const double costh = std::cos(theta.grid_values()[i]);
        return k * data.k2p[i] * costh / (separation[i] * separation[i]);
    });
}

double lambda_perturbed(const ThetaField& theta, double eps) {
    const FrenetCurve& curve = *theta.curve();
    const std::vector<double> a = deformation_samples(theta, 1);
    const double kmax =
        *std::max_element(curve.curvature_samples().begin(), curve.curvature_samples().end());
    std::vector<double> denom(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        denom[i] = curve.curvature_samples()[i] + eps * a[i];
        if (denom[i] <= 1e-9 * std::max(1.0, kmax)) {
            std::ostringstream msg;
            msg << "k + eps (k sin theta)' = " << denom[i] << " at s = " << curve.grid()[i];
            throw Error(ErrorCode::EpsTooLarge, msg.str());
        }
    }
    return -curve.loop_integral([&](std::size_t i) { return a[i] / denom[i]; });
}

double dlambda_deps0(const ThetaField& theta) {
    const FrenetCurve& curve = *theta.curve();
    const std::vector<double> a = deformation_samples(theta, 1);
    return curve.loop_integral([&](std::size_t i) {
        const double ratio = a[i] / curve.curvature_samples()[i];
        return ratio * ratio;
    });
}

HyperbolicityReport certify_hyperbolic(std::shared_ptr<const FrenetCurve> curve, double theta0,
                                       const CertifyOptions& options) {
    const ThetaField theta = solve_theta(curve, theta0, options.quantization_tol);

    HyperbolicityReport report;
    report.theta0 = theta0;
    report.profile_mode = "default";

    // Degenerate case: constant k sin theta kills both Lambda and the deformation.
    std::vector<double> q(curve->resolution());
    for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = curve->curvature_samples()[i] * std::sin(theta.grid_values()[i]);
    const double mean = std::accumulate(q.begin(), q.end(), 0.0) / static_cast<double>(q.size());
    double deviation = 0.0;
    for (double value : q) deviation = std::max(deviation, std::fabs(value - mean));
    if (deviation <= 1e-9 * std::max(1.0, std::fabs(mean))) {
        report.verdict = Verdict::CircleObstruction;
        return report;
    }

    const GermProfiles profiles = default_profiles(theta);
    report.lambda = characteristic_exponent(theta, profiles);
    report.dlambda_dtheta0 = dlambda_dtheta0(theta, profiles);
    report.dlambda_deps0 = dlambda_deps0(theta);
    report.umbilic_roots = umbilic_roots(SurfaceGerm(theta, profiles));

    if (std::fabs(report.lambda) > options.hyperbolicity_threshold) {
        report.verdict = Verdict::Hyperbolic;
        return report;
    }

    // Deformation branch: eps scaled by the profile magnitude, halved until the
    // principal-curvature separation stays positive.
    const std::vector<double> a = deformation_samples(theta, 1);
    double amax = 0.0;
    for (double value : a) amax = std::max(amax, std::fabs(value));
    if (amax == 0.0) {
        report.verdict = Verdict::NonHyperbolic;
        return report;
    }
    double eps = 0.1 / amax;
    for (int attempt = 0; attempt < 20; ++attempt) {
        try {
            const double lambda_eps = lambda_perturbed(theta, eps);
            report.eps_used = eps;
            report.lambda = lambda_eps;
            GermProfiles perturbed = profiles;
            perturbed.eps = eps;
            report.umbilic_roots = umbilic_roots(SurfaceGerm(theta, perturbed));
            report.verdict = std::fabs(lambda_eps) > options.hyperbolicity_threshold
                                 ? Verdict::Hyperbolic
                                 : Verdict::NonHyperbolic;
            return report;
        } catch (const Error& err) {
            if (err.code() != ErrorCode::EpsTooLarge) throw;
            eps *= 0.5;
        }
    }
    report.verdict = Verdict::NonHyperbolic;
    return report;
}

std::vector<SweepRow> lambda_sweep(std::shared_ptr<const FrenetCurve> curve, std::size_t count,
                                   ProfileMode mode, double theta_ref) {
    std::vector<SweepRow> rows(count);

    std::optional<GermProfiles> fixed;
    if (mode != ProfileMode::Default) {
        const ThetaField ref = solve_theta(curve, theta_ref);
        fixed = mode == ProfileMode::Frozen ? default_profiles(ref) : ruled_profiles(ref);
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto fill = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t i = begin; i < end; ++i) {
                const double theta0 =
                    2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
                SweepRow& row = rows[i];
                row.theta0 = theta0;
                const ThetaField theta = solve_theta(curve, theta0);
                const GermProfiles profiles = fixed ? *fixed : default_profiles(theta);
                try {
                    row.umbilic_count = umbilic_roots(SurfaceGerm(theta, profiles)).size();
                    row.lambda = characteristic_exponent(theta, profiles);
                    row.dlambda = dlambda_dtheta0(theta, profiles);
                } catch (const Error& err) {
                    if (err.code() == ErrorCode::IdenticallyZero)
                        row.umbilic_count = curve->resolution();
                    else if (err.code() != ErrorCode::UmbilicOnCycle)
                        throw;
                }
            }
        } catch (...) {
            std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
    if (workers <= 1) {
        fill(0, count);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (count + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(fill, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace forge
