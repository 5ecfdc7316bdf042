#include "forge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace forge {

namespace {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::TooFewSamples:
        case ErrorCode::NotClosed:
        case ErrorCode::CurvatureVanishes:
        case ErrorCode::UnknownFamily:
        case ErrorCode::InvalidParams:
        case ErrorCode::NoSignChange:
            return exit_codes::curve_error;
        case ErrorCode::NotQuantized:
            return exit_codes::not_quantized;
        case ErrorCode::UmbilicOnCycle:
        case ErrorCode::IdenticallyZero:
            return exit_codes::umbilic_on_cycle;
        case ErrorCode::Mismatch:
            return exit_codes::oracle_mismatch;
        case ErrorCode::ConfigError:
            return exit_codes::config_error;
        default:
            return exit_codes::numerical_error;
    }
}

json rounded(double x) { return json(round_sig12(x)); }

json curve_summary(const FrenetCurve& curve) {
    const auto [kmin, kmax] = std::minmax_element(curve.curvature_samples().begin(),
                                                  curve.curvature_samples().end());
    return {{"source", curve.source_description()},
            {"length", rounded(curve.length())},
            {"resolution", curve.resolution()},
            {"min_curvature", rounded(*kmin)},
            {"max_curvature", rounded(*kmax)}};
}

json torsion_summary_json(const TorsionSummary& summary) {
    return {{"total", rounded(summary.total)},
            {"m", summary.m},
            {"residual", rounded(summary.residual)}};
}

json certificate_json(const HyperbolicityReport& report) {
    json roots = json::array();
    for (double root : report.umbilic_roots) roots.push_back(rounded(root));
    return {{"theta0", rounded(report.theta0)},
            {"lambda", rounded(report.lambda)},
            {"dlambda_dtheta0", rounded(report.dlambda_dtheta0)},
            {"eps", rounded(report.eps_used)},
            {"dlambda_deps0", rounded(report.dlambda_deps0)},
            {"umbilic_roots", roots},
            {"verdict", verdict_name(report.verdict)},
            {"profile_mode", report.profile_mode}};
}

void write_text_file(const std::filesystem::path& path, const std::string& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    out << body;
}

void write_report(const OutputConfig& outputs, const json& report) {
    if (outputs.report.empty()) return;
    write_text_file(resolve_output_path(outputs.report), report.dump(2) + "\n");
}

std::string format12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_theta_csv(const std::filesystem::path& path, const ThetaField& theta) {
    std::ostringstream body;
    body << "s,theta\n";
    const auto& grid = theta.curve()->grid();
    for (std::size_t i = 0; i < grid.size(); ++i)
        body << format12(grid[i]) << "," << format12(theta.grid_values()[i]) << "\n";
    write_text_file(path, body.str());
}

void write_trace_csv(const std::filesystem::path& path, const PrincipalFlowTrace& trace) {
    std::ostringstream body;
    body << "s,v\n";
    for (const auto& [s, v] : trace.samples) body << format12(s) << "," << format12(v) << "\n";
    write_text_file(path, body.str());
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ostringstream body;
    body << "theta0,lambda,dlambda,umbilic_count\n";
    for (const SweepRow& row : rows) {
        body << format12(row.theta0) << ",";
        if (row.lambda) body << format12(*row.lambda);
        body << ",";
        if (row.dlambda) body << format12(*row.dlambda);
        body << "," << row.umbilic_count << "\n";
    }
    write_text_file(path, body.str());
}

GermProfiles profiles_for(const ThetaField& theta, const ProfileConfig& config) {
    GermProfiles prof;
    switch (config.mode) {
        case ProfileMode::Default:
            prof = default_profiles(theta);
            break;
        case ProfileMode::Frozen: {
            const ThetaField ref = solve_theta(theta.curve(), config.theta_ref);
            prof = default_profiles(ref);
            prof.mode = "frozen";
            prof.theta_ref = config.theta_ref;
            break;
        }
        case ProfileMode::Zero:
            prof = ruled_profiles(theta);
            break;
    }
    if (config.eps) prof.eps = *config.eps;
    const double length = theta.curve()->length();
    if (config.b_amplitude != 0.0) {
        const double amp = config.b_amplitude;
        const double w = 2.0 * std::numbers::pi / length;
        prof.B = {[amp, w](double s, int order) {
            switch (order) {
                case 0: return amp * std::sin(w * s);
                case 1: return amp * w * std::cos(w * s);
                default: return -amp * w * w * std::sin(w * s);
            }
        }};
    }
    if (config.c_amplitude != 0.0) {
        const double amp = config.c_amplitude;
        const double w = 2.0 * std::numbers::pi / length;
        prof.C = {[amp, w](double s, double v, int ds, int dv) {
            if (dv > 1) return 0.0;
            const double vpart = dv == 1 ? 1.0 : v;
            switch (ds) {
                case 0: return amp * vpart * std::sin(w * s);
                case 1: return amp * vpart * w * std::cos(w * s);
                default: return -amp * vpart * w * w * std::sin(w * s);
            }
        }};
    }
    return prof;
}

ProfileMode parse_mode(const std::string& name) {
    if (name == "default") return ProfileMode::Default;
    if (name == "frozen") return ProfileMode::Frozen;
    if (name == "zero") return ProfileMode::Zero;
    throw Error(ErrorCode::ConfigError, "unknown profile mode '" + name + "'");
}

}  // namespace

double round_sig12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::filesystem::path resolve_output_path(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p;
    if (const char* base = std::getenv("FORGE_OUTPUT_DIR"); base && *base)
        return std::filesystem::path(base) / p;
    return p;
}

RunConfig RunConfig::from_json(const json& j) {
    try {
        if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
            throw Error(ErrorCode::ConfigError, "config must declare schema_version 1");
        RunConfig config;

        const json& curve = j.at("curve");
        if (curve.contains("file")) {
            config.curve.file = curve.at("file").get<std::string>();
        } else {
            config.curve.family = curve.at("family").get<std::string>();
            if (curve.contains("params"))
                for (const auto& [key, value] : curve.at("params").items())
                    config.curve.params[key] = value.get<double>();
        }
        if (curve.contains("resolution"))
            config.curve.resolution = curve.at("resolution").get<std::size_t>();
        if (curve.contains("calibrate")) {
            const json& cal = curve.at("calibrate");
            CalibrationConfig cc;
            cc.param = cal.at("param").get<std::string>();
            cc.bracket_lo = cal.at("bracket").at(0).get<double>();
            cc.bracket_hi = cal.at("bracket").at(1).get<double>();
            cc.target_m = cal.at("target_m").get<long>();
            config.curve.calibrate = cc;
        }

        if (j.contains("theta0")) config.theta0 = j.at("theta0").get<double>();
        if (j.contains("sweep")) {
            SweepConfig sweep;
            sweep.count = j.at("sweep").at("count").get<std::size_t>();
            if (sweep.count < 1)
                throw Error(ErrorCode::ConfigError, "sweep count must be at least 1");
            config.sweep = sweep;
        }
        if (j.contains("profiles")) {
            const json& prof = j.at("profiles");
            if (prof.contains("mode"))
                config.profiles.mode = parse_mode(prof.at("mode").get<std::string>());
            if (prof.contains("eps")) config.profiles.eps = prof.at("eps").get<double>();
            if (prof.contains("theta_ref"))
                config.profiles.theta_ref = prof.at("theta_ref").get<double>();
            if (prof.contains("b_amplitude"))
                config.profiles.b_amplitude = prof.at("b_amplitude").get<double>();
            if (prof.contains("c_amplitude"))
                config.profiles.c_amplitude = prof.at("c_amplitude").get<double>();
        }
        if (j.contains("tolerances")) {
            const json& tol = j.at("tolerances");
            if (tol.contains("quantization"))
                config.tolerances.quantization = tol.at("quantization").get<double>();
            if (tol.contains("hyperbolicity"))
                config.tolerances.hyperbolicity = tol.at("hyperbolicity").get<double>();
            if (tol.contains("validation"))
                config.tolerances.validation = tol.at("validation").get<double>();
            for (double t : {config.tolerances.quantization, config.tolerances.hyperbolicity,
                             config.tolerances.validation})
                if (!(t > 0.0))
                    throw Error(ErrorCode::ConfigError, "tolerances must be positive");
        }
        if (j.contains("outputs")) {
            const json& out = j.at("outputs");
            if (out.contains("report")) config.outputs.report = out.at("report").get<std::string>();
            if (out.contains("mesh")) config.outputs.mesh = out.at("mesh").get<std::string>();
            if (out.contains("csv_dir"))
                config.outputs.csv_dir = out.at("csv_dir").get<std::string>();
            if (out.contains("mesh_resolution")) {
                config.outputs.mesh_resolution_s = out.at("mesh_resolution").at(0).get<std::size_t>();
                config.outputs.mesh_resolution_v = out.at("mesh_resolution").at(1).get<std::size_t>();
            }
        }
        if (j.contains("oracle")) config.oracle = j.at("oracle").get<bool>();
        return config;
    } catch (const json::exception& err) {
        throw Error(ErrorCode::ConfigError, err.what());
    }
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& err) {
        throw Error(ErrorCode::ConfigError, err.what());
    }
    return from_json(j);
}

FrenetCurve load_curve(const CurveConfig& config) {
    if (!config.file.empty()) {
        std::ifstream in(config.file);
        if (!in) throw Error(ErrorCode::ConfigError, "cannot read curve file " + config.file);
        json j;
        try {
            in >> j;
        } catch (const json::exception& err) {
            throw Error(ErrorCode::ConfigError, err.what());
        }
        try {
            std::vector<Vec3> points;
            for (const auto& entry : j.at("points"))
                points.push_back(
                    {entry.at(0).get<double>(), entry.at(1).get<double>(), entry.at(2).get<double>()});
            const bool closed = j.value("closed", true);
            const double tol = j.value("tol", 1e-6);
            const std::size_t resolution =
                config.resolution > 0 ? std::max<std::size_t>(config.resolution, points.size())
                                      : 0;
            return ingest_samples(points, closed, tol, resolution);
        } catch (const json::exception& err) {
            throw Error(ErrorCode::ConfigError, err.what());
        }
    }
    std::map<std::string, double> params = config.params;
    if (config.calibrate) {
        const CalibrationConfig& cal = *config.calibrate;
        params = calibrate_total_torsion(config.family, params, cal.param, cal.bracket_lo,
                                         cal.bracket_hi, cal.target_m, config.resolution);
    }
    return ingest_analytic(config.family, params, config.resolution);
}

PipelineOutcome run_pipeline(const RunConfig& config) {
    json report;
    report["schema_version"] = 1;
    report["tolerances"] = {{"quantization", rounded(config.tolerances.quantization)},
                            {"hyperbolicity", rounded(config.tolerances.hyperbolicity)},
                            {"validation", rounded(config.tolerances.validation)}};
    PipelineOutcome outcome;

    auto finish = [&](int code, const std::string& status) {
        report["status"] = status;
        report["exit_code"] = code;
        outcome.exit_code = code;
        outcome.report = report;
        write_report(config.outputs, report);
        return outcome;
    };
    auto fail = [&](const Error& err) {
        report["error"] = {{"code", error_code_name(err.code())}, {"message", err.what()}};
        return finish(exit_code_for(err.code()), "error");
    };

    try {
        auto curve = std::make_shared<const FrenetCurve>(load_curve(config.curve));
        report["curve"] = curve_summary(*curve);

        const TorsionSummary torsion = total_torsion(*curve);
        report["torsion"] = torsion_summary_json(torsion);
        if (torsion.residual > config.tolerances.quantization)
            throw Error(ErrorCode::NotQuantized,
                        "total torsion residual " + format12(torsion.residual) +
                            " exceeds the quantization tolerance");

        const ThetaField theta =
            solve_theta(curve, config.theta0, config.tolerances.quantization);

        HyperbolicityReport certificate;
        if (config.profiles.mode == ProfileMode::Default && !config.profiles.eps &&
            config.profiles.b_amplitude == 0.0 && config.profiles.c_amplitude == 0.0) {
            CertifyOptions options;
            options.hyperbolicity_threshold = config.tolerances.hyperbolicity;
            options.quantization_tol = config.tolerances.quantization;
            certificate = certify_hyperbolic(curve, config.theta0, options);
        } else {
            // explicit profile override: evaluate the certificate on that germ directly
            const GermProfiles profiles = profiles_for(theta, config.profiles);
            certificate.theta0 = config.theta0;
            certificate.profile_mode = profiles.mode;
            certificate.eps_used = profiles.eps;
            certificate.dlambda_deps0 = dlambda_deps0(theta);
            certificate.umbilic_roots = umbilic_roots(SurfaceGerm(theta, profiles));
            if (!certificate.umbilic_roots.empty()) {
                certificate.verdict = Verdict::UmbilicObstruction;
            } else {
                certificate.lambda = characteristic_exponent(theta, profiles);
                certificate.dlambda_dtheta0 = dlambda_dtheta0(theta, profiles);
                certificate.verdict =
                    std::fabs(certificate.lambda) > config.tolerances.hyperbolicity
                        ? Verdict::Hyperbolic
                        : Verdict::NonHyperbolic;
            }
        }
        report["certificate"] = certificate_json(certificate);

        GermProfiles germ_profiles = profiles_for(theta, config.profiles);
        germ_profiles.eps = certificate.eps_used;
        const SurfaceGerm germ(theta, germ_profiles);
        report["germ"] = {{"theta0", rounded(config.theta0)},
                          {"v_max", rounded(germ.v_max())},
                          {"eps", rounded(germ_profiles.eps)},
                          {"profile_mode", germ_profiles.mode},
                          {"curve_source", curve->source_description()}};

        if (!config.outputs.csv_dir.empty()) {
            const auto dir = resolve_output_path(config.outputs.csv_dir);
            write_theta_csv(dir / "theta.csv", theta);
        }
        if (!config.outputs.mesh.empty()) {
            const QuadMesh mesh = build_mesh(germ, config.outputs.mesh_resolution_s,
                                             config.outputs.mesh_resolution_v);
            std::ostringstream body;
            write_obj(mesh, body);
            write_text_file(resolve_output_path(config.outputs.mesh), body.str());
            report["mesh"] = {{"path", config.outputs.mesh},
                              {"seam_gap", rounded(mesh.seam_gap)},
                              {"vertices", mesh.vertices.size()},
                              {"faces", mesh.faces.size()}};
        }

        if (certificate.verdict == Verdict::CircleObstruction)
            return finish(exit_codes::circle_obstruction, "obstruction");
        if (certificate.verdict == Verdict::UmbilicObstruction)
            return finish(exit_codes::umbilic_on_cycle, "obstruction");

        if (config.oracle) {
            const ValidationResult validation =
                cross_validate(germ, certificate, config.tolerances.validation,
                               config.tolerances.hyperbolicity);
            report["oracle"] = {
                {"log_pi_prime_shooting", rounded(validation.log_pi_prime_shooting)},
                {"log_pi_prime_variational", rounded(validation.log_pi_prime_variational)},
                {"sign_relation", validation.sign_relation},
                {"discrepancy", rounded(validation.discrepancy)},
                {"confirmed", validation.confirmed}};
            if (!config.outputs.csv_dir.empty()) {
                const auto dir = resolve_output_path(config.outputs.csv_dir);
                write_trace_csv(dir / "trace.csv",
                                integrate_principal_line(germ, 1e-3 * germ.v_max()));
            }
            if (!validation.confirmed)
                throw Error(ErrorCode::Mismatch,
                            "oracle verdict disagrees with the certificate");
        }

        if (certificate.verdict == Verdict::Hyperbolic) return finish(exit_codes::ok, "hyperbolic");
        return finish(exit_codes::non_hyperbolic, "non-hyperbolic");
    } catch (const Error& err) {
        return fail(err);
    }
}

PipelineOutcome run_sweep(const RunConfig& config) {
    json report;
    report["schema_version"] = 1;
    PipelineOutcome outcome;
    try {
        auto curve = std::make_shared<const FrenetCurve>(load_curve(config.curve));
        report["curve"] = curve_summary(*curve);
        const TorsionSummary torsion = total_torsion(*curve);
        report["torsion"] = torsion_summary_json(torsion);
        if (torsion.residual > config.tolerances.quantization)
            throw Error(ErrorCode::NotQuantized, "sweep requires a quantized curve");

        const std::size_t count = config.sweep ? config.sweep->count : 64;
        const auto rows =
            lambda_sweep(curve, count, config.profiles.mode, config.profiles.theta_ref);
        const std::string csv_dir =
            config.outputs.csv_dir.empty() ? "." : config.outputs.csv_dir;
        const auto path = resolve_output_path(csv_dir) / "sweep.csv";
        write_sweep_csv(path, rows);
        report["sweep"] = {{"count", count}, {"path", path.string()}};
        report["status"] = "ok";
        outcome.exit_code = exit_codes::ok;
    } catch (const Error& err) {
        report["status"] = "error";
        report["error"] = {{"code", error_code_name(err.code())}, {"message", err.what()}};
        outcome.exit_code = exit_code_for(err.code());
    }
    report["exit_code"] = outcome.exit_code;
    outcome.report = report;
    write_report(config.outputs, report);
    return outcome;
}

PipelineOutcome run_mesh(const RunConfig& config) {
    json report;
    report["schema_version"] = 1;
    PipelineOutcome outcome;
    try {
        auto curve = std::make_shared<const FrenetCurve>(load_curve(config.curve));
        report["curve"] = curve_summary(*curve);
        const ThetaField theta = solve_theta(curve, config.theta0, config.tolerances.quantization);
        GermProfiles profiles = profiles_for(theta, config.profiles);
        const SurfaceGerm germ(theta, profiles);
        const QuadMesh mesh =
            build_mesh(germ, config.outputs.mesh_resolution_s, config.outputs.mesh_resolution_v);
        const std::string mesh_path =
            config.outputs.mesh.empty() ? "germ.obj" : config.outputs.mesh;
        std::ostringstream body;
        write_obj(mesh, body);
        write_text_file(resolve_output_path(mesh_path), body.str());
        report["mesh"] = {{"path", mesh_path},
                          {"seam_gap", rounded(mesh.seam_gap)},
                          {"vertices", mesh.vertices.size()},
                          {"faces", mesh.faces.size()}};
        report["germ"] = {{"theta0", rounded(config.theta0)},
                          {"v_max", rounded(germ.v_max())},
                          {"eps", rounded(profiles.eps)},
                          {"profile_mode", profiles.mode}};
        report["status"] = "ok";
        outcome.exit_code = exit_codes::ok;
    } catch (const Error& err) {
        report["status"] = "error";
        report["error"] = {{"code", error_code_name(err.code())}, {"message", err.what()}};
        outcome.exit_code = exit_code_for(err.code());
    }
    report["exit_code"] = outcome.exit_code;
    outcome.report = report;
    write_report(config.outputs, report);
    return outcome;
}

}  // namespace forge
