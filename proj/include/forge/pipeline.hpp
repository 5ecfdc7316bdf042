#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "forge/flow.hpp"

namespace forge {

namespace exit_codes {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int curve_error = 3;
inline constexpr int not_quantized = 4;
inline constexpr int circle_obstruction = 5;
inline constexpr int umbilic_on_cycle = 6;
inline constexpr int oracle_mismatch = 7;
inline constexpr int non_hyperbolic = 8;
inline constexpr int numerical_error = 9;
}  // namespace exit_codes

struct CalibrationConfig {
    std::string param;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    long target_m = 0;
};

struct CurveConfig {
    std::string family;                     // one of the built-in families, or
    std::string file;                       // path to a curve sample file
    std::map<std::string, double> params;
    std::size_t resolution = 512;
    std::optional<CalibrationConfig> calibrate;
};

struct ProfileConfig {
    ProfileMode mode = ProfileMode::Default;
    std::optional<double> eps;       // explicit deformation; unset lets certify choose
    double theta_ref = 0.0;          // reference angle for frozen mode
    double b_amplitude = 0.0;        // single-harmonic B override
    double c_amplitude = 0.0;        // single-harmonic C(s,v) = amp * v * sin(2 pi s / L)
};

struct ToleranceConfig {
    double quantization = 1e-6;
    double hyperbolicity = 1e-6;
    double validation = 1e-4;
};

struct OutputConfig {
    std::string report = "report.json";
    std::string mesh;      // OBJ path; empty disables
    std::string csv_dir;   // directory for theta/sweep/trace CSVs; empty disables
    std::size_t mesh_resolution_s = 256;
    std::size_t mesh_resolution_v = 9;
};

struct SweepConfig {
    std::size_t count = 64;
};

struct RunConfig {
    CurveConfig curve;
    double theta0 = 1.5707963267948966;
    std::optional<SweepConfig> sweep;
    ProfileConfig profiles;
    ToleranceConfig tolerances;
    OutputConfig outputs;
    bool oracle = true;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::filesystem::path& path);
};

struct PipelineOutcome {
    int exit_code = 0;
    nlohmann::json report;
};

// ingest -> quantization gate -> theta -> certify -> optional oracle -> artifacts
PipelineOutcome run_pipeline(const RunConfig& config);

// Lambda(theta0) sweep CSV: theta0, lambda, dlambda, umbilic_count.
PipelineOutcome run_sweep(const RunConfig& config);

// Builds the strip mesh and writes the OBJ.
PipelineOutcome run_mesh(const RunConfig& config);

FrenetCurve load_curve(const CurveConfig& config);

// All serialized numbers are rounded to 12 significant digits for bit-stable output.
double round_sig12(double x);

// Output paths resolve against FORGE_OUTPUT_DIR when it is set and the path is relative.
std::filesystem::path resolve_output_path(const std::string& path);

}  // namespace forge
