#pragma once

#include <string>
#include <utility>
#include <vector>

#include "forge/germ.hpp"
#include "forge/hyperbolicity.hpp"

namespace forge {

// Coefficients of the principal-line equation p (dv)^2 + q ds dv + r (ds)^2 = 0,
// assembled from the fundamental forms: p = Fg - Gf, q = Eg - Ge, r = Ef - Fe.
struct PrincipalODECoefficients {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

PrincipalODECoefficients ode_coefficients(const SurfaceGerm& germ, double s, double v);

// dv/ds on the cycle's own foliation branch (the quadratic root continuous with 0
// at v = 0); throws BranchAmbiguity when the discriminant degenerates.
double transverse_slope(const SurfaceGerm& germ, double s, double v);

struct PrincipalFlowTrace {
    double v0 = 0.0;
    double v_end = 0.0;                              // pi(v0)
    std::vector<std::pair<double, double>> samples;  // accepted (s, v) steps
    std::size_t steps = 0;
    double max_residual = 0.0;  // worst relative residual of the quadratic
};

struct FlowOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;  // <= 0 selects 1e-14 * v_max
};

// Integrates dv/ds once around the cycle; throws LeftStrip when |v| exceeds v_max.
PrincipalFlowTrace integrate_principal_line(const SurfaceGerm& germ, double v0,
                                            const FlowOptions& options = {});

struct PoincareDerivative {
    double shooting = 0.0;     // ln pi'(0) from Richardson-extrapolated central differences
    double variational = 0.0;  // ln pi'(0) from quadrature of -(dR/dv)/Q along v = 0
};

PoincareDerivative poincare_log_derivative(const SurfaceGerm& germ,
                                           const FlowOptions& options = {});

struct ValidationResult {
    bool confirmed = false;
    int sign_relation = 0;  // sign(ln pi'(0)) * sign(lambda), 0 when either is below threshold
    double log_pi_prime_shooting = 0.0;
    double log_pi_prime_variational = 0.0;
    double lambda = 0.0;
    double discrepancy = 0.0;  // | |ln pi'(0)| - |lambda| |
    std::string detail;
};

// Confirms the certificate against the measured return map; throws Mismatch when the
// shooting and quadrature values disagree beyond max(validation_tol, 1e-3 |lambda|).
ValidationResult cross_validate(const SurfaceGerm& germ, const HyperbolicityReport& report,
                                double validation_tol = 1e-4,
                                double hyperbolicity_threshold = 1e-6);

}  // namespace forge
