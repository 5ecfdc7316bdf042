#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/germ.hpp"

namespace forge {

enum class Verdict { Hyperbolic, NonHyperbolic, UmbilicObstruction, CircleObstruction };

const char* verdict_name(Verdict verdict);

struct HyperbolicityReport {
    double theta0 = 0.0;
    double lambda = 0.0;            // characteristic exponent of the certified germ
    double dlambda_dtheta0 = 0.0;
    double eps_used = 0.0;
    double dlambda_deps0 = 0.0;
    std::vector<double> umbilic_roots;
    std::optional<double> oracle_log_pi_prime;  // filled by the flow oracle
    std::optional<int> oracle_sign_relation;
    Verdict verdict = Verdict::NonHyperbolic;
    std::string profile_mode = "default";
};

// Loop integral of (A + eps a)' / (A + eps a + k sin theta); throws UmbilicOnCycle
// when the denominator has a root on the cycle.
double characteristic_exponent(const ThetaField& theta, const GermProfiles& profiles);

struct GutierrezSotomayorIntegrals {
    double dk1 = 0.0;        // loop dk1 / (k2 - k1)
    double dk2 = 0.0;        // loop dk2 / (k2 - k1)
    double mean_form = 0.0;  // half loop dH / sqrt(H^2 - K)
};
GutierrezSotomayorIntegrals gs_criterion(const ThetaField& theta, const GermProfiles& profiles);

// d Lambda / d theta0 with the A profile held fixed: -loop k A' cos / (A + k sin)^2.
double dlambda_dtheta0(const ThetaField& theta, const GermProfiles& profiles);

// Characteristic exponent of the default-A germ deformed by eps:
// -loop a / (k + eps a) with a = (k sin theta)'. Throws EpsTooLarge when the
// deformation drives the principal-curvature separation k + eps a to zero.
double lambda_perturbed(const ThetaField& theta, double eps);

// d/d eps at 0 of lambda_perturbed: loop [(k sin theta)'/k]^2 >= 0.
double dlambda_deps0(const ThetaField& theta);

struct CertifyOptions {
    double hyperbolicity_threshold = 1e-6;
    double quantization_tol = 1e-6;
};

// Constructive strategy: default profiles; constant k sin theta is the circle-like
// obstruction; otherwise certify via Lambda, falling back to the eps deformation.
HyperbolicityReport certify_hyperbolic(std::shared_ptr<const FrenetCurve> curve, double theta0,
                                       const CertifyOptions& options = {});

struct SweepRow {
    double theta0 = 0.0;
    std::optional<double> lambda;   // empty when the cycle hits an umbilic
    std::optional<double> dlambda;
    std::size_t umbilic_count = 0;
};

enum class ProfileMode { Default, Frozen, Zero };

// One row per theta0 over [0, 2pi); rows are computed in parallel.
std::vector<SweepRow> lambda_sweep(std::shared_ptr<const FrenetCurve> curve, std::size_t count,
                                   ProfileMode mode, double theta_ref = 0.0);

}  // namespace forge
