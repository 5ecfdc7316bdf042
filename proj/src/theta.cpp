#include "forge/theta.hpp"

#include <cmath>
#include <sstream>

namespace forge {

ThetaField solve_theta(std::shared_ptr<const FrenetCurve> curve, double theta0,
                       double quantization_tol) {
    const TorsionSummary summary = total_torsion(*curve);
    if (summary.residual > quantization_tol) {
        std::ostringstream msg;
        msg << "total torsion " << summary.total << " is " << summary.residual
            << " away from 2*pi*" << summary.m << "; the germ cannot close up";
        throw Error(ErrorCode::NotQuantized, msg.str());
    }
    ThetaField field;
    field.curve_ = std::move(curve);
    field.theta0_ = theta0;
    field.winding_ = summary.m;
    const auto& grid = field.curve_->grid();
    field.values_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        field.values_[i] = theta0 - field.curve_->torsion_integral(grid[i]);
    return field;
}

Vec3 normal_direction(const ThetaField& theta, double s) {
    const FrenetFrame fr = theta.curve()->frenet(s);
    const double th = theta.value(s);
    return std::cos(th) * fr.binormal - std::sin(th) * fr.normal;
}

Vec3 conormal_direction(const ThetaField& theta, double s) {
    const FrenetFrame fr = theta.curve()->frenet(s);
    const double th = theta.value(s);
    return std::cos(th) * fr.normal + std::sin(th) * fr.binormal;
}

}  // namespace forge
