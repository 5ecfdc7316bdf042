#pragma once

#include <memory>
#include <vector>

#include "forge/curve.hpp"

namespace forge {

// Solution of the normal-transport equation theta'(s) = -tau(s), theta(0) = theta0,
// stored unwrapped so the winding integer is explicit. Immutable.
class ThetaField {
public:
    double theta0() const { return theta0_; }
    long winding() const { return winding_; }

    double value(double s) const { return theta0_ - curve_->torsion_integral(s); }
    double derivative(double s) const { return -curve_->torsion(s); }

    const std::vector<double>& grid_values() const { return values_; }
    const std::shared_ptr<const FrenetCurve>& curve() const { return curve_; }

    friend ThetaField solve_theta(std::shared_ptr<const FrenetCurve> curve, double theta0,
                                  double quantization_tol);

private:
    ThetaField() = default;

    std::shared_ptr<const FrenetCurve> curve_;
    double theta0_ = 0.0;
    long winding_ = 0;
    std::vector<double> values_;
};

// Throws NotQuantized when the total torsion is not within quantization_tol of 2*pi*m.
ThetaField solve_theta(std::shared_ptr<const FrenetCurve> curve, double theta0,
                       double quantization_tol = 1e-6);

// Surface normal along the curve: cos(theta) b - sin(theta) n.
Vec3 normal_direction(const ThetaField& theta, double s);

// Transverse strip direction (the conormal N ^ T): cos(theta) n + sin(theta) b.
Vec3 conormal_direction(const ThetaField& theta, double s);

}  // namespace forge
