#pragma once

#include <cstddef>
#include <vector>

namespace forge {

// Interpolating quintic spline on a uniform periodic grid. Degree 5 gives four
// continuous derivatives, enough for third derivatives of interpolated data.
// Integrals are exact (per-interval Gauss quadrature of the polynomial pieces).
class PeriodicSpline {
public:
    PeriodicSpline() = default;

    // values[i] is the sample at t = i * period / values.size(); needs >= 8 samples.
    PeriodicSpline(std::vector<double> values, double period);

    double eval(double t, int order = 0) const;  // order 0..4, t interpreted mod period
    double operator()(double t) const { return eval(t, 0); }

    double integral(double t) const;  // integral of the spline over [0, t], any real t
    double period_integral() const { return prefix_.back(); }

    double period() const { return period_; }
    std::size_t size() const { return n_; }
    bool valid() const { return n_ > 0; }

private:
    std::size_t n_ = 0;
    double period_ = 0.0;
    double h_ = 0.0;
    std::vector<double> coef_;    // periodic B-spline coefficients
    std::vector<double> prefix_;  // prefix_[i] = integral over [0, i*h]
};

}  // namespace forge
