#include "forge/periodic_spline.hpp"

#include <array>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace forge {

namespace {

// Uniform B-spline of the given degree, supported on [0, degree+1).
double uniform_bspline(int degree, double x) {
    if (x < 0.0 || x >= degree + 1.0) return 0.0;
    if (degree == 0) return 1.0;
    return (x * uniform_bspline(degree - 1, x) +
            (degree + 1.0 - x) * uniform_bspline(degree - 1, x - 1.0)) /
           degree;
}

// r-th derivative via the difference formula B_d^(r)(x) = sum (-1)^j C(r,j) B_{d-r}(x-j).
double uniform_bspline_deriv(int degree, double x, int r) {
    if (r == 0) return uniform_bspline(degree, x);
    static constexpr int binom[5][5] = {
        {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    double acc = 0.0;
    for (int j = 0; j <= r; ++j) {
        const double term = binom[r][j] * uniform_bspline(degree - r, x - j);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

// Pentadiagonal Toeplitz LU (no pivoting; the collocation stencil is diagonally dominant).
class PentaLU {
public:
    void factor(std::size_t n, double w0, double w1, double w2) {
        n_ = n;
        alpha_.assign(n, 0.0);
        gamma_.assign(n, 0.0);
        delta_.assign(n, 0.0);
        mu_.assign(n, 0.0);
        eps_.assign(n, 0.0);
        alpha_[0] = w0;
        gamma_[0] = w1 / alpha_[0];
        delta_[0] = w2 / alpha_[0];
        mu_[1] = w1;
        alpha_[1] = w0 - mu_[1] * gamma_[0];
        gamma_[1] = (w1 - mu_[1] * delta_[0]) / alpha_[1];
        delta_[1] = w2 / alpha_[1];
        for (std::size_t i = 2; i < n; ++i) {
            eps_[i] = w2;
            mu_[i] = w1 - eps_[i] * gamma_[i - 2];
            alpha_[i] = w0 - eps_[i] * delta_[i - 2] - mu_[i] * gamma_[i - 1];
            if (i + 1 < n) gamma_[i] = (w1 - mu_[i] * delta_[i - 1]) / alpha_[i];
            if (i + 2 < n) delta_[i] = w2 / alpha_[i];
        }
    }

    void solve(std::vector<double>& b) const {
        b[1] -= mu_[1] / alpha_[0] * b[0];
        for (std::size_t i = 2; i < n_; ++i)
            b[i] -= eps_[i] / alpha_[i - 2] * b[i - 2] + mu_[i] / alpha_[i - 1] * b[i - 1];
        for (std::size_t i = 0; i < n_; ++i) b[i] /= alpha_[i];
        b[n_ - 2] -= gamma_[n_ - 2] * b[n_ - 1];
        for (std::size_t k = n_ - 2; k-- > 0;) b[k] -= gamma_[k] * b[k + 1] + delta_[k] * b[k + 2];
    }

private:
    std::size_t n_ = 0;
    std::vector<double> alpha_, gamma_, delta_, mu_, eps_;
};

// Solves the cyclic pentadiagonal collocation system via a rank-4 Woodbury update
// of the open-band system: the wraparound entries live in four corner rows.
std::vector<double> solve_cyclic_collocation(std::vector<double> rhs, double w0, double w1,
                                             double w2) {
    const std::size_t n = rhs.size();
    PentaLU lu;
    lu.factor(n, w0, w1, w2);

    const std::size_t rows[4] = {0, 1, n - 2, n - 1};
    std::array<std::vector<double>, 4> w;
    for (int k = 0; k < 4; ++k) {
        w[k].assign(n, 0.0);
        w[k][rows[k]] = 1.0;
        lu.solve(w[k]);
    }

    auto vt = [&](const std::vector<double>& x) {
        return std::array<double, 4>{w2 * x[n - 2] + w1 * x[n - 1], w2 * x[n - 1], w2 * x[0],
                                     w1 * x[0] + w2 * x[1]};
    };

    // M = I + V^T W
    double m[4][4];
    for (int j = 0; j < 4; ++j) {
        const auto col = vt(w[j]);
        for (int i = 0; i < 4; ++i) m[i][j] = (i == j ? 1.0 : 0.0) + col[i];
    }

    lu.solve(rhs);
    auto r = vt(rhs);

    // 4x4 Gaussian elimination with partial pivoting
    int perm[4] = {0, 1, 2, 3};
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int i = c + 1; i < 4; ++i)
            if (std::fabs(m[perm[i]][c]) > std::fabs(m[perm[p]][c])) p = i;
        std::swap(perm[c], perm[p]);
        for (int i = c + 1; i < 4; ++i) {
            const double f = m[perm[i]][c] / m[perm[c]][c];
            for (int j = c; j < 4; ++j) m[perm[i]][j] -= f * m[perm[c]][j];
            r[perm[i]] -= f * r[perm[c]];
        }
    }
    double y[4];
    for (int c = 3; c >= 0; --c) {
        double acc = r[perm[c]];
        for (int j = c + 1; j < 4; ++j) acc -= m[perm[c]][j] * y[j];
        y[c] = acc / m[perm[c]][c];
    }

    for (std::size_t i = 0; i < n; ++i)
        rhs[i] -= w[0][i] * y[0] + w[1][i] * y[1] + w[2][i] * y[2] + w[3][i] * y[3];
    return rhs;
}

constexpr int kDegree = 5;
constexpr double kW0 = 66.0 / 120.0;
constexpr double kW1 = 26.0 / 120.0;
constexpr double kW2 = 1.0 / 120.0;

constexpr std::array<double, 6> kGaussNodes = {
    -0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
    0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kGaussWeights = {
    0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
    0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

}  // namespace

PeriodicSpline::PeriodicSpline(std::vector<double> values, double period)
    : n_(values.size()), period_(period) {
    if (n_ < 8) throw std::invalid_argument("PeriodicSpline: need at least 8 samples");
    if (!(period > 0.0)) throw std::invalid_argument("PeriodicSpline: period must be positive");
    h_ = period_ / static_cast<double>(n_);
    coef_ = solve_cyclic_collocation(std::move(values), kW0, kW1, kW2);

    prefix_.assign(n_ + 1, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double a = static_cast<double>(i) * h_;
        double acc = 0.0;
        for (int g = 0; g < 6; ++g) {
            const double t = a + 0.5 * h_ * (kGaussNodes[g] + 1.0);
            acc += kGaussWeights[g] * eval(t, 0);
        }
        prefix_[i + 1] = prefix_[i] + 0.5 * h_ * acc;
    }
}

double PeriodicSpline::eval(double t, int order) const {
    assert(order >= 0 && order <= 4);
    double u = t / h_;
    const double nd = static_cast<double>(n_);
    u -= nd * std::floor(u / nd);
    if (u >= nd) u -= nd;  // guards u == n after roundoff
    const long base = static_cast<long>(std::floor(u));
    double acc = 0.0;
    for (long m = base - 2; m <= base + 3; ++m) {
        long idx = m % static_cast<long>(n_);
        if (idx < 0) idx += static_cast<long>(n_);
        const double x = u - static_cast<double>(m) + 3.0;
        acc += coef_[static_cast<std::size_t>(idx)] * uniform_bspline_deriv(kDegree, x, order);
    }
    return acc / std::pow(h_, order);
}

double PeriodicSpline::integral(double t) const {
    const double wraps = std::floor(t / period_);
    double tt = t - wraps * period_;
    if (tt >= period_) tt = 0.0;
    const auto j = static_cast<std::size_t>(std::min(tt / h_, static_cast<double>(n_ - 1)));
    const double a = static_cast<double>(j) * h_;
    double acc = 0.0;
    const double len = tt - a;
    if (len > 0.0) {
        for (int g = 0; g < 6; ++g) {
            const double x = a + 0.5 * len * (kGaussNodes[g] + 1.0);
            acc += kGaussWeights[g] * eval(x, 0);
        }
        acc *= 0.5 * len;
    }
    return wraps * prefix_.back() + prefix_[j] + acc;
}

}  // namespace forge
