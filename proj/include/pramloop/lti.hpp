#pragma once

#include <array>
#include <complex>
#include <vector>

namespace pramloop::lti {

/// Transfer-function coefficients in ascending powers of s.
struct ContinuousTf {
    std::vector<double> num;
    std::vector<double> den;
};

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);

/// {1, tau}, i.e. (tau*s + 1).
std::vector<double> lag_poly(double tau);

/// H(j*omega) for coefficients in ascending powers of s.
std::complex<double> continuous_response(const ContinuousTf& tf, double omega);

/// Discrete IIR filter in z^-1 (direct form II transposed). Coefficients are
/// normalized so a[0] = 1 on construction.
class DiscreteFilter {
public:
    DiscreteFilter() = default;
    DiscreteFilter(std::vector<double> b, std::vector<double> a);

    double step(double x);
    void reset();
    bool finite() const;

    double dc_gain() const;
    /// H(e^{j*omega*h}) for sampling period h.
    std::complex<double> response(double omega, double h) const;

    const std::vector<double>& b() const { return b_; }
    const std::vector<double>& a() const { return a_; }

private:
    std::vector<double> b_;
    std::vector<double> a_;
    std::vector<double> w_;
};

/// Tustin discretization at sampling period h. Requires a proper tf
/// (num order <= den order). Throws if the transform degenerates (pole at
/// the Nyquist point).
DiscreteFilter bilinear(const ContinuousTf& tf, double h);

/// Exact zero-order-hold discretization of the third-order cascade
///   K / ((tau1*s + 1)^2 (tau2*s + 1))
/// realized as three chained first-order lags. step() advances one sampling
/// period with the input held constant and returns the output at the new
/// sample instant.
class ZohCascade {
public:
    ZohCascade() = default;
    ZohCascade(double gain, double tau1, double tau2, double h);

    double step(double u);
    double output() const { return gain_ * x_[2]; }
    void reset() { x_ = {0.0, 0.0, 0.0}; }
    bool finite() const;

    /// Rebuilds the discretization for new time constants, keeping state.
    void retime(double tau1, double tau2, double h);

    double gain() const { return gain_; }

private:
    double gain_ = 1.0;
    std::array<double, 9> ad_{};
    std::array<double, 3> bd_{};
    std::array<double, 3> x_{};
};

/// Dense matrix exponential (scaling and squaring), n <= 6. a is row-major.
std::vector<double> matexp(const std::vector<double>& a, int n);

} // namespace pramloop::lti
