#include "pramloop/lti.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace pramloop::lti {

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

std::vector<double> lag_poly(double tau) {
    return {1.0, tau};
}

std::complex<double> continuous_response(const ContinuousTf& tf, double omega) {
    const std::complex<double> s(0.0, omega);
    std::complex<double> num = 0.0;
    std::complex<double> den = 0.0;
    std::complex<double> p = 1.0;
    for (std::size_t i = 0; i < std::max(tf.num.size(), tf.den.size()); ++i) {
        if (i < tf.num.size()) num += tf.num[i] * p;
        if (i < tf.den.size()) den += tf.den[i] * p;
        p *= s;
    }
    return num / den;
}

DiscreteFilter::DiscreteFilter(std::vector<double> b, std::vector<double> a)
    : b_(std::move(b)), a_(std::move(a)) {
    if (a_.empty() || a_[0] == 0.0) {
        throw std::invalid_argument("DiscreteFilter: a[0] must be nonzero");
    }
    const double a0 = a_[0];
    for (double& v : b_) v /= a0;
    for (double& v : a_) v /= a0;
    w_.assign(std::max(b_.size(), a_.size()) - 1, 0.0);
}

double DiscreteFilter::step(double x) {
    const double y = (b_.empty() ? 0.0 : b_[0] * x) + (w_.empty() ? 0.0 : w_[0]);
    for (std::size_t i = 0; i + 1 < w_.size(); ++i) {
        const double bterm = (i + 1 < b_.size()) ? b_[i + 1] * x : 0.0;
        const double aterm = (i + 1 < a_.size()) ? a_[i + 1] * y : 0.0;
        w_[i] = w_[i + 1] + bterm - aterm;
    }
    if (!w_.empty()) {
        const std::size_t i = w_.size() - 1;
        const double bterm = (i + 1 < b_.size()) ? b_[i + 1] * x : 0.0;
        const double aterm = (i + 1 < a_.size()) ? a_[i + 1] * y : 0.0;
        w_[i] = bterm - aterm;
    }
    return y;
}

void DiscreteFilter::reset() {
    std::fill(w_.begin(), w_.end(), 0.0);
}

bool DiscreteFilter::finite() const {
    for (double v : w_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double DiscreteFilter::dc_gain() const {
    double sb = 0.0;
    double sa = 0.0;
    for (double v : b_) sb += v;
    for (double v : a_) sa += v;
    return sb / sa;
}

std::complex<double> DiscreteFilter::response(double omega, double h) const {
    const std::complex<double> zinv = std::exp(std::complex<double>(0.0, -omega * h));
    std::complex<double> num = 0.0;
    std::complex<double> den = 0.0;
    std::complex<double> p = 1.0;
    for (std::size_t i = 0; i < std::max(b_.size(), a_.size()); ++i) {
        if (i < b_.size()) num += b_[i] * p;
        if (i < a_.size()) den += a_[i] * p;
        p *= zinv;
    }
    return num / den;
}

namespace {

// Coefficients of (z-1)^i (z+1)^(n-i) in ascending powers of z.
std::vector<double> mix_poly(int i, int n) {
    std::vector<double> out{1.0};
    for (int k = 0; k < i; ++k) out = poly_mul(out, {-1.0, 1.0});
    for (int k = 0; k < n - i; ++k) out = poly_mul(out, {1.0, 1.0});
    return out;
}

} // namespace

DiscreteFilter bilinear(const ContinuousTf& tf, double h) {
    if (h <= 0.0) {
        throw std::invalid_argument("bilinear: sampling period must be > 0");
    }
    if (tf.den.empty() || tf.num.empty()) {
        throw std::invalid_argument("bilinear: empty transfer function");
    }
    if (tf.num.size() > tf.den.size()) {
        throw std::invalid_argument("bilinear: transfer function must be proper");
    }
    const int n = static_cast<int>(tf.den.size()) - 1;
    const double k = 2.0 / h;

    std::vector<double> num_z(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> den_z(static_cast<std::size_t>(n) + 1, 0.0);
    double kpow = 1.0;
    for (int i = 0; i <= n; ++i) {
        const auto basis = mix_poly(i, n);
        const double cn = (i < static_cast<int>(tf.num.size())) ? tf.num[i] * kpow : 0.0;
        const double cd = (i < static_cast<int>(tf.den.size())) ? tf.den[i] * kpow : 0.0;
        for (int j = 0; j <= n; ++j) {
            num_z[static_cast<std::size_t>(j)] += cn * basis[static_cast<std::size_t>(j)];
            den_z[static_cast<std::size_t>(j)] += cd * basis[static_cast<std::size_t>(j)];
        }
        kpow *= k;
    }

    // Leading z^n coefficient becomes a[0] after dividing through by z^n.
    double scale = 0.0;
    for (double v : den_z) scale = std::max(scale, std::abs(v));
    if (std::abs(den_z[static_cast<std::size_t>(n)]) < 1e-12 * scale) {
        throw std::invalid_argument("bilinear: pole at the Nyquist point");
    }

    std::vector<double> b(static_cast<std::size_t>(n) + 1);
    std::vector<double> a(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        b[static_cast<std::size_t>(m)] = num_z[static_cast<std::size_t>(n - m)];
        a[static_cast<std::size_t>(m)] = den_z[static_cast<std::size_t>(n - m)];
    }
    return DiscreteFilter(std::move(b), std::move(a));
}

std::vector<double> matexp(const std::vector<double>& a, int n) {
    if (n <= 0 || a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw std::invalid_argument("matexp: bad dimensions");
    }
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(a[static_cast<std::size_t>(i * n + j)]);
        norm = std::max(norm, row);
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    const auto mul = [n](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                const double xv = x[static_cast<std::size_t>(i * n + k)];
                if (xv == 0.0) continue;
                for (int j = 0; j < n; ++j) {
                    out[static_cast<std::size_t>(i * n + j)] += xv * y[static_cast<std::size_t>(k * n + j)];
                }
            }
        }
        return out;
    };

    std::vector<double> scaled(a);
    for (double& v : scaled) v *= scale;

    std::vector<double> result(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> term(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        result[static_cast<std::size_t>(i * n + i)] = 1.0;
        term[static_cast<std::size_t>(i * n + i)] = 1.0;
    }
    for (int k = 1; k <= 18; ++k) {
        term = mul(term, scaled);
        for (double& v : term) v /= static_cast<double>(k);
        for (std::size_t i = 0; i < result.size(); ++i) result[i] += term[i];
    }
    for (int s = 0; s < squarings; ++s) {
        result = mul(result, result);
    }
    return result;
}

ZohCascade::ZohCascade(double gain, double tau1, double tau2, double h) : gain_(gain) {
    retime(tau1, tau2, h);
}

void ZohCascade::retime(double tau1, double tau2, double h) {
    if (tau1 <= 0.0 || tau2 <= 0.0 || h <= 0.0) {
        throw std::invalid_argument("ZohCascade: time constants and h must be > 0");
    }
    // Augmented [A B; 0 0] exponential yields Ad and Bd in one shot.
    const double p = 1.0 / tau1;
    const double q = 1.0 / tau2;
    std::vector<double> m(16, 0.0);
    m[0] = -p * h;
    m[3] = p * h;
    m[4] = p * h;
    m[5] = -p * h;
    m[9] = q * h;
    m[10] = -q * h;
    const auto e = matexp(m, 4);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            ad_[static_cast<std::size_t>(i * 3 + j)] = e[static_cast<std::size_t>(i * 4 + j)];
        }
        bd_[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i * 4 + 3)];
    }
}

double ZohCascade::step(double u) {
    std::array<double, 3> next{};
    for (int i = 0; i < 3; ++i) {
        double acc = bd_[static_cast<std::size_t>(i)] * u;
        for (int j = 0; j < 3; ++j) {
            acc += ad_[static_cast<std::size_t>(i * 3 + j)] * x_[static_cast<std::size_t>(j)];
        }
        next[static_cast<std::size_t>(i)] = acc;
    }
    x_ = next;
    return output();
}

bool ZohCascade::finite() const {
    for (double v : x_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

} // namespace pramloop::lti
