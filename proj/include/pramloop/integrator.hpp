#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace pramloop {

/// Classical fixed-step 4th-order Runge-Kutta over a std::array state.
///
/// The derivative functor is called as deriv(state) -> state. The step of
/// length h is split into `substeps` equal internal steps. Deterministic:
/// the same inputs always produce the same output bits.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(std::array<double, N> state, Deriv&& deriv,
                               double h, int substeps) {
    if (h <= 0.0) {
        throw std::invalid_argument("rk4_step: h must be > 0");
    }
    if (substeps < 1) {
        throw std::invalid_argument("rk4_step: substeps must be >= 1");
    }
    const double dt = h / static_cast<double>(substeps);
    for (int s = 0; s < substeps; ++s) {
        const auto k1 = deriv(state);
        std::array<double, N> tmp;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = state[i] + 0.5 * dt * k1[i];
        const auto k2 = deriv(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = state[i] + 0.5 * dt * k2[i];
        const auto k3 = deriv(tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = state[i] + dt * k3[i];
        const auto k4 = deriv(tmp);
        for (std::size_t i = 0; i < N; ++i) {
            state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    for (double v : state) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("rk4_step: non-finite state after step");
        }
    }
    return state;
}

} // namespace pramloop
