#include "pramloop/meal_model.hpp"

#include <cmath>
#include <stdexcept>

namespace pramloop::pkpd {

void MealModelParams::validate() const {
    if (k_g21 <= 0.0 || k_abs <= 0.0) {
        throw std::invalid_argument("meal params: k_g21 and k_abs must be > 0");
    }
    if (k_min <= 0.0 || k_max < k_min) {
        throw std::invalid_argument("meal params: need 0 < k_min <= k_max");
    }
    if (b <= 0.0 || b >= 1.0 || c <= 0.0 || c >= 1.0) {
        throw std::invalid_argument("meal params: b and c must be in (0,1)");
    }
    if (f <= 0.0 || f > 1.0) {
        throw std::invalid_argument("meal params: f must be in (0,1]");
    }
    if (bw <= 0.0) {
        throw std::invalid_argument("meal params: body weight must be > 0");
    }
}

double kempt_rate(double q_sto, double d_mg, const MealModelParams& params) {
    if (d_mg <= 0.0) {
        throw std::invalid_argument("kempt_rate: D must be > 0");
    }
    if (q_sto < 0.0) {
        throw std::invalid_argument("kempt_rate: Qsto must be >= 0");
    }
    const double alpha = 5.0 / (2.0 * d_mg * (1.0 - params.b));
    const double beta = 5.0 / (2.0 * d_mg * params.c);
    const double band = std::tanh(alpha * (q_sto - params.b * d_mg)) -
                        std::tanh(beta * (q_sto - params.c * d_mg)) + 2.0;
    return params.k_min + 0.5 * (params.k_max - params.k_min) * band;
}

std::array<double, 3> meal_derivatives(const MealState& state, double u_g_mg_per_min,
                                       double eta, const MealModelParams& params) {
    if (eta <= 0.0 || eta > 1.0) {
        throw std::invalid_argument("meal_derivatives: eta must be in (0,1]");
    }
    const double q_sto = state.q_sto1 + state.q_sto2;
    // An empty stomach has no governing meal; emptying flux is zero anyway.
    const double empt = (state.d_active > 0.0 && q_sto > 0.0)
                            ? eta * kempt_rate(q_sto, state.d_active, params) * state.q_sto2
                            : 0.0;
    const double d_sto1 = u_g_mg_per_min - params.k_g21 * state.q_sto1;
    const double d_sto2 = params.k_g21 * state.q_sto1 - empt;
    const double d_gut = empt - params.k_abs * state.q_gut;
    return {d_sto1, d_sto2, d_gut};
}

double ra_of_appearance(const MealState& state, const MealModelParams& params) {
    return params.f * params.k_abs * state.q_gut / params.bw;
}

double updated_d_active(const MealState& state, double new_meal_mg) {
    if (new_meal_mg <= 0.0) {
        throw std::invalid_argument("updated_d_active: meal mass must be > 0");
    }
    return state.q_sto1 + state.q_sto2 + new_meal_mg;
}

} // namespace pramloop::pkpd
