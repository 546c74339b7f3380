#include "pramloop/pram_model.hpp"

#include <cmath>
#include <stdexcept>

namespace pramloop::pkpd {

void PramlintideParams::validate() const {
    if (k_q1 <= 0.0 || k_q12 <= 0.0 || k_q2 <= 0.0 || k_e <= 0.0 || k_a <= 0.0) {
        throw std::invalid_argument("pramlintide params: rate constants must be > 0");
    }
    if (v_p <= 0.0) {
        throw std::invalid_argument("pramlintide params: V_P must be > 0");
    }
    if (a_s <= 0.0 || a_s > 1.0) {
        throw std::invalid_argument("pramlintide params: a_s must be in (0,1]");
    }
    if (hill_n <= 0.0 || hill_d <= 0.0 || hill_e <= 0.0) {
        throw std::invalid_argument("pramlintide params: Hill coefficients must be > 0");
    }
    if (molar_mass <= 0.0) {
        throw std::invalid_argument("pramlintide params: molar mass must be > 0");
    }
}

double convert_pram_dose(double dose_ug, const PramlintideParams& params) {
    if (dose_ug < 0.0) {
        throw std::invalid_argument("convert_pram_dose: dose must be >= 0");
    }
    return dose_ug * 1.0e6 / params.molar_mass;
}

double hill_h(double peff, const PramlintideParams& params) {
    if (peff < 0.0) {
        throw std::invalid_argument("hill_h: Peff must be >= 0");
    }
    if (peff == 0.0) {
        return 0.0;
    }
    const double pe = std::pow(peff, params.hill_e);
    const double de = std::pow(params.hill_d, params.hill_e);
    return params.hill_n * pe / (de + pe);
}

double eta_factor(double peff, const PramlintideParams& params) {
    return 1.0 / (1.0 + hill_h(peff, params));
}

std::array<double, 4> pram_derivatives(const PramlintideState& state,
                                       double p_infusion_pmol_per_min,
                                       const PramlintideParams& params) {
    if (p_infusion_pmol_per_min < 0.0) {
        throw std::invalid_argument("pram_derivatives: infusion must be >= 0");
    }
    const double dq1 = params.a_s * p_infusion_pmol_per_min - (params.k_q1 + params.k_q12) * state.q1;
    const double dq2 = params.k_q12 * state.q1 - params.k_q2 * state.q2;
    const double dp1 = (params.k_q1 * state.q1 + params.k_q2 * state.q2) - params.k_e * state.p1;
    const double dpeff = params.k_a * (state.p1 - state.peff);
    return {dq1, dq2, dp1, dpeff};
}

double plasma_concentration(const PramlintideState& state, const PramlintideParams& params) {
    return state.p1 / params.v_p;
}

} // namespace pramloop::pkpd
