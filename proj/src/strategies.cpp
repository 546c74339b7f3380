#include "pramloop/strategies.hpp"

#include <stdexcept>

namespace pramloop::strategy {

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::S1: return "S1";
        case Mode::S2: return "S2";
        case Mode::S3: return "S3";
        case Mode::S4: return "S4";
        case Mode::InsMA: return "INS_MA";
        case Mode::InsSMA: return "INS_SMA";
        case Mode::InsNMA: return "INS_NMA";
    }
    throw std::logic_error("mode_name: unknown mode");
}

Mode mode_from_name(const std::string& name) {
    if (name == "S1") return Mode::S1;
    if (name == "S2") return Mode::S2;
    if (name == "S3") return Mode::S3;
    if (name == "S4") return Mode::S4;
    if (name == "INS_MA") return Mode::InsMA;
    if (name == "INS_SMA") return Mode::InsSMA;
    if (name == "INS_NMA") return Mode::InsNMA;
    throw std::invalid_argument("unknown strategy mode '" + name +
                                "' (expected S1|S2|S3|S4|INS_MA|INS_SMA|INS_NMA)");
}

bool mode_announces(Mode mode) {
    return mode == Mode::S3 || mode == Mode::S4 || mode == Mode::InsMA || mode == Mode::InsSMA;
}

bool mode_simplified(Mode mode) {
    return mode == Mode::S4 || mode == Mode::InsSMA;
}

void StrategyConfig::validate() const {
    if (lambda_ug < 0.0 || rho_ug_per_u < 0.0 || phi_ug < 0.0 || delta_ug_per_u < 0.0) {
        throw std::invalid_argument("strategy: doses and ratios must be >= 0");
    }
    if (sma_assumed_cho < 0.0) {
        throw std::invalid_argument("strategy: assumed CHO must be >= 0 g");
    }
    if (mode == Mode::S1) {
        if (!z1 || !z2 || !z3) {
            throw std::invalid_argument(
                "strategy: S1 requires z1 (basal multiple), z2 (mg/dL per min) and z3 (steps)");
        }
        if (*z1 < 1.0) throw std::invalid_argument("strategy: z1 must be >= 1");
        if (*z3 < 1) throw std::invalid_argument("strategy: z3 must be >= 1");
    }
}

Slopes slopes(double u_k, double u_km1, double g_k, double g_km1, double dt_min) {
    if (dt_min <= 0.0) throw std::invalid_argument("slopes: dt must be > 0");
    return {(u_k - u_km1) / dt_min, (g_k - g_km1) / dt_min};
}

PramCommand strategy1_step(DosingState& state, double u_k, double u_b, double m_u_k,
                           double m_u_km1, double m_g_k, const StrategyConfig& cfg) {
    if (cfg.mode != Mode::S1) throw std::logic_error("strategy1_step: wrong mode");
    cfg.validate();
    const bool b1 = (m_u_km1 > 0.0) && (m_u_k < 0.0);
    const bool b2 = (u_k > *cfg.z1 * u_b) && (m_g_k > *cfg.z2) &&
                    (state.steps_since_bolus > static_cast<long>(*cfg.z3));
    PramCommand cmd;
    if (b1 && b2) {
        cmd.p_bolus_ug = cfg.lambda_ug;
        state.steps_since_bolus = 0;
    } else {
        ++state.steps_since_bolus;
    }
    return cmd;
}

PramCommand strategy2_step(double u_k, const StrategyConfig& cfg) {
    if (cfg.mode != Mode::S2) throw std::logic_error("strategy2_step: wrong mode");
    if (u_k < 0.0) throw std::invalid_argument("strategy2_step: u must be >= 0");
    PramCommand cmd;
    cmd.p_infusion_ug = cfg.rho_ug_per_u * u_k;
    return cmd;
}

PramCommand strategy3_step(double cho_hat_g, const StrategyConfig& cfg) {
    if (cfg.mode != Mode::S3) throw std::logic_error("strategy3_step: wrong mode");
    PramCommand cmd;
    if (cho_hat_g > 0.0) {
        cmd.p_bolus_ug = cfg.phi_ug;
    }
    return cmd;
}

PramCommand strategy4_step(double u_infusion, double u_b, double u_bolus,
                           const StrategyConfig& cfg) {
    if (cfg.mode != Mode::S4) throw std::logic_error("strategy4_step: wrong mode");
    PramCommand cmd;
    cmd.p_infusion_ug = cfg.delta_ug_per_u * (u_infusion + u_b);
    cmd.p_bolus_ug = cfg.delta_ug_per_u * u_bolus;
    if (cmd.p_infusion_ug < 0.0) cmd.p_infusion_ug = 0.0;
    if (cmd.p_bolus_ug < 0.0) cmd.p_bolus_ug = 0.0;
    return cmd;
}

double announcement_policy(Mode mode, bool is_snack, double misestimated_g,
                           const StrategyConfig& cfg) {
    if (mode_simplified(mode)) {
        return is_snack ? 0.0 : cfg.sma_assumed_cho;
    }
    if (mode_announces(mode)) {
        return misestimated_g;
    }
    return 0.0;
}

} // namespace pramloop::strategy
