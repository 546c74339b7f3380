#pragma once

#include <optional>
#include <string>

namespace pramloop::strategy {

/// Dosing modes: four insulin-plus-pramlintide strategies plus the three
/// insulin-alone announcement modes used as comparators.
enum class Mode {
    S1,      // fixed pramlintide bolus on insulin-peak detection, no announcements
    S2,      // pramlintide infusion proportional to delivered insulin, no announcements
    S3,      // fixed pramlintide bolus at meal announcement
    S4,      // pramlintide/insulin ratio on both channels, simplified announcements
    InsMA,   // insulin alone, full meal announcements
    InsSMA,  // insulin alone, simplified (25 g) announcements
    InsNMA,  // insulin alone, no announcements
};

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

/// True for modes whose insulin controller receives prandial boluses.
bool mode_announces(Mode mode);
/// True for modes using the simplified fixed-size announcement.
bool mode_simplified(Mode mode);

struct StrategyConfig {
    Mode mode = Mode::InsNMA;
    double lambda_ug = 0.0;        // S1 bolus
    double rho_ug_per_u = 0.0;     // S2 ratio
    double phi_ug = 0.0;           // S3 bolus
    double delta_ug_per_u = 0.0;   // S4 ratio
    std::optional<double> z1;      // S1: basal multiple threshold
    std::optional<double> z2;      // S1: glucose slope threshold, mg/dL per min
    std::optional<int> z3;         // S1: minimum iterations between boluses
    double sma_assumed_cho = 25.0; // g assumed for simplified announcements

    void validate() const;
};

/// Bolus/infusion bookkeeping for Strategy 1.
struct DosingState {
    double prev_u = 0.0;     // u(k-1), U
    double prev_g = 0.0;     // G(k-1), mg/dL
    double prev_m_u = 0.0;   // m_u(k-1), U/min
    long steps_since_bolus = 1000000; // large start: no prior bolus blocks nothing
};

struct PramCommand {
    double p_bolus_ug = 0.0;
    double p_infusion_ug = 0.0; // per sampling step
};

struct Slopes {
    double m_u = 0.0; // U/min
    double m_g = 0.0; // mg/dL per min
};

/// Backward differences over one sampling interval.
Slopes slopes(double u_k, double u_km1, double g_k, double g_km1, double dt_min);

/// Strategy 1: lambda-ug bolus when the insulin signal peaks (B1) and the
/// safety thresholds hold (B2). Updates steps_since_bolus in state.
PramCommand strategy1_step(DosingState& state, double u_k, double u_b, double m_u_k,
                           double m_u_km1, double m_g_k, const StrategyConfig& cfg);

/// Strategy 2: infusion proportional to the total delivered insulin.
PramCommand strategy2_step(double u_k, const StrategyConfig& cfg);

/// Strategy 3: fixed bolus whenever a meal is announced.
PramCommand strategy3_step(double cho_hat_g, const StrategyConfig& cfg);

/// Strategy 4: ratio on both channels (infusion follows u_I + u_b, bolus
/// follows the prandial insulin bolus).
PramCommand strategy4_step(double u_infusion, double u_b, double u_bolus,
                           const StrategyConfig& cfg);

/// Carbohydrate announcement given a meal: full (misestimated) grams for the
/// announcing modes, a fixed assumption for the simplified modes (main meals
/// only), zero otherwise. misestimated_g carries the scenario's estimation
/// error already applied.
double announcement_policy(Mode mode, bool is_snack, double misestimated_g,
                           const StrategyConfig& cfg);

} // namespace pramloop::strategy
