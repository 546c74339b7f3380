#pragma once

#include <array>

namespace pramloop::pkpd {

/// Gastric emptying / intestinal absorption constants; b and c are dose
/// fractions, f the bioavailable fraction. The defaults are the synthetic
/// set shipped with the simulator (see the pramlintide defaults above).
struct MealModelParams {
    double k_g21 = 0.030; // grinding rate, 1/min
    double k_abs = 0.030; // intestinal absorption rate, 1/min
    double k_min = 0.008; // minimum gastric emptying rate, 1/min
    double k_max = 0.056; // maximum gastric emptying rate, 1/min
    double b = 0.82;      // dose fraction where emptying has fallen halfway
    double c = 0.010;     // dose fraction where emptying has recovered halfway
    double f = 0.90;      // fraction of absorbed glucose appearing in plasma
    double bw = 70.0;     // body weight, kg

    void validate() const;
};

/// Glucose masses, all mg. d_active is the carbohydrate mass governing the
/// emptying-curve shape; it must be positive whenever the stomach is loaded.
struct MealState {
    double q_sto1 = 0.0;   // solid stomach phase
    double q_sto2 = 0.0;   // liquid stomach phase
    double q_gut = 0.0;    // intestine
    double d_active = 0.0; // carbohydrate mass of the governing meal

    std::array<double, 3> to_array() const { return {q_sto1, q_sto2, q_gut}; }
};

/// State-dependent gastric emptying rate (1/min):
///   kmin + (kmax-kmin)/2 * { tanh(alpha*(Qsto - b*D)) - tanh(beta*(Qsto - c*D)) + 2 }
/// with alpha = 5/(2*D*(1-b)) and beta = 5/(2*D*c).
double kempt_rate(double q_sto, double d_mg, const MealModelParams& params);

/// Right-hand sides of the stomach/gut compartments. u_g is the meal input
/// rate (mg/min) into the solid phase; eta in (0,1] attenuates gastric
/// emptying (1 = no pramlintide effect).
std::array<double, 3> meal_derivatives(const MealState& state, double u_g_mg_per_min,
                                       double eta, const MealModelParams& params);

/// Meal glucose rate of appearance in plasma: f * k_abs * Qgut / BW, mg/kg/min.
double ra_of_appearance(const MealState& state, const MealModelParams& params);

/// Carbohydrate mass governing the emptying curve after a new meal of
/// new_meal_mg arrives: remaining stomach mass plus the new meal.
double updated_d_active(const MealState& state, double new_meal_mg);

} // namespace pramloop::pkpd
