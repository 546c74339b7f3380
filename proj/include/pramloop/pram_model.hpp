#pragma once

#include <array>

namespace pramloop::pkpd {

/// Kinetic constants of the subcutaneous pramlintide model plus the Hill
/// coefficients of the gastric-emptying attenuation.
///
/// The defaults below are a synthetic set chosen so that a 30 ug mealtime
/// bolus visibly delays the meal rate of appearance; identified values
/// belong in configuration.
struct PramlintideParams {
    double a_s = 0.70;          // subcutaneous bioavailability, (0,1]
    double k_q1 = 0.12;         // first SC compartment -> plasma, 1/min
    double k_q12 = 0.020;       // first -> second SC compartment, 1/min
    double k_q2 = 0.030;        // second SC compartment -> plasma, 1/min
    double k_e = 0.020;         // plasma elimination, 1/min
    double k_a = 0.12;          // effect-compartment rate, 1/min
    double v_p = 7.0;           // plasma distribution volume, L
    double hill_n = 9.0;        // Hill numerator coefficient
    double hill_d = 2500.0;     // Hill half-effect mass, pmol
    double hill_e = 2.0;        // Hill exponent
    double molar_mass = 3949.4; // g/mol, for ug -> pmol conversion

    void validate() const;
};

/// Compartment masses, all pmol.
struct PramlintideState {
    double q1 = 0.0;   // first subcutaneous compartment
    double q2 = 0.0;   // second subcutaneous compartment
    double p1 = 0.0;   // plasma compartment
    double peff = 0.0; // effect compartment

    std::array<double, 4> to_array() const { return {q1, q2, p1, peff}; }
    static PramlintideState from_array(const std::array<double, 4>& a) {
        return {a[0], a[1], a[2], a[3]};
    }
};

/// Converts a pramlintide dose from ug to pmol: dose_ug * 1e6 / molar_mass.
double convert_pram_dose(double dose_ug, const PramlintideParams& params);

/// Hill modulation h(Peff) = n * Peff^e / (d^e + Peff^e), in [0, n).
double hill_h(double peff, const PramlintideParams& params);

/// Gastric-emptying attenuation eta = 1 / (1 + h(Peff)), in (1/(1+n), 1].
double eta_factor(double peff, const PramlintideParams& params);

/// Right-hand sides of the four pramlintide compartments for a continuous
/// subcutaneous infusion p_infusion (pmol/min). Boluses are not part of the
/// derivative: the engine injects them as instantaneous additions of
/// a_s * dose to Q1.
std::array<double, 4> pram_derivatives(const PramlintideState& state,
                                       double p_infusion_pmol_per_min,
                                       const PramlintideParams& params);

/// Plasma concentration P = P1 / V_P, pmol/L.
double plasma_concentration(const PramlintideState& state, const PramlintideParams& params);

} // namespace pramloop::pkpd
