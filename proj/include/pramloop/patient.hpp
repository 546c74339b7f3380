#pragma once

#include <deque>
#include <string>

#include "pramloop/lti.hpp"
#include "pramloop/meal_model.hpp"
#include "pramloop/pram_model.hpp"
#include "pramloop/rng.hpp"

namespace pramloop::patient {

/// One synthetic subject: basal operating point, the two glucose-response
/// channels (insulin and meal rate of appearance), and the embedded
/// meal/pramlintide kinetics.
struct PatientParams {
    std::string patient_id;
    double g_b = 120.0;        // basal glucose, mg/dL
    double u_b = 0.09;         // basal insulin, U per sampling step
    double cir = 10.0;         // carbohydrate-to-insulin ratio, g/U
    double bw = 70.0;          // body weight, kg

    double k_u = 1000.0;       // insulin channel DC gain, mg/dL per U/step
    double tau1_u = 40.0;      // min
    double tau2_u = 70.0;      // min

    double k_ra = 0.0;         // Ra channel DC gain, mg/dL per mg/kg/min; 0 = calibrate
    double tau1_ra = 12.0;     // min
    double tau2_ra = 24.0;     // min

    double input_delay = 15.0; // min, multiple of the sampling period
    double gamma_override = 0.0; // controller gain override, 0 = use 1/CIR

    pkpd::MealModelParams meal;
    pkpd::PramlintideParams pram;

    void validate(double h) const;
};

/// Uniform-bound widths for the per-meal and per-run variability draws.
/// Setting a width to zero disables that source.
struct VariabilityConfig {
    double kabs_pct = 0.30;
    double f_pct = 0.10;
    double insulin_pk_pct = 0.30;
    double circadian_amp_max = 0.30;
};

struct VariabilitySample {
    double kabs_mult = 1.0;
    double f_mult = 1.0;
    double tau1u_mult = 1.0;
    double tau2u_mult = 1.0;
    double circadian_amp = 0.0;
    double circadian_phase = 0.0; // radians
};

/// Draws one variability sample; deterministic given the stream.
VariabilitySample sample_variability(Rng& rng, const VariabilityConfig& cfg);

/// 1 + A*sin(2*pi*t/1440 + phase); period exactly one day.
double circadian_factor(double t_min, double amplitude, double phase);

struct CgmSample {
    double t = 0.0;
    double value = 0.0;
};

/// CGM with AR(1) noise of stationary SD noise_sd, clamped to [40, 400].
class CgmSensor {
public:
    CgmSensor(Rng rng, double noise_sd, double ar1_coeff = 0.7);
    double sample(double g_true);

private:
    Rng rng_;
    double noise_sd_;
    double rho_;
    double state_ = 0.0;
    bool first_ = true;
};

/// Discrete glucose plant: G = G_b + (Ra channel) - circadian * (insulin
/// channel), each channel a delayed third-order lag discretized exactly
/// under zero-order hold. The insulin channel sees the deviation from
/// basal; at rest G stays at G_b identically.
class GlucosePlant {
public:
    GlucosePlant(const PatientParams& params, double h);

    /// Advances one sampling period. u_total is the total insulin delivered
    /// this step (U), ra the meal rate of appearance held over the step.
    double step(double u_total, double ra, double circadian);

    double glucose() const { return g_; }

    /// Applies per-meal insulin-PK variability: rebuilds the insulin channel
    /// with scaled time constants, preserving channel state.
    void set_insulin_taus(double tau1, double tau2);

    int delay_steps() const { return delay_steps_; }

private:
    double g_b_;
    double u_b_;
    double h_;
    int delay_steps_;
    lti::ZohCascade insulin_;
    lti::ZohCascade ra_;
    std::deque<double> u_line_;
    std::deque<double> ra_line_;
    double g_;
};

/// DC gain for the Ra channel such that a reference meal (default 50 g,
/// no insulin response, no pramlintide) peaks target_excursion above basal.
double calibrate_ra_gain(const PatientParams& params, double h, int substeps,
                         double target_excursion = 120.0, double ref_meal_g = 50.0);

} // namespace pramloop::patient
