#pragma once

#include <deque>

#include "pramloop/lti.hpp"

namespace pramloop::control {

/// Controller gain, estimator filter, and the nominal third-order models of
/// the meal and insulin glycemic effects.
struct ControllerParams {
    double gamma = 0.1;   // U per estimated gram
    double theta = 15.0;  // estimator filter time constant, min
    double k_d = 1.0;     // meal channel nominal gain, mg/dL per g/step
    double tau1_d = 20.0; // min
    double tau2_d = 40.0; // min
    double k_u = 1000.0;  // insulin channel nominal gain, mg/dL per U/step
    double tau1_u = 40.0; // min
    double tau2_u = 70.0; // min
    double delay = 15.0;  // min, integer multiple of h, at least one step
    double nu = 0.8;      // prandial bolus safety factor
    double h = 5.0;       // sampling period, min
    bool allow_suspension = true; // clamp u_I at -u_b (true) or at 0

    void validate() const;
    int delay_steps() const;
};

struct InsulinCommand {
    double u_infusion = 0.0; // incremental infusion, U/step, post-saturation
    double u_bolus = 0.0;    // prandial bolus, U
    double u_total = 0.0;    // u_b + u_infusion + u_bolus, always >= 0
    bool saturated = false;  // the raw command hit the lower clamp
    bool fault = false;
};

/// nu * CHO / CIR.
double prandial_bolus(double cho_hat_g, double cir, double nu);

/// Discrete disturbance observer: d_hat = F*Gd^-1 [ y + Gu * u_delayed ],
/// u_I = gamma * d_hat, with the applied (saturated) insulin feeding the
/// observer's delay line. The non-causal factor from inverting the delayed
/// meal channel is dropped (rational-part inversion).
///
/// Non-interacting handling of announcements: the prandial bolus joins the
/// applied-insulin delay line (so its glycemic effect is cancelled out of
/// the estimate), and the announced carbohydrates are discounted from d_hat
/// through the same filter F, so the estimator re-doses only the residual
/// (misestimation, snacks, model mismatch) rather than the whole meal.
class DobController {
public:
    DobController(const ControllerParams& params, double u_b, double g_b);

    InsulinCommand step(double cgm, double announced_bolus_u, double announced_cho_g = 0.0);

    double last_dhat() const { return dhat_; }

    /// The two discrete filters, exposed for frequency-domain checks.
    const lti::DiscreteFilter& filter_fgdinv() const { return fgdinv_; }
    const lti::DiscreteFilter& filter_gu() const { return gu_; }

private:
    ControllerParams params_;
    double u_b_;
    double g_b_;
    lti::DiscreteFilter fgdinv_;
    lti::DiscreteFilter gu_;
    lti::DiscreteFilter announce_f_;
    std::deque<double> applied_line_;
    std::deque<double> announce_line_;
    double dhat_ = 0.0;
};

/// Builds the two observer filters by bilinear transform; separated from the
/// controller for direct inspection in tests.
struct ObserverFilters {
    lti::DiscreteFilter fgdinv; // F * Gd_tilde^-1
    lti::DiscreteFilter gu;     // Gu_tilde
};
ObserverFilters build_discrete_observer(const ControllerParams& params);

} // namespace pramloop::control
