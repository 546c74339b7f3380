#include "pramloop/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace pramloop::control {

void ControllerParams::validate() const {
    if (gamma <= 0.0) throw std::invalid_argument("controller: gamma must be > 0 U/g");
    if (theta <= 0.0) throw std::invalid_argument("controller: theta must be > 0 min");
    if (k_d <= 0.0 || k_u <= 0.0) throw std::invalid_argument("controller: nominal gains must be > 0");
    if (tau1_d <= 0.0 || tau2_d <= 0.0 || tau1_u <= 0.0 || tau2_u <= 0.0) {
        throw std::invalid_argument("controller: nominal time constants must be > 0");
    }
    if (nu <= 0.0 || nu > 1.0) throw std::invalid_argument("controller: nu must be in (0,1]");
    if (h <= 0.0) throw std::invalid_argument("controller: sampling period must be > 0");
    const double steps = delay / h;
    if (delay < h || std::abs(steps - std::round(steps)) > 1e-9) {
        throw std::invalid_argument("controller: delay must be a positive multiple of h");
    }
}

int ControllerParams::delay_steps() const {
    return static_cast<int>(std::llround(delay / h));
}

double prandial_bolus(double cho_hat_g, double cir, double nu) {
    if (cir <= 0.0) throw std::invalid_argument("prandial_bolus: CIR must be > 0");
    if (cho_hat_g < 0.0) throw std::invalid_argument("prandial_bolus: CHO must be >= 0");
    return nu * cho_hat_g / cir;
}

ObserverFilters build_discrete_observer(const ControllerParams& p) {
    p.validate();
    // F * Gd^-1 = (tau1d s+1)^2 (tau2d s+1) / (K_d (theta s+1)^3): biproper,
    // realizable exactly because F's order matches Gd's relative degree.
    lti::ContinuousTf fgdinv;
    fgdinv.num = lti::poly_mul(lti::poly_mul(lti::lag_poly(p.tau1_d), lti::lag_poly(p.tau1_d)),
                               lti::lag_poly(p.tau2_d));
    fgdinv.den = lti::poly_mul(lti::poly_mul(lti::lag_poly(p.theta), lti::lag_poly(p.theta)),
                               lti::lag_poly(p.theta));
    for (double& v : fgdinv.den) v *= p.k_d;

    lti::ContinuousTf gu;
    gu.num = {p.k_u};
    gu.den = lti::poly_mul(lti::poly_mul(lti::lag_poly(p.tau1_u), lti::lag_poly(p.tau1_u)),
                           lti::lag_poly(p.tau2_u));

    return ObserverFilters{lti::bilinear(fgdinv, p.h), lti::bilinear(gu, p.h)};
}

DobController::DobController(const ControllerParams& params, double u_b, double g_b)
    : params_(params), u_b_(u_b), g_b_(g_b) {
    if (u_b_ < 0.0) throw std::invalid_argument("DobController: u_b must be >= 0");
    auto filters = build_discrete_observer(params_);
    fgdinv_ = std::move(filters.fgdinv);
    gu_ = std::move(filters.gu);
    // Unit-DC filter F for the announced-carbohydrate discount; the meal
    // channel delay applies to announcements the same way.
    lti::ContinuousTf f;
    f.num = {1.0};
    f.den = lti::poly_mul(lti::poly_mul(lti::lag_poly(params_.theta), lti::lag_poly(params_.theta)),
                          lti::lag_poly(params_.theta));
    announce_f_ = lti::bilinear(f, params_.h);
    applied_line_.assign(static_cast<std::size_t>(params_.delay_steps()), 0.0);
    announce_line_.assign(static_cast<std::size_t>(params_.delay_steps()), 0.0);
}

InsulinCommand DobController::step(double cgm, double announced_bolus_u, double announced_cho_g) {
    if (announced_bolus_u < 0.0 || announced_cho_g < 0.0) {
        throw std::invalid_argument("DobController: bolus and announcement must be >= 0");
    }
    const double y = cgm - g_b_;
    const double u_delayed = applied_line_.front();
    applied_line_.pop_front();
    const double cho_delayed = announce_line_.front();
    announce_line_.pop_front();
    announce_line_.push_back(announced_cho_g);

    const double v = y + gu_.step(u_delayed);
    dhat_ = fgdinv_.step(v);
    const double announced_est = announce_f_.step(cho_delayed);

    InsulinCommand cmd;
    if (!std::isfinite(dhat_) || !fgdinv_.finite() || !gu_.finite() || !announce_f_.finite()) {
        // Safe fallback: basal only; the estimator stays out of the loop.
        dhat_ = 0.0;
        fgdinv_.reset();
        gu_.reset();
        announce_f_.reset();
        applied_line_.push_back(0.0);
        cmd.fault = true;
        cmd.u_total = u_b_;
        return cmd;
    }

    const double raw = params_.gamma * (dhat_ - announced_est);
    const double floor = params_.allow_suspension ? -u_b_ : 0.0;
    cmd.u_infusion = std::max(raw, floor);
    cmd.saturated = raw < floor;
    cmd.u_bolus = announced_bolus_u;
    cmd.u_total = u_b_ + cmd.u_infusion + cmd.u_bolus;

    // The observer sees the applied insulin, boluses included.
    applied_line_.push_back(cmd.u_infusion + cmd.u_bolus);
    return cmd;
}

} // namespace pramloop::control
