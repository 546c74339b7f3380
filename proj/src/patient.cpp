#include "pramloop/patient.hpp"

#include <cmath>
#include <stdexcept>

#include "pramloop/integrator.hpp"

namespace pramloop::patient {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kCgmFloor = 40.0;
constexpr double kCgmCeil = 400.0;
} // namespace

void PatientParams::validate(double h) const {
    if (g_b < 70.0 || g_b > 180.0) {
        throw std::invalid_argument("patient " + patient_id + ": G_b must be in [70,180] mg/dL");
    }
    if (u_b <= 0.0) {
        throw std::invalid_argument("patient " + patient_id + ": u_b must be > 0 U/step");
    }
    if (cir <= 0.0) {
        throw std::invalid_argument("patient " + patient_id + ": CIR must be > 0 g/U");
    }
    if (bw <= 0.0) {
        throw std::invalid_argument("patient " + patient_id + ": BW must be > 0 kg");
    }
    if (k_u <= 0.0 || k_ra < 0.0) {
        throw std::invalid_argument("patient " + patient_id + ": channel gains must be > 0");
    }
    if (tau1_u <= 0.0 || tau2_u <= 0.0 || tau1_ra <= 0.0 || tau2_ra <= 0.0) {
        throw std::invalid_argument("patient " + patient_id + ": time constants must be > 0");
    }
    if (input_delay < 0.0) {
        throw std::invalid_argument("patient " + patient_id + ": input delay must be >= 0");
    }
    const double steps = input_delay / h;
    if (std::abs(steps - std::round(steps)) > 1e-9) {
        throw std::invalid_argument("patient " + patient_id +
                                    ": input delay must be a multiple of the sampling period");
    }
    meal.validate();
    pram.validate();
}

VariabilitySample sample_variability(Rng& rng, const VariabilityConfig& cfg) {
    if (cfg.kabs_pct < 0.0 || cfg.f_pct < 0.0 || cfg.insulin_pk_pct < 0.0 ||
        cfg.circadian_amp_max < 0.0 || cfg.circadian_amp_max > 0.3) {
        throw std::invalid_argument("variability config: widths must be >= 0, amplitude <= 0.3");
    }
    VariabilitySample s;
    s.kabs_mult = cfg.kabs_pct > 0.0 ? rng.uniform(1.0 - cfg.kabs_pct, 1.0 + cfg.kabs_pct) : 1.0;
    s.f_mult = cfg.f_pct > 0.0 ? rng.uniform(1.0 - cfg.f_pct, 1.0 + cfg.f_pct) : 1.0;
    s.tau1u_mult = cfg.insulin_pk_pct > 0.0
                       ? rng.uniform(1.0 - cfg.insulin_pk_pct, 1.0 + cfg.insulin_pk_pct)
                       : 1.0;
    s.tau2u_mult = cfg.insulin_pk_pct > 0.0
                       ? rng.uniform(1.0 - cfg.insulin_pk_pct, 1.0 + cfg.insulin_pk_pct)
                       : 1.0;
    s.circadian_amp = cfg.circadian_amp_max > 0.0 ? rng.uniform(0.0, cfg.circadian_amp_max) : 0.0;
    s.circadian_phase = cfg.circadian_amp_max > 0.0 ? rng.uniform(0.0, kTwoPi) : 0.0;
    return s;
}

double circadian_factor(double t_min, double amplitude, double phase) {
    if (amplitude < 0.0 || amplitude > 0.3) {
        throw std::invalid_argument("circadian_factor: amplitude must be in [0, 0.3]");
    }
    return 1.0 + amplitude * std::sin(kTwoPi * t_min / 1440.0 + phase);
}

CgmSensor::CgmSensor(Rng rng, double noise_sd, double ar1_coeff)
    : rng_(rng), noise_sd_(noise_sd), rho_(ar1_coeff) {
    if (noise_sd < 0.0) {
        throw std::invalid_argument("CgmSensor: noise SD must be >= 0");
    }
    if (rho_ < 0.0 || rho_ >= 1.0) {
        throw std::invalid_argument("CgmSensor: AR(1) coefficient must be in [0,1)");
    }
}

double CgmSensor::sample(double g_true) {
    if (noise_sd_ > 0.0) {
        if (first_) {
            state_ = rng_.normal(0.0, noise_sd_); // stationary start
            first_ = false;
        } else {
            const double innov_sd = noise_sd_ * std::sqrt(1.0 - rho_ * rho_);
            state_ = rho_ * state_ + rng_.normal(0.0, innov_sd);
        }
    }
    const double v = g_true + state_;
    return std::min(kCgmCeil, std::max(kCgmFloor, v));
}

GlucosePlant::GlucosePlant(const PatientParams& params, double h)
    : g_b_(params.g_b),
      u_b_(params.u_b),
      h_(h),
      delay_steps_(static_cast<int>(std::llround(params.input_delay / h))),
      insulin_(params.k_u, params.tau1_u, params.tau2_u, h),
      ra_(params.k_ra, params.tau1_ra, params.tau2_ra, h),
      g_(params.g_b) {
    if (params.k_ra <= 0.0) {
        throw std::invalid_argument("GlucosePlant: K_ra must be calibrated before simulation");
    }
    u_line_.assign(static_cast<std::size_t>(delay_steps_), 0.0);
    ra_line_.assign(static_cast<std::size_t>(delay_steps_), 0.0);
}

double GlucosePlant::step(double u_total, double ra, double circadian) {
    double u_dev = u_total - u_b_;
    double ra_in = ra;
    if (delay_steps_ > 0) {
        u_line_.push_back(u_dev);
        ra_line_.push_back(ra_in);
        u_dev = u_line_.front();
        ra_in = ra_line_.front();
        u_line_.pop_front();
        ra_line_.pop_front();
    }
    const double ins_out = insulin_.step(u_dev);
    const double ra_out = ra_.step(ra_in);
    g_ = g_b_ + ra_out - circadian * ins_out;
    if (!std::isfinite(g_) || !insulin_.finite() || !ra_.finite()) {
        throw std::runtime_error("GlucosePlant: non-finite output");
    }
    g_ = std::max(0.0, g_);
    return g_;
}

void GlucosePlant::set_insulin_taus(double tau1, double tau2) {
    insulin_.retime(tau1, tau2, h_);
}

double calibrate_ra_gain(const PatientParams& params, double h, int substeps,
                         double target_excursion, double ref_meal_g) {
    if (target_excursion <= 0.0 || ref_meal_g <= 0.0) {
        throw std::invalid_argument("calibrate_ra_gain: target and reference meal must be > 0");
    }
    // Unit-gain Ra channel driven by the unattenuated reference meal; the
    // input delay only shifts the peak, so it is skipped here.
    pkpd::MealState meal;
    meal.q_sto1 = ref_meal_g * 1000.0;
    meal.d_active = meal.q_sto1;
    lti::ZohCascade channel(1.0, params.tau1_ra, params.tau2_ra, h);

    const int steps = static_cast<int>(std::ceil(1440.0 / h));
    double peak = 0.0;
    for (int k = 0; k < steps; ++k) {
        auto arr = std::array<double, 4>{meal.q_sto1, meal.q_sto2, meal.q_gut, 0.0};
        const auto next = rk4_step<4>(
            arr,
            [&](const std::array<double, 4>& x) {
                pkpd::MealState m{x[0], x[1], x[2], meal.d_active};
                const auto d = pkpd::meal_derivatives(m, 0.0, 1.0, params.meal);
                return std::array<double, 4>{d[0], d[1], d[2],
                                             pkpd::ra_of_appearance(m, params.meal)};
            },
            h, substeps);
        const double ra_avg = next[3] / h;
        meal.q_sto1 = next[0];
        meal.q_sto2 = next[1];
        meal.q_gut = next[2];
        peak = std::max(peak, channel.step(ra_avg));
    }
    if (peak <= 0.0) {
        throw std::runtime_error("calibrate_ra_gain: reference meal produced no response");
    }
    return target_excursion / peak;
}

} // namespace pramloop::patient
