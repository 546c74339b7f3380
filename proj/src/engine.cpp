#include "pramloop/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "pramloop/integrator.hpp"

namespace pramloop::engine {

void SimConfig::validate() const {
    if (h <= 0.0) throw std::invalid_argument("sim: sampling period must be > 0");
    const double steps_per_day = 1440.0 / h;
    if (std::abs(steps_per_day - std::round(steps_per_day)) > 1e-9) {
        throw std::invalid_argument("sim: sampling period must divide the day evenly");
    }
    if (substeps < 1) throw std::invalid_argument("sim: substeps must be >= 1");
    if (scenario.meals.empty() && scenario.duration_days == 0 && duration_days == 0) {
        throw std::invalid_argument("sim: no scenario and no duration");
    }
    const int days = duration_days > 0 ? duration_days : scenario.duration_days;
    if (days < scenario.duration_days) {
        throw std::invalid_argument("sim: duration shorter than the scenario");
    }
    patient.validate(h);
    controller.validate();
    strategy.validate();
    if (sensor.noise_sd < 0.0) throw std::invalid_argument("sim: noise SD must be >= 0");
}

control::ControllerParams controller_for_patient(const patient::PatientParams& p,
                                                 const control::ControllerParams& tmpl,
                                                 double h) {
    control::ControllerParams c = tmpl;
    c.h = h;
    c.k_u = p.k_u;
    c.tau1_u = p.tau1_u;
    c.tau2_u = p.tau2_u;
    // Meal-channel nominal: DC-consistent mapping from g/step through the
    // meal path (f * 1000 mg/g / (h * BW) gives the sustained Ra per g/step).
    c.k_d = p.k_ra * p.meal.f * 1000.0 / (h * p.bw);
    c.tau1_d = p.tau1_ra;
    c.tau2_d = p.tau2_ra;
    if (p.gamma_override > 0.0) {
        c.gamma = p.gamma_override;
    } else if (tmpl.gamma <= 0.0) {
        // Derated meal-compensation gain: full 1/CIR correction over-doses
        // fast meals through the estimation lag and ends in hypoglycemia.
        c.gamma = 0.7 / p.cir;
    }
    return c;
}

namespace {

struct CombinedState {
    pkpd::PramlintideState pram;
    pkpd::MealState meal;
};

// Ordinal of each meal within its day, for stream keying.
std::vector<int> meal_day_ordinals(const scenario::Scenario& sc) {
    std::vector<int> ordinals(sc.meals.size(), 0);
    int current_day = -1;
    int ordinal = 0;
    for (std::size_t i = 0; i < sc.meals.size(); ++i) {
        if (sc.meals[i].day != current_day) {
            current_day = sc.meals[i].day;
            ordinal = 0;
        }
        ordinals[i] = ordinal++;
    }
    return ordinals;
}

} // namespace

RunResult run_closed_loop(const SimConfig& cfg) {
    cfg.validate();
    RunResult result;

    const int days = cfg.duration_days > 0 ? cfg.duration_days : cfg.scenario.duration_days;
    const long steps_per_day = std::lround(1440.0 / cfg.h);
    const long n_steps = days * steps_per_day;

    // Strategy-independent stream keys: pairing across modes by construction.
    const auto subject = static_cast<std::uint64_t>(cfg.subject_index);
    auto circ_rng = derive_stream(cfg.master_seed, "circadian", subject, 0, 0);
    const auto circ_sample = patient::sample_variability(circ_rng, cfg.variability);
    patient::CgmSensor sensor(derive_stream(cfg.master_seed, "cgm", subject, 0, 0),
                              cfg.sensor.noise_sd, cfg.sensor.ar1_coeff);

    const auto ordinals = meal_day_ordinals(cfg.scenario);
    std::vector<std::vector<std::size_t>> meals_at(static_cast<std::size_t>(n_steps));
    for (std::size_t i = 0; i < cfg.scenario.meals.size(); ++i) {
        const auto step = static_cast<long>(std::floor(cfg.scenario.meals[i].abs_time() / cfg.h));
        if (step >= 0 && step < n_steps) {
            meals_at[static_cast<std::size_t>(step)].push_back(i);
        }
    }

    patient::GlucosePlant plant(cfg.patient, cfg.h);
    auto controller = control::DobController(cfg.controller, cfg.patient.u_b, cfg.patient.g_b);

    CombinedState state;
    pkpd::MealModelParams meal_params = cfg.patient.meal; // per-meal variability applies here
    const pkpd::PramlintideParams& pram_params = cfg.patient.pram;

    strategy::DosingState dosing;
    dosing.prev_g = cfg.patient.g_b;
    dosing.prev_u = cfg.patient.u_b;

    result.trace.reserve(static_cast<std::size_t>(n_steps) + 1);
    result.daily_insulin.assign(static_cast<std::size_t>(days), 0.0);
    result.daily_pramlintide.assign(static_cast<std::size_t>(days), 0.0);

    double total_meal_mg = 0.0;
    double total_pram_pmol = 0.0;
    double clamp_pmol = 0.0;

    try {
        for (long k = 0; k <= n_steps; ++k) {
            const double t = static_cast<double>(k) * cfg.h;
            const bool terminal = (k == n_steps);
            const double g_true = plant.glucose();
            const double cgm = sensor.sample(g_true);

            double announced_bolus = 0.0;
            double announced_cho = 0.0;
            static const std::vector<std::size_t> kNoMeals;
            const auto& meal_indices =
                terminal ? kNoMeals : meals_at[static_cast<std::size_t>(k)];
            for (const auto mi : meal_indices) {
                const auto& meal = cfg.scenario.meals[mi];
                if (strategy::mode_announces(cfg.strategy.mode)) {
                    double mis = meal.grams;
                    if (!cfg.scenario.announce_errors.empty()) {
                        mis = std::max(0.0, meal.grams *
                                                (1.0 + cfg.scenario.announce_errors[mi]));
                    } else if (!strategy::mode_simplified(cfg.strategy.mode)) {
                        auto rng = derive_stream(cfg.master_seed, "cho_err", subject,
                                                 static_cast<std::uint64_t>(meal.day),
                                                 static_cast<std::uint64_t>(ordinals[mi]));
                        mis = scenario::misestimate_cho(meal.grams, rng, cfg.misestimation);
                    }
                    const double cho_hat = strategy::announcement_policy(
                        cfg.strategy.mode, meal.is_snack(), mis, cfg.strategy);
                    if (cho_hat > 0.0) {
                        announced_cho += cho_hat;
                        announced_bolus += control::prandial_bolus(cho_hat, cfg.patient.cir,
                                                                   cfg.controller.nu);
                    }
                }
            }

            control::InsulinCommand ins;
            if (!terminal) {
                ins = controller.step(cgm, announced_bolus, announced_cho);
                if (ins.fault) {
                    result.events.push_back({k, "controller_fault", 0.0});
                }
                if (ins.saturated) {
                    result.events.push_back({k, "saturation", ins.u_infusion});
                }
            }
            const double u_total = terminal ? cfg.patient.u_b : ins.u_total;

            strategy::Slopes sl{0.0, 0.0};
            if (k >= 1) {
                sl = strategy::slopes(u_total, dosing.prev_u, cgm, dosing.prev_g, cfg.h);
            }

            strategy::PramCommand pram;
            if (!terminal) {
                switch (cfg.strategy.mode) {
                    case strategy::Mode::S1:
                        pram = strategy::strategy1_step(dosing, u_total, cfg.patient.u_b, sl.m_u,
                                                        dosing.prev_m_u, sl.m_g, cfg.strategy);
                        break;
                    case strategy::Mode::S2:
                        pram = strategy::strategy2_step(u_total, cfg.strategy);
                        break;
                    case strategy::Mode::S3:
                        pram = strategy::strategy3_step(announced_cho, cfg.strategy);
                        break;
                    case strategy::Mode::S4:
                        pram = strategy::strategy4_step(ins.u_infusion, cfg.patient.u_b,
                                                        ins.u_bolus, cfg.strategy);
                        break;
                    default:
                        break;
                }
            }

            TraceRow row;
            row.t = t;
            row.g_true = g_true;
            row.g_cgm = cgm;
            row.u_basal = cfg.patient.u_b;
            row.u_infusion = terminal ? 0.0 : ins.u_infusion;
            row.u_bolus = terminal ? 0.0 : ins.u_bolus;
            row.p_infusion = pram.p_infusion_ug;
            row.p_bolus = pram.p_bolus_ug;
            row.ra = pkpd::ra_of_appearance(state.meal, meal_params);
            row.eta = pkpd::eta_factor(state.pram.peff, pram_params);
            row.d_hat = controller.last_dhat();
            result.trace.push_back(row);

            if (terminal) break;

            const auto day_index = static_cast<std::size_t>(k / steps_per_day);
            result.daily_insulin[day_index] += cfg.patient.u_b + ins.u_infusion + ins.u_bolus;
            result.daily_pramlintide[day_index] += pram.p_infusion_ug + pram.p_bolus_ug;

            // Inject meals and the pramlintide bolus at the interval start.
            for (const auto mi : meal_indices) {
                const auto& meal = cfg.scenario.meals[mi];
                auto var_rng = derive_stream(cfg.master_seed, "meal_var", subject,
                                             static_cast<std::uint64_t>(meal.day),
                                             static_cast<std::uint64_t>(ordinals[mi]));
                const auto var = patient::sample_variability(var_rng, cfg.variability);
                meal_params.k_abs = cfg.patient.meal.k_abs * var.kabs_mult;
                meal_params.f = cfg.patient.meal.f * var.f_mult;
                plant.set_insulin_taus(cfg.patient.tau1_u * var.tau1u_mult,
                                       cfg.patient.tau2_u * var.tau2u_mult);

                const double meal_mg = meal.grams * 1000.0;
                state.meal.d_active = pkpd::updated_d_active(state.meal, meal_mg);
                state.meal.q_sto1 += meal_mg;
                total_meal_mg += meal_mg;
                result.events.push_back({k, "meal", meal.grams});
            }
            if (pram.p_bolus_ug > 0.0) {
                const double dose_pmol = pkpd::convert_pram_dose(pram.p_bolus_ug, pram_params);
                state.pram.q1 += pram_params.a_s * dose_pmol;
                total_pram_pmol += pram_params.a_s * dose_pmol;
                result.events.push_back({k, "pram_bolus", pram.p_bolus_ug});
            }
            const double p_inf_rate =
                pkpd::convert_pram_dose(pram.p_infusion_ug, pram_params) / cfg.h;
            total_pram_pmol += pram_params.a_s * p_inf_rate * cfg.h;

            std::array<double, 8> x{state.pram.q1,    state.pram.q2,   state.pram.p1,
                                    state.pram.peff,  state.meal.q_sto1, state.meal.q_sto2,
                                    state.meal.q_gut, 0.0};
            const double d_active = state.meal.d_active;
            x = rk4_step<8>(
                x,
                [&](const std::array<double, 8>& s) {
                    const pkpd::PramlintideState ps{s[0], s[1], s[2], s[3]};
                    const pkpd::MealState ms{s[4], s[5], s[6], d_active};
                    const auto dp = pkpd::pram_derivatives(ps, p_inf_rate, pram_params);
                    const double eta = pkpd::eta_factor(std::max(0.0, s[3]), pram_params);
                    const auto dm = pkpd::meal_derivatives(ms, 0.0, eta, meal_params);
                    return std::array<double, 8>{dp[0], dp[1], dp[2], dp[3],
                                                 dm[0], dm[1], dm[2],
                                                 pkpd::ra_of_appearance(ms, meal_params)};
                },
                cfg.h, cfg.substeps);

            // Integration error must not create mass; clamp and account.
            for (int i = 0; i < 7; ++i) {
                if (x[static_cast<std::size_t>(i)] < 0.0) {
                    const double mag = -x[static_cast<std::size_t>(i)];
                    if (i < 4) {
                        clamp_pmol += mag;
                    } else {
                        result.clamp_total_mg += mag;
                    }
                    x[static_cast<std::size_t>(i)] = 0.0;
                }
            }
            if (result.clamp_total_mg > 1e-6 * total_meal_mg ||
                clamp_pmol > 1e-6 * std::max(total_pram_pmol, 1.0)) {
                throw std::runtime_error("integration undershoot beyond tolerance");
            }

            state.pram = pkpd::PramlintideState{x[0], x[1], x[2], x[3]};
            state.meal.q_sto1 = x[4];
            state.meal.q_sto2 = x[5];
            state.meal.q_gut = x[6];
            const double ra_avg = x[7] / cfg.h;

            const double circ =
                patient::circadian_factor(t, circ_sample.circadian_amp, circ_sample.circadian_phase);
            plant.step(u_total, ra_avg, circ);

            dosing.prev_u = u_total;
            dosing.prev_g = cgm;
            dosing.prev_m_u = sl.m_u;
        }
    } catch (const std::exception& e) {
        result.aborted = true;
        result.fault = e.what();
        result.fault_step = static_cast<long>(result.trace.size());
        return result;
    }

    return result;
}

int max_threads() {
    if (const char* env = std::getenv("PRAMLOOP_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::map<BatchKey, RunResult> batch_run(const std::vector<patient::PatientParams>& cohort,
                                        const std::vector<strategy::StrategyConfig>& strategies,
                                        const SimConfig& base) {
    if (cohort.empty() || strategies.empty()) {
        throw std::invalid_argument("batch_run: need at least one patient and one strategy");
    }
    struct Task {
        int p;
        int s;
    };
    std::vector<Task> tasks;
    tasks.reserve(cohort.size() * strategies.size());
    for (std::size_t p = 0; p < cohort.size(); ++p) {
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            tasks.push_back({static_cast<int>(p), static_cast<int>(s)});
        }
    }

    std::vector<RunResult> run_results(tasks.size());
    std::atomic<std::size_t> next{0};
    const int n_threads = std::max(1, std::min<int>(max_threads(), static_cast<int>(tasks.size())));
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            SimConfig cfg = base;
            cfg.patient = cohort[static_cast<std::size_t>(tasks[i].p)];
            cfg.subject_index = tasks[i].p;
            cfg.strategy = strategies[static_cast<std::size_t>(tasks[i].s)];
            cfg.controller = controller_for_patient(cfg.patient, base.controller, cfg.h);
            try {
                run_results[i] = run_closed_loop(cfg);
            } catch (const std::exception& e) {
                run_results[i].aborted = true;
                run_results[i].fault = e.what();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::map<BatchKey, RunResult> results;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        results[{tasks[i].p, strategies[static_cast<std::size_t>(tasks[i].s)].mode}] =
            std::move(run_results[i]);
    }
    return results;
}

} // namespace pramloop::engine
