#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pramloop/controller.hpp"
#include "pramloop/patient.hpp"
#include "pramloop/scenario.hpp"
#include "pramloop/strategies.hpp"

namespace pramloop::engine {

struct SensorConfig {
    double noise_sd = 5.0;  // mg/dL, stationary SD
    double ar1_coeff = 0.7;
};

/// Everything one closed-loop run needs. Strategy-independent randomness is
/// keyed by (master_seed, subject_index), never by mode, so runs of the same
/// patient under different strategies are paired.
struct SimConfig {
    patient::PatientParams patient;
    control::ControllerParams controller;
    strategy::StrategyConfig strategy;
    scenario::Scenario scenario;
    std::uint64_t master_seed = 0;
    int subject_index = 0;
    int duration_days = 0; // 0 = scenario duration
    double h = 5.0;        // sampling period, min
    int substeps = 10;     // integrator substeps per sampling period
    patient::VariabilityConfig variability;
    scenario::MisestimationConfig misestimation;
    SensorConfig sensor;

    void validate() const;
};

struct TraceRow {
    double t = 0.0;
    double g_true = 0.0;
    double g_cgm = 0.0;
    double u_basal = 0.0;
    double u_infusion = 0.0;
    double u_bolus = 0.0;
    double p_infusion = 0.0;
    double p_bolus = 0.0;
    double ra = 0.0;
    double eta = 1.0;
    double d_hat = 0.0;
};

struct SimEvent {
    long step = 0;
    std::string kind;
    double value = 0.0;
};

struct RunResult {
    std::vector<TraceRow> trace;          // duration/h + 1 rows
    std::vector<double> daily_insulin;    // U per day
    std::vector<double> daily_pramlintide; // ug per day
    std::vector<SimEvent> events;
    bool aborted = false;
    std::string fault;
    long fault_step = -1;
    double clamp_total_mg = 0.0; // negative-undershoot clamping applied
};

RunResult run_closed_loop(const SimConfig& cfg);

/// Fills the controller's nominal models from the patient (the plant family
/// is the nominal family here): insulin channel verbatim, meal channel with
/// the DC-consistent g/step gain, gamma defaulting to 1/CIR.
control::ControllerParams controller_for_patient(const patient::PatientParams& p,
                                                 const control::ControllerParams& tmpl,
                                                 double h);

struct BatchKey {
    int patient = 0;
    strategy::Mode mode = strategy::Mode::InsNMA;
    bool operator<(const BatchKey& other) const {
        if (patient != other.patient) return patient < other.patient;
        return static_cast<int>(mode) < static_cast<int>(other.mode);
    }
};

/// All (patient x mode) runs; per-patient randomness identical across modes.
/// Runs execute in parallel up to PRAMLOOP_THREADS (default: hardware
/// concurrency); an aborted run is reported in its result without cancelling
/// the others.
std::map<BatchKey, RunResult> batch_run(const std::vector<patient::PatientParams>& cohort,
                                        const std::vector<strategy::StrategyConfig>& strategies,
                                        const SimConfig& base);

/// Thread cap from PRAMLOOP_THREADS, falling back to hardware concurrency.
int max_threads();

} // namespace pramloop::engine
