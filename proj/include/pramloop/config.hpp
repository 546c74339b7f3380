#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pramloop/engine.hpp"
#include "pramloop/scenario.hpp"

namespace pramloop::config {

/// Fully resolved run configuration. Key names in the file format carry unit
/// suffixes (theta_min, z2_mgdl_per_min, ...); unknown keys are rejected and
/// defaults are applied only where documented.
struct FullConfig {
    int schema_version = 1;
    std::uint64_t master_seed = 0;
    int duration_days = 0; // 0 = scenario length
    double sampling_period_min = 5.0;
    int integrator_substeps = 10;
    bool metrics_use_cgm = true;
    bool allow_suspension = true;
    double ra_target_excursion = 120.0; // mg/dL, K_ra calibration target

    engine::SensorConfig sensor;
    patient::VariabilityConfig variability;
    scenario::MisestimationConfig misestimation;

    // Controller template; per-patient nominal models are derived later.
    double gamma_u_per_g = 0.0; // 0 = use 1/CIR per patient
    double theta_min = 15.0;
    double delay_min = 15.0;
    double nu = 0.8;

    strategy::StrategyConfig strategy;

    std::string scenario_kind = "tuning"; // "tuning" | "file"
    int scenario_days = 14;
    std::string scenario_file;
    scenario::TuningScenarioConfig tuning_scenario;

    std::vector<patient::PatientParams> cohort; // K_ra resolved

    // Optional tuning grids; empty = shipped defaults.
    std::vector<double> bolus_grid;
    std::vector<double> ratio_grid;
    std::vector<double> z1_grid;
    std::vector<double> z2_grid;
    std::vector<int> z3_grid;
    double lambda_for_thresholds = 30.0;
};

FullConfig parse_config(const std::string& path);
FullConfig parse_config_json(const nlohmann::json& j, const std::string& base_dir);

/// Resolved-config echo; parsing it back yields an identical configuration.
nlohmann::json to_json(const FullConfig& cfg);

/// Builds the configured scenario (generated or loaded).
scenario::Scenario make_scenario(const FullConfig& cfg);

/// Assembles the per-run engine configuration for one cohort member.
engine::SimConfig make_sim_config(const FullConfig& cfg, int patient_index,
                                  const scenario::Scenario& sc);

control::ControllerParams controller_template(const FullConfig& cfg);

/// Threshold defaults file (written by the tuning harness, consumed by S1).
void write_thresholds_file(const std::string& path, double z1, double z2, int z3);
void load_thresholds_file(const std::string& path, strategy::StrategyConfig& strategy);

} // namespace pramloop::config
