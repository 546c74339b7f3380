#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pramloop/engine.hpp"
#include "pramloop/metrics.hpp"

namespace pramloop::tuning {

/// Candidate doses or ratios for one strategy. The shipped grids are the
/// clinically reported ones: boluses {15,30,45,60,90,100,300} ug and ratios
/// {3,6,10,12,15} ug/U.
struct TuningGrid {
    strategy::Mode mode = strategy::Mode::S2;
    std::vector<double> candidates;

    void validate() const;
};

std::vector<double> default_bolus_grid();
std::vector<double> default_ratio_grid();
std::vector<double> default_grid_for(strategy::Mode mode);

struct TuningCell {
    double candidate = 0.0;
    int patient = 0;
    analytics::GlycemicMetrics metrics;
    bool valid = true;
};

struct CandidateQuartiles {
    double candidate = 0.0;
    std::string metric;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
};

struct TuningReport {
    strategy::Mode mode = strategy::Mode::S2;
    std::vector<double> candidates;
    std::vector<TuningCell> cells;
    std::vector<CandidateQuartiles> quartiles;
    std::optional<double> chosen;
    std::uint64_t seed = 0;
    std::string scenario_label;
    std::vector<std::string> notes;
};

/// Per-candidate metric rows for selection; exposed so constructed tables
/// can drive the selection logic directly in tests.
struct CandidateTable {
    std::vector<double> candidates;
    // metrics[i][p]: candidate i, patient p; empty row = invalid candidate
    std::vector<std::vector<analytics::GlycemicMetrics>> metrics;
};

std::optional<std::size_t> select_candidate(const CandidateTable& table, double tol_tir = 0.5,
                                            double tol_hypo = 0.1);

/// Evaluates every candidate on the tuning scenario with paired streams
/// (stream keys never include the candidate) and selects per the
/// longest-TIR / lowest-hypo / least-pramlintide criterion.
TuningReport run_grid(const TuningGrid& grid, const std::vector<patient::PatientParams>& cohort,
                      const engine::SimConfig& base, std::uint64_t seed);

struct ThresholdGrids {
    std::vector<double> z1;
    std::vector<double> z2;
    std::vector<int> z3;
};

struct ThresholdChoice {
    double z1 = 0.0;
    double z2 = 0.0;
    int z3 = 0;
};

/// Full-factorial threshold table for Strategy 1, selected with the same
/// criterion; candidate identity is the (z1,z2,z3) triple.
struct ThresholdTable {
    std::vector<std::array<double, 3>> triples; // z3 stored as double key
    std::vector<std::vector<analytics::GlycemicMetrics>> metrics;
};

std::optional<std::size_t> select_thresholds(const ThresholdTable& table, double tol_tir = 0.5,
                                             double tol_hypo = 0.1);

struct ThresholdReport {
    ThresholdChoice chosen;
    std::vector<std::array<double, 3>> triples;
    std::vector<TuningCell> cells; // candidate field = flat triple index
    std::uint64_t seed = 0;
    std::vector<std::string> notes;
};

ThresholdReport tune_s1_thresholds(const ThresholdGrids& grids, double lambda_ug,
                                   const std::vector<patient::PatientParams>& cohort,
                                   const engine::SimConfig& base, std::uint64_t seed);

} // namespace pramloop::tuning
