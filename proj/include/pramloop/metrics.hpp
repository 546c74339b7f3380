#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "pramloop/engine.hpp"
#include "pramloop/rng.hpp"

namespace pramloop::analytics {

struct GlycemicMetrics {
    double pct_below_54 = 0.0;
    double pct_below_70 = 0.0;
    double pct_in_70_180 = 0.0; // closed interval [70, 180]
    double pct_above_180 = 0.0;
    double pct_above_250 = 0.0;
    double lbgi = 0.0;
    double hbgi = 0.0;
    double daily_insulin = 0.0;     // U, mean over days
    double daily_pramlintide = 0.0; // ug, mean over days
};

/// Time percentages over the glucose samples; below/above are strict, the
/// target range closed, so below70 + in-range + above180 partitions 100%.
GlycemicMetrics glucose_percentages(std::span<const double> glucose);

/// Low/high blood glucose indices from the symmetrizing risk transform
/// f(G) = 1.509*((ln G)^1.084 - 5.381); each sample contributes to exactly
/// one side. All samples must be positive.
std::pair<double, double> lbgi_hbgi(std::span<const double> glucose);

/// Full metric record for one run (CGM samples by default).
GlycemicMetrics compute_metrics(const engine::RunResult& result, bool use_cgm = true);

/// Named accessor used by comparisons and reports.
double metric_value(const GlycemicMetrics& m, const std::string& name);
std::vector<std::string> metric_names();

struct PairedComparison {
    std::string comparator;
    std::string strategy;
    std::string metric;
    double mean_diff = 0.0; // strategy minus comparator: positive TIR favors the strategy
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::vector<double> per_subject;
};

/// Linear-interpolation quantile of a sample (0 <= p <= 1).
double quantile(std::vector<double> values, double p);

/// Per-subject paired differences with a percentile-bootstrap 95% CI
/// (resampling subjects with replacement). bootstrap_n = 0 enumerates all
/// n^n resamples exactly (n must stay small). Deterministic per rng.
PairedComparison paired_differences(
    const std::map<engine::BatchKey, GlycemicMetrics>& metrics, strategy::Mode comparator,
    strategy::Mode strat, const std::string& metric, long bootstrap_n, Rng& rng);

/// One tuning candidate's cohort summary plus an order-free identity used
/// for the final tie-break.
struct CandidateStats {
    std::vector<double> tiebreak_key; // candidate identity, compared lexicographically
    double median_tir = 0.0;
    double median_hypo = 0.0; // pct below 70
    double median_pram = 0.0; // daily pramlintide
};

/// Lexicographic selection: best median TIR (within tol_tir counts as a
/// tie), then lowest hypo (within tol_hypo), then lowest pramlintide, then
/// the smallest candidate key. Returns the index into `stats`.
std::size_t tuning_select(const std::vector<CandidateStats>& stats, double tol_tir = 0.5,
                          double tol_hypo = 0.1);

double median(std::vector<double> values);

} // namespace pramloop::analytics
