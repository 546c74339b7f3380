#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pramloop/engine.hpp"
#include "pramloop/metrics.hpp"
#include "pramloop/tuning.hpp"

namespace pramloop::io {

/// CSV trace: header t_min,G_true,G_cgm,u_basal,u_infusion,u_bolus,
/// p_infusion,p_bolus,Ra,eta,d_hat with fixed 6-decimal formatting.
/// Re-exporting the same result is byte-identical.
void export_trace(const engine::RunResult& result, const std::string& path);

/// Reads a trace written by export_trace; daily totals are rebuilt from the
/// dose columns (the terminal row belongs to no day).
engine::RunResult load_trace(const std::string& path);

struct RunRecord {
    std::string patient_id;
    int patient_index = 0;
    strategy::Mode mode = strategy::Mode::InsNMA;
    analytics::GlycemicMetrics metrics;
    bool aborted = false;
    std::string fault;
};

/// Versioned metrics document: per-run metrics, per-mode cohort mean and
/// sample SD, and the paired comparison records.
nlohmann::json metrics_document(const std::vector<RunRecord>& runs,
                                const std::vector<analytics::PairedComparison>& comparisons);
void export_metrics(const std::vector<RunRecord>& runs,
                    const std::vector<analytics::PairedComparison>& comparisons,
                    const std::string& path);

nlohmann::json tuning_document(const tuning::TuningReport& report);
void export_tuning_report(const tuning::TuningReport& report, const std::string& json_path,
                          const std::string& boxplot_csv_path);

/// Boxplot-ready long format: candidate,patient,metric,value.
void export_boxplot_csv(const std::vector<tuning::TuningCell>& cells, const std::string& path);

/// FNV-1a 64 over the file bytes, hex encoded.
std::string file_hash_hex(const std::string& path);

struct RunManifest {
    std::string config_path;
    std::uint64_t master_seed = 0;
    std::string tool_version;
    std::map<std::string, std::string> input_hashes;
    std::string created_utc;
};

RunManifest make_manifest(const std::string& config_path, std::uint64_t master_seed,
                          const std::vector<std::string>& extra_inputs = {});
void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

} // namespace pramloop::io
