#include "pramloop/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pramloop::io {

using nlohmann::json;

void export_trace(const engine::RunResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("export_trace: cannot write '" + path + "'");
    }
    out << "t_min,G_true,G_cgm,u_basal,u_infusion,u_bolus,p_infusion,p_bolus,Ra,eta,d_hat\n";
    char buf[320];
    for (const auto& r : result.trace) {
        std::snprintf(buf, sizeof(buf),
                      "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.t, r.g_true,
                      r.g_cgm, r.u_basal, r.u_infusion, r.u_bolus, r.p_infusion, r.p_bolus, r.ra,
                      r.eta, r.d_hat);
        out << buf;
    }
    if (!out) {
        throw std::runtime_error("export_trace: write failed for '" + path + "'");
    }
}

engine::RunResult load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_trace: cannot open '" + path + "'");
    }
    engine::RunResult result;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("load_trace: '" + path + "' is empty");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        engine::TraceRow r;
        const int n = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf",
                                  &r.t, &r.g_true, &r.g_cgm, &r.u_basal, &r.u_infusion,
                                  &r.u_bolus, &r.p_infusion, &r.p_bolus, &r.ra, &r.eta, &r.d_hat);
        if (n != 11) {
            throw std::runtime_error("load_trace: malformed row in '" + path + "'");
        }
        result.trace.push_back(r);
    }
    if (result.trace.empty()) {
        throw std::runtime_error("load_trace: no rows in '" + path + "'");
    }
    // Terminal row marks the end of the last day; dose rows cover [0, end).
    const double end = result.trace.back().t;
    const int days = std::max(1, static_cast<int>(std::lround(end / 1440.0)));
    result.daily_insulin.assign(static_cast<std::size_t>(days), 0.0);
    result.daily_pramlintide.assign(static_cast<std::size_t>(days), 0.0);
    for (const auto& r : result.trace) {
        if (r.t >= end) continue;
        const auto day = std::min<std::size_t>(static_cast<std::size_t>(r.t / 1440.0),
                                               static_cast<std::size_t>(days - 1));
        result.daily_insulin[day] += r.u_basal + r.u_infusion + r.u_bolus;
        result.daily_pramlintide[day] += r.p_infusion + r.p_bolus;
    }
    return result;
}

namespace {

json metrics_to_json(const analytics::GlycemicMetrics& m) {
    json j;
    for (const auto& name : analytics::metric_names()) {
        j[name] = analytics::metric_value(m, name);
    }
    return j;
}

} // namespace

json metrics_document(const std::vector<RunRecord>& runs,
                      const std::vector<analytics::PairedComparison>& comparisons) {
    json doc;
    doc["schema_version"] = 1;
    json per_run = json::array();
    for (const auto& r : runs) {
        json j;
        j["patient_id"] = r.patient_id;
        j["patient_index"] = r.patient_index;
        j["mode"] = strategy::mode_name(r.mode);
        if (r.aborted) {
            j["aborted"] = true;
            j["fault"] = r.fault;
        } else {
            j["metrics"] = metrics_to_json(r.metrics);
        }
        per_run.push_back(j);
    }
    doc["per_run"] = per_run;

    // Cohort mean and sample SD per mode, aborted runs excluded.
    std::set<strategy::Mode> modes;
    for (const auto& r : runs) {
        if (!r.aborted) modes.insert(r.mode);
    }
    json cohort = json::array();
    for (const auto mode : modes) {
        json mj;
        mj["mode"] = strategy::mode_name(mode);
        json mean_j, sd_j;
        for (const auto& name : analytics::metric_names()) {
            std::vector<double> values;
            for (const auto& r : runs) {
                if (!r.aborted && r.mode == mode) {
                    values.push_back(analytics::metric_value(r.metrics, name));
                }
            }
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            const double sd =
                values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
            mean_j[name] = mean;
            sd_j[name] = sd;
        }
        mj["mean"] = mean_j;
        mj["sd"] = sd_j;
        mj["n"] = [&] {
            int n = 0;
            for (const auto& r : runs) {
                if (!r.aborted && r.mode == mode) ++n;
            }
            return n;
        }();
        cohort.push_back(mj);
    }
    doc["cohort"] = cohort;

    json comp = json::array();
    for (const auto& c : comparisons) {
        json j;
        j["comparator"] = c.comparator;
        j["strategy"] = c.strategy;
        j["metric"] = c.metric;
        j["mean_diff"] = c.mean_diff;
        j["ci95"] = {c.ci_lo, c.ci_hi};
        j["per_subject"] = c.per_subject;
        comp.push_back(j);
    }
    doc["comparisons"] = comp;
    return doc;
}

void export_metrics(const std::vector<RunRecord>& runs,
                    const std::vector<analytics::PairedComparison>& comparisons,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("export_metrics: cannot write '" + path + "'");
    }
    out << metrics_document(runs, comparisons).dump(2) << "\n";
    if (!out) {
        throw std::runtime_error("export_metrics: write failed for '" + path + "'");
    }
}

json tuning_document(const tuning::TuningReport& report) {
    json doc;
    doc["schema_version"] = 1;
    doc["mode"] = strategy::mode_name(report.mode);
    doc["candidates"] = report.candidates;
    if (report.chosen) {
        doc["chosen"] = *report.chosen;
    } else {
        doc["chosen"] = nullptr;
    }
    doc["seed"] = report.seed;
    doc["scenario"] = report.scenario_label;
    json cells = json::array();
    for (const auto& c : report.cells) {
        json j;
        j["candidate"] = c.candidate;
        j["patient"] = c.patient;
        j["valid"] = c.valid;
        if (c.valid) j["metrics"] = metrics_to_json(c.metrics);
        cells.push_back(j);
    }
    doc["cells"] = cells;
    json quartiles = json::array();
    for (const auto& q : report.quartiles) {
        quartiles.push_back({{"candidate", q.candidate},
                             {"metric", q.metric},
                             {"q25", q.q25},
                             {"q50", q.q50},
                             {"q75", q.q75}});
    }
    doc["quartiles"] = quartiles;
    doc["notes"] = report.notes;
    return doc;
}

void export_boxplot_csv(const std::vector<tuning::TuningCell>& cells, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("export_boxplot_csv: cannot write '" + path + "'");
    }
    out << "candidate,patient,metric,value\n";
    char buf[160];
    for (const auto& c : cells) {
        if (!c.valid) continue;
        for (const auto& name : analytics::metric_names()) {
            std::snprintf(buf, sizeof(buf), "%.6f,%d,%s,%.6f\n", c.candidate, c.patient,
                          name.c_str(), analytics::metric_value(c.metrics, name));
            out << buf;
        }
    }
    if (!out) {
        throw std::runtime_error("export_boxplot_csv: write failed for '" + path + "'");
    }
}

void export_tuning_report(const tuning::TuningReport& report, const std::string& json_path,
                          const std::string& boxplot_csv_path) {
    std::ofstream out(json_path);
    if (!out) {
        throw std::runtime_error("export_tuning_report: cannot write '" + json_path + "'");
    }
    out << tuning_document(report).dump(2) << "\n";
    if (!boxplot_csv_path.empty()) {
        export_boxplot_csv(report.cells, boxplot_csv_path);
    }
}

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("file_hash_hex: cannot open '" + path + "'");
    }
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

RunManifest make_manifest(const std::string& config_path, std::uint64_t master_seed,
                          const std::vector<std::string>& extra_inputs) {
    RunManifest m;
    m.config_path = config_path;
    m.master_seed = master_seed;
    m.tool_version = PRAMLOOP_VERSION;
    m.input_hashes[config_path] = file_hash_hex(config_path);
    for (const auto& p : extra_inputs) {
        m.input_hashes[p] = file_hash_hex(p);
    }
    std::time_t now = std::time(nullptr);
    char ts[32];
    std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m.created_utc = ts;
    return m;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    json j;
    j["schema_version"] = 1;
    j["config_path"] = manifest.config_path;
    j["master_seed"] = manifest.master_seed;
    j["tool_version"] = manifest.tool_version;
    j["input_hashes"] = manifest.input_hashes;
    j["created_utc"] = manifest.created_utc;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_manifest: cannot write '" + path + "'");
    }
    out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_manifest: cannot open '" + path + "'");
    }
    json j = json::parse(in);
    RunManifest m;
    m.config_path = j.at("config_path").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.tool_version = j.value("tool_version", "");
    if (j.contains("input_hashes")) {
        m.input_hashes = j.at("input_hashes").get<std::map<std::string, std::string>>();
    }
    m.created_utc = j.value("created_utc", "");
    return m;
}

} // namespace pramloop::io
