#include "pramloop/tuning.hpp"

#include <algorithm>
#include <stdexcept>

namespace pramloop::tuning {

void TuningGrid::validate() const {
    if (candidates.empty()) {
        throw std::invalid_argument("tuning grid: no candidates");
    }
    for (double c : candidates) {
        if (c <= 0.0) throw std::invalid_argument("tuning grid: candidates must be > 0");
    }
    if (!std::is_sorted(candidates.begin(), candidates.end())) {
        throw std::invalid_argument("tuning grid: candidates must be sorted");
    }
    if (mode != strategy::Mode::S1 && mode != strategy::Mode::S2 &&
        mode != strategy::Mode::S3 && mode != strategy::Mode::S4) {
        throw std::invalid_argument("tuning grid: mode must be a pramlintide strategy");
    }
}

std::vector<double> default_bolus_grid() {
    return {15.0, 30.0, 45.0, 60.0, 90.0, 100.0, 300.0};
}

std::vector<double> default_ratio_grid() {
    return {3.0, 6.0, 10.0, 12.0, 15.0};
}

std::vector<double> default_grid_for(strategy::Mode mode) {
    switch (mode) {
        case strategy::Mode::S1:
        case strategy::Mode::S3:
            return default_bolus_grid();
        case strategy::Mode::S2:
        case strategy::Mode::S4:
            return default_ratio_grid();
        default:
            throw std::invalid_argument("no tuning grid for insulin-alone modes");
    }
}

namespace {

std::optional<std::size_t> select_impl(const std::vector<std::vector<double>>& keys,
                                       const std::vector<std::vector<analytics::GlycemicMetrics>>& metrics,
                                       double tol_tir, double tol_hypo) {
    std::vector<analytics::CandidateStats> stats;
    std::vector<std::size_t> valid_index;
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        if (metrics[i].empty()) continue; // invalid candidate, excluded
        std::vector<double> tir, hypo, pram;
        for (const auto& m : metrics[i]) {
            tir.push_back(m.pct_in_70_180);
            hypo.push_back(m.pct_below_70);
            pram.push_back(m.daily_pramlintide);
        }
        analytics::CandidateStats s;
        s.tiebreak_key = keys[i];
        s.median_tir = analytics::median(tir);
        s.median_hypo = analytics::median(hypo);
        s.median_pram = analytics::median(pram);
        stats.push_back(std::move(s));
        valid_index.push_back(i);
    }
    if (stats.empty()) return std::nullopt;
    return valid_index[analytics::tuning_select(stats, tol_tir, tol_hypo)];
}

strategy::StrategyConfig candidate_strategy(const strategy::StrategyConfig& base,
                                            strategy::Mode mode, double value) {
    strategy::StrategyConfig s = base;
    s.mode = mode;
    switch (mode) {
        case strategy::Mode::S1: s.lambda_ug = value; break;
        case strategy::Mode::S2: s.rho_ug_per_u = value; break;
        case strategy::Mode::S3: s.phi_ug = value; break;
        case strategy::Mode::S4: s.delta_ug_per_u = value; break;
        default: throw std::logic_error("candidate_strategy: bad mode");
    }
    return s;
}

} // namespace

std::optional<std::size_t> select_candidate(const CandidateTable& table, double tol_tir,
                                            double tol_hypo) {
    if (table.candidates.empty()) {
        throw std::invalid_argument("select_candidate: empty table");
    }
    if (table.candidates.size() != table.metrics.size()) {
        throw std::invalid_argument("select_candidate: table size mismatch");
    }
    std::vector<std::vector<double>> keys;
    keys.reserve(table.candidates.size());
    for (double c : table.candidates) keys.push_back({c});
    return select_impl(keys, table.metrics, tol_tir, tol_hypo);
}

std::optional<std::size_t> select_thresholds(const ThresholdTable& table, double tol_tir,
                                             double tol_hypo) {
    if (table.triples.empty()) {
        throw std::invalid_argument("select_thresholds: empty table");
    }
    std::vector<std::vector<double>> keys;
    keys.reserve(table.triples.size());
    for (const auto& t : table.triples) keys.push_back({t[0], t[1], t[2]});
    return select_impl(keys, table.metrics, tol_tir, tol_hypo);
}

TuningReport run_grid(const TuningGrid& grid, const std::vector<patient::PatientParams>& cohort,
                      const engine::SimConfig& base, std::uint64_t seed) {
    grid.validate();
    if (cohort.empty()) {
        throw std::invalid_argument("run_grid: empty cohort");
    }
    TuningReport report;
    report.mode = grid.mode;
    report.candidates = grid.candidates;
    report.seed = seed;
    report.scenario_label = base.scenario.label;

    CandidateTable table;
    table.candidates = grid.candidates;
    for (double value : grid.candidates) {
        engine::SimConfig cfg = base;
        cfg.master_seed = seed; // same seed for every candidate: paired draws
        std::vector<strategy::StrategyConfig> strategies{
            candidate_strategy(base.strategy, grid.mode, value)};
        const auto results = engine::batch_run(cohort, strategies, cfg);

        std::vector<analytics::GlycemicMetrics> per_patient;
        bool candidate_valid = true;
        for (const auto& [key, run] : results) {
            TuningCell cell;
            cell.candidate = value;
            cell.patient = key.patient;
            cell.valid = !run.aborted;
            if (run.aborted) {
                candidate_valid = false;
                report.notes.push_back("candidate " + std::to_string(value) + " patient " +
                                       std::to_string(key.patient) + " aborted: " + run.fault);
            } else {
                cell.metrics = analytics::compute_metrics(run);
                per_patient.push_back(cell.metrics);
            }
            report.cells.push_back(cell);
        }
        table.metrics.push_back(candidate_valid ? per_patient
                                                : std::vector<analytics::GlycemicMetrics>{});
    }

    for (std::size_t i = 0; i < table.candidates.size(); ++i) {
        if (table.metrics[i].empty()) continue;
        for (const auto& name : analytics::metric_names()) {
            std::vector<double> values;
            for (const auto& m : table.metrics[i]) values.push_back(analytics::metric_value(m, name));
            CandidateQuartiles q;
            q.candidate = table.candidates[i];
            q.metric = name;
            q.q25 = analytics::quantile(values, 0.25);
            q.q50 = analytics::quantile(values, 0.50);
            q.q75 = analytics::quantile(values, 0.75);
            report.quartiles.push_back(std::move(q));
        }
    }

    const auto chosen = select_candidate(table);
    if (chosen) {
        report.chosen = table.candidates[*chosen];
    } else {
        report.notes.push_back("no valid candidate");
    }
    return report;
}

ThresholdReport tune_s1_thresholds(const ThresholdGrids& grids, double lambda_ug,
                                   const std::vector<patient::PatientParams>& cohort,
                                   const engine::SimConfig& base, std::uint64_t seed) {
    if (grids.z1.empty() || grids.z2.empty() || grids.z3.empty()) {
        throw std::invalid_argument("tune_s1_thresholds: empty threshold grid");
    }
    if (lambda_ug <= 0.0) {
        throw std::invalid_argument("tune_s1_thresholds: lambda must be > 0");
    }
    ThresholdReport report;
    report.seed = seed;

    ThresholdTable table;
    for (double z1 : grids.z1) {
        for (double z2 : grids.z2) {
            for (int z3 : grids.z3) {
                table.triples.push_back({z1, z2, static_cast<double>(z3)});
            }
        }
    }
    report.triples = table.triples;

    for (std::size_t ti = 0; ti < table.triples.size(); ++ti) {
        const auto& triple = table.triples[ti];
        strategy::StrategyConfig s = base.strategy;
        s.mode = strategy::Mode::S1;
        s.lambda_ug = lambda_ug;
        s.z1 = triple[0];
        s.z2 = triple[1];
        s.z3 = static_cast<int>(triple[2]);

        engine::SimConfig cfg = base;
        cfg.master_seed = seed;
        const auto results = engine::batch_run(cohort, {s}, cfg);

        std::vector<analytics::GlycemicMetrics> per_patient;
        bool valid = true;
        for (const auto& [key, run] : results) {
            TuningCell cell;
            cell.candidate = static_cast<double>(ti);
            cell.patient = key.patient;
            cell.valid = !run.aborted;
            if (run.aborted) {
                valid = false;
                report.notes.push_back("triple " + std::to_string(ti) + " patient " +
                                       std::to_string(key.patient) + " aborted: " + run.fault);
            } else {
                cell.metrics = analytics::compute_metrics(run);
                per_patient.push_back(cell.metrics);
            }
            report.cells.push_back(cell);
        }
        table.metrics.push_back(valid ? per_patient : std::vector<analytics::GlycemicMetrics>{});
    }

    const auto chosen = select_thresholds(table);
    if (!chosen) {
        throw std::runtime_error("tune_s1_thresholds: no valid threshold triple");
    }
    report.chosen.z1 = table.triples[*chosen][0];
    report.chosen.z2 = table.triples[*chosen][1];
    report.chosen.z3 = static_cast<int>(table.triples[*chosen][2]);
    return report;
}

} // namespace pramloop::tuning
