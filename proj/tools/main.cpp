#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "pramloop/config.hpp"
#include "pramloop/io.hpp"

namespace fs = std::filesystem;
using namespace pramloop;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string manifest_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* cfg = cmd->add_option("--config", args.config_path,
                                "Run configuration file (JSON; units in key names)");
    if (config_required) {
        cmd->add_option("--manifest", args.manifest_path,
                        "Re-run from a previously written manifest (overrides --config)");
        cfg->required(false);
    }
    cmd->add_option("--out-dir", args.out_dir, "Output directory (created if missing)");
    cmd->add_option("--seed", args.seed, "Master seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
}

config::FullConfig load_config(CommonArgs& args) {
    if (!args.manifest_path.empty()) {
        const auto manifest = io::load_manifest(args.manifest_path);
        args.config_path = manifest.config_path;
        if (!args.seed_set) {
            args.seed = manifest.master_seed;
            args.seed_set = true;
        }
    }
    if (args.config_path.empty()) {
        throw CLI::ValidationError("--config", "a configuration file is required");
    }
    auto cfg = config::parse_config(args.config_path);
    if (args.seed_set) cfg.master_seed = args.seed;
    return cfg;
}

void prepare_out_dir(const std::string& dir) {
    if (!dir.empty() && dir != ".") {
        fs::create_directories(dir);
    }
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_resolved_config(const config::FullConfig& cfg, const std::string& out_dir) {
    std::ofstream out(join(out_dir, "resolved_config.json"));
    out << config::to_json(cfg).dump(2) << "\n";
}

int find_patient(const config::FullConfig& cfg, const std::string& wanted) {
    if (wanted.empty()) return 0;
    for (std::size_t i = 0; i < cfg.cohort.size(); ++i) {
        if (cfg.cohort[i].patient_id == wanted) return static_cast<int>(i);
    }
    try {
        const int idx = std::stoi(wanted);
        if (idx >= 0 && idx < static_cast<int>(cfg.cohort.size())) return idx;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("unknown patient '" + wanted + "'");
}

std::vector<io::RunRecord> collect_records(const config::FullConfig& cfg,
                                           const std::map<engine::BatchKey, engine::RunResult>& results) {
    std::vector<io::RunRecord> records;
    for (const auto& [key, run] : results) {
        io::RunRecord rec;
        rec.patient_index = key.patient;
        rec.patient_id = cfg.cohort[static_cast<std::size_t>(key.patient)].patient_id;
        rec.mode = key.mode;
        rec.aborted = run.aborted;
        rec.fault = run.fault;
        if (!run.aborted) {
            rec.metrics = analytics::compute_metrics(run, cfg.metrics_use_cgm);
        }
        records.push_back(rec);
    }
    return records;
}

const std::vector<std::string> kComparisonMetrics = {"pct_in_70_180", "pct_above_180",
                                                     "pct_above_250", "lbgi", "hbgi"};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pramloop: closed-loop insulin-plus-pramlintide dosing simulator"};
    app.require_subcommand(1);

    // simulate
    CommonArgs sim_args;
    std::string sim_patient;
    std::string sim_strategy;
    auto* sim = app.add_subcommand("simulate", "Run one patient through the closed loop");
    add_common(sim, sim_args, true);
    sim->add_option("--patient", sim_patient, "Patient id or cohort index (default: first)");
    sim->add_option("--strategy", sim_strategy,
                    "Strategy mode override (S1|S2|S3|S4|INS_MA|INS_SMA|INS_NMA)");

    // batch
    CommonArgs batch_args;
    std::vector<std::string> batch_strategies;
    bool batch_traces = false;
    auto* batch = app.add_subcommand("batch", "Run the whole cohort, one or more strategies");
    add_common(batch, batch_args, true);
    batch->add_option("--strategy", batch_strategies,
                      "Strategy modes to run (repeatable; default: config strategy)");
    batch->add_flag("--traces", batch_traces, "Also write one trace CSV per run");

    // compare
    CommonArgs cmp_args;
    std::string cmp_comparator = "INS_NMA";
    std::string cmp_strategy = "S2";
    long cmp_bootstrap = 10000;
    auto* cmp = app.add_subcommand("compare",
                                   "Paired comparison of a strategy against a comparator mode");
    add_common(cmp, cmp_args, true);
    cmp->add_option("--comparator", cmp_comparator, "Insulin-alone comparator mode");
    cmp->add_option("--strategy", cmp_strategy, "Pramlintide strategy mode");
    cmp->add_option("--bootstrap", cmp_bootstrap,
                    "Bootstrap resamples for the 95% CI (0 = exhaustive)");

    // tune
    CommonArgs tune_args;
    std::string tune_strategy = "S2";
    bool tune_thresholds = false;
    auto* tune = app.add_subcommand("tune", "Grid-search dose/ratio candidates (or S1 thresholds)");
    add_common(tune, tune_args, true);
    tune->add_option("--strategy", tune_strategy, "Strategy to tune (S1|S2|S3|S4)");
    tune->add_flag("--tune-thresholds", tune_thresholds,
                   "Tune Strategy 1 z-thresholds instead of the dose grid");

    // metrics
    std::string metrics_trace;
    std::string metrics_out;
    bool metrics_true_glucose = false;
    auto* met = app.add_subcommand("metrics", "Recompute glycemic metrics from a trace CSV");
    met->add_option("--trace", metrics_trace, "Trace CSV written by simulate/batch")->required();
    met->add_option("--out", metrics_out, "Output JSON path (default: stdout)");
    met->add_flag("--true-glucose", metrics_true_glucose,
                  "Use the true plasma glucose column instead of the CGM");

    // export-scenario
    CommonArgs exp_args;
    std::string exp_out;
    auto* exp = app.add_subcommand("export-scenario", "Write the configured meal scenario as CSV");
    add_common(exp, exp_args, true);
    exp->add_option("--out", exp_out, "Output CSV path (default: <out-dir>/scenario.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) {
            auto cfg = load_config(sim_args);
            if (!sim_strategy.empty()) {
                cfg.strategy.mode = strategy::mode_from_name(sim_strategy);
                cfg.strategy.validate();
            }
            prepare_out_dir(sim_args.out_dir);
            write_resolved_config(cfg, sim_args.out_dir);
            const auto sc = config::make_scenario(cfg);
            const int patient = find_patient(cfg, sim_patient);
            const auto run = engine::run_closed_loop(config::make_sim_config(cfg, patient, sc));
            if (run.aborted) {
                std::cerr << "run aborted at step " << run.fault_step << ": " << run.fault << "\n";
                return 1;
            }
            io::export_trace(run, join(sim_args.out_dir, "trace.csv"));
            io::RunRecord rec;
            rec.patient_index = patient;
            rec.patient_id = cfg.cohort[static_cast<std::size_t>(patient)].patient_id;
            rec.mode = cfg.strategy.mode;
            rec.metrics = analytics::compute_metrics(run, cfg.metrics_use_cgm);
            io::export_metrics({rec}, {}, join(sim_args.out_dir, "metrics.json"));
            io::write_manifest(io::make_manifest(sim_args.config_path, cfg.master_seed),
                               join(sim_args.out_dir, "manifest.json"));
            std::cout << "wrote " << join(sim_args.out_dir, "trace.csv") << " and metrics.json\n";
            return 0;
        }

        if (batch->parsed()) {
            auto cfg = load_config(batch_args);
            prepare_out_dir(batch_args.out_dir);
            write_resolved_config(cfg, batch_args.out_dir);
            const auto sc = config::make_scenario(cfg);
            std::vector<strategy::StrategyConfig> strategies;
            if (batch_strategies.empty()) {
                strategies.push_back(cfg.strategy);
            } else {
                for (const auto& name : batch_strategies) {
                    auto s = cfg.strategy;
                    s.mode = strategy::mode_from_name(name);
                    s.validate();
                    strategies.push_back(s);
                }
            }
            auto base = config::make_sim_config(cfg, 0, sc);
            const auto results = engine::batch_run(cfg.cohort, strategies, base);
            int aborted = 0;
            for (const auto& [key, run] : results) {
                if (run.aborted) {
                    ++aborted;
                    std::cerr << "aborted: patient " << key.patient << " mode "
                              << strategy::mode_name(key.mode) << ": " << run.fault << "\n";
                } else if (batch_traces) {
                    const auto name = "trace_" +
                                      cfg.cohort[static_cast<std::size_t>(key.patient)].patient_id +
                                      "_" + strategy::mode_name(key.mode) + ".csv";
                    io::export_trace(run, join(batch_args.out_dir, name));
                }
            }
            io::export_metrics(collect_records(cfg, results), {},
                               join(batch_args.out_dir, "metrics.json"));
            io::write_manifest(io::make_manifest(batch_args.config_path, cfg.master_seed),
                               join(batch_args.out_dir, "manifest.json"));
            std::cout << "batch: " << results.size() << " runs, " << aborted << " aborted\n";
            return aborted == 0 ? 0 : 1;
        }

        if (cmp->parsed()) {
            auto cfg = load_config(cmp_args);
            prepare_out_dir(cmp_args.out_dir);
            write_resolved_config(cfg, cmp_args.out_dir);
            const auto sc = config::make_scenario(cfg);
            const auto comparator = strategy::mode_from_name(cmp_comparator);
            const auto strat = strategy::mode_from_name(cmp_strategy);
            std::vector<strategy::StrategyConfig> strategies;
            for (const auto mode : {comparator, strat}) {
                auto s = cfg.strategy;
                s.mode = mode;
                s.validate();
                strategies.push_back(s);
            }
            auto base = config::make_sim_config(cfg, 0, sc);
            const auto results = engine::batch_run(cfg.cohort, strategies, base);
            std::map<engine::BatchKey, analytics::GlycemicMetrics> metrics;
            for (const auto& [key, run] : results) {
                if (run.aborted) {
                    throw std::runtime_error("aborted run for patient " +
                                             std::to_string(key.patient) + ": " + run.fault);
                }
                metrics[key] = analytics::compute_metrics(run, cfg.metrics_use_cgm);
            }
            std::vector<analytics::PairedComparison> comparisons;
            for (const auto& metric : kComparisonMetrics) {
                auto rng = derive_stream(cfg.master_seed, "bootstrap", 0, 0, 0);
                comparisons.push_back(analytics::paired_differences(metrics, comparator, strat,
                                                                    metric, cmp_bootstrap, rng));
            }
            io::export_metrics(collect_records(cfg, results), comparisons,
                               join(cmp_args.out_dir, "metrics.json"));
            io::write_manifest(io::make_manifest(cmp_args.config_path, cfg.master_seed),
                               join(cmp_args.out_dir, "manifest.json"));
            for (const auto& c : comparisons) {
                std::cout << c.metric << ": " << c.strategy << " - " << c.comparator << " = "
                          << c.mean_diff << " [" << c.ci_lo << ", " << c.ci_hi << "]\n";
            }
            return 0;
        }

        if (tune->parsed()) {
            auto cfg = load_config(tune_args);
            prepare_out_dir(tune_args.out_dir);
            const auto mode = strategy::mode_from_name(tune_strategy);
            const auto sc = config::make_scenario(cfg);
            auto base = config::make_sim_config(cfg, 0, sc);
            base.strategy = cfg.strategy;

            if (tune_thresholds) {
                if (mode != strategy::Mode::S1) {
                    throw std::runtime_error("--tune-thresholds applies to strategy S1 only");
                }
                tuning::ThresholdGrids grids;
                grids.z1 = cfg.z1_grid.empty() ? std::vector<double>{1.1, 1.2, 1.5}
                                               : cfg.z1_grid;
                grids.z2 = cfg.z2_grid.empty() ? std::vector<double>{0.1, 0.25, 0.5}
                                               : cfg.z2_grid;
                grids.z3 = cfg.z3_grid.empty() ? std::vector<int>{12, 24, 36} : cfg.z3_grid;
                const auto report = tuning::tune_s1_thresholds(grids, cfg.lambda_for_thresholds,
                                                               cfg.cohort, base, cfg.master_seed);
                config::write_thresholds_file(join(tune_args.out_dir, "s1_thresholds.json"),
                                              report.chosen.z1, report.chosen.z2, report.chosen.z3);
                std::cout << "chosen thresholds: z1=" << report.chosen.z1
                          << " z2=" << report.chosen.z2 << " z3=" << report.chosen.z3 << "\n";
                return 0;
            }

            tuning::TuningGrid grid;
            grid.mode = mode;
            switch (mode) {
                case strategy::Mode::S1:
                case strategy::Mode::S3:
                    grid.candidates = cfg.bolus_grid.empty() ? tuning::default_bolus_grid()
                                                             : cfg.bolus_grid;
                    break;
                case strategy::Mode::S2:
                case strategy::Mode::S4:
                    grid.candidates = cfg.ratio_grid.empty() ? tuning::default_ratio_grid()
                                                             : cfg.ratio_grid;
                    break;
                default:
                    throw std::runtime_error("tune: strategy must be S1|S2|S3|S4");
            }
            const auto report = tuning::run_grid(grid, cfg.cohort, base, cfg.master_seed);
            io::export_tuning_report(report, join(tune_args.out_dir, "tuning_report.json"),
                                     join(tune_args.out_dir, "tuning_boxplot.csv"));
            io::write_manifest(io::make_manifest(tune_args.config_path, cfg.master_seed),
                               join(tune_args.out_dir, "manifest.json"));
            if (report.chosen) {
                std::cout << "chosen candidate: " << *report.chosen << "\n";
                return 0;
            }
            std::cerr << "no valid candidate\n";
            return 1;
        }

        if (met->parsed()) {
            const auto run = io::load_trace(metrics_trace);
            const auto m = analytics::compute_metrics(run, !metrics_true_glucose);
            nlohmann::json j;
            for (const auto& name : analytics::metric_names()) {
                j[name] = analytics::metric_value(m, name);
            }
            if (metrics_out.empty()) {
                std::cout << j.dump(2) << "\n";
            } else {
                std::ofstream out(metrics_out);
                if (!out) throw std::runtime_error("cannot write '" + metrics_out + "'");
                out << j.dump(2) << "\n";
            }
            return 0;
        }

        if (exp->parsed()) {
            auto cfg = load_config(exp_args);
            prepare_out_dir(exp_args.out_dir);
            const auto sc = config::make_scenario(cfg);
            const auto out = exp_out.empty() ? join(exp_args.out_dir, "scenario.csv") : exp_out;
            scenario::export_scenario(sc, out);
            std::cout << "wrote " << out << " (" << sc.meals.size() << " meals)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
