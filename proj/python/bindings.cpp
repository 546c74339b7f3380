#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pramloop/config.hpp"
#include "pramloop/io.hpp"
#include "pramloop/metrics.hpp"

namespace py = pybind11;
using namespace pramloop;

namespace {

py::dict metrics_dict(const analytics::GlycemicMetrics& m) {
    py::dict d;
    for (const auto& name : analytics::metric_names()) {
        d[name.c_str()] = analytics::metric_value(m, name);
    }
    return d;
}

py::dict run_dict(const engine::RunResult& run, bool use_cgm) {
    py::dict d;
    std::vector<double> t, g_true, g_cgm, u_bas, u_inf, u_bol, p_inf, p_bol, ra, eta, d_hat;
    for (const auto& r : run.trace) {
        t.push_back(r.t);
        g_true.push_back(r.g_true);
        g_cgm.push_back(r.g_cgm);
        u_bas.push_back(r.u_basal);
        u_inf.push_back(r.u_infusion);
        u_bol.push_back(r.u_bolus);
        p_inf.push_back(r.p_infusion);
        p_bol.push_back(r.p_bolus);
        ra.push_back(r.ra);
        eta.push_back(r.eta);
        d_hat.push_back(r.d_hat);
    }
    d["t_min"] = t;
    d["g_true"] = g_true;
    d["g_cgm"] = g_cgm;
    d["u_basal"] = u_bas;
    d["u_infusion"] = u_inf;
    d["u_bolus"] = u_bol;
    d["p_infusion"] = p_inf;
    d["p_bolus"] = p_bol;
    d["ra"] = ra;
    d["eta"] = eta;
    d["d_hat"] = d_hat;
    d["daily_insulin"] = run.daily_insulin;
    d["daily_pramlintide"] = run.daily_pramlintide;
    d["aborted"] = run.aborted;
    if (run.aborted) {
        d["fault"] = run.fault;
    } else {
        d["metrics"] = metrics_dict(analytics::compute_metrics(run, use_cgm));
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_pramloop, m) {
    m.doc() = "Closed-loop insulin-plus-pramlintide dosing simulator";
    m.attr("__version__") = PRAMLOOP_VERSION;

    py::class_<pkpd::PramlintideParams>(m, "PramlintideParams")
        .def(py::init<>())
        .def_readwrite("a_s", &pkpd::PramlintideParams::a_s)
        .def_readwrite("k_q1", &pkpd::PramlintideParams::k_q1)
        .def_readwrite("k_q12", &pkpd::PramlintideParams::k_q12)
        .def_readwrite("k_q2", &pkpd::PramlintideParams::k_q2)
        .def_readwrite("k_e", &pkpd::PramlintideParams::k_e)
        .def_readwrite("k_a", &pkpd::PramlintideParams::k_a)
        .def_readwrite("v_p", &pkpd::PramlintideParams::v_p)
        .def_readwrite("hill_n", &pkpd::PramlintideParams::hill_n)
        .def_readwrite("hill_d", &pkpd::PramlintideParams::hill_d)
        .def_readwrite("hill_e", &pkpd::PramlintideParams::hill_e)
        .def_readwrite("molar_mass", &pkpd::PramlintideParams::molar_mass);

    py::class_<pkpd::MealModelParams>(m, "MealModelParams")
        .def(py::init<>())
        .def_readwrite("k_g21", &pkpd::MealModelParams::k_g21)
        .def_readwrite("k_abs", &pkpd::MealModelParams::k_abs)
        .def_readwrite("k_min", &pkpd::MealModelParams::k_min)
        .def_readwrite("k_max", &pkpd::MealModelParams::k_max)
        .def_readwrite("b", &pkpd::MealModelParams::b)
        .def_readwrite("c", &pkpd::MealModelParams::c)
        .def_readwrite("f", &pkpd::MealModelParams::f)
        .def_readwrite("bw", &pkpd::MealModelParams::bw);

    m.def("convert_pram_dose", &pkpd::convert_pram_dose, py::arg("dose_ug"), py::arg("params"),
          "Convert a pramlintide dose from ug to pmol");
    m.def("hill_h", &pkpd::hill_h, py::arg("peff"), py::arg("params"));
    m.def("eta_factor", &pkpd::eta_factor, py::arg("peff"), py::arg("params"),
          "Gastric-emptying attenuation in (1/(1+n), 1]");
    m.def("kempt_rate", &pkpd::kempt_rate, py::arg("q_sto"), py::arg("d_mg"), py::arg("params"),
          "State-dependent gastric emptying rate, 1/min");

    m.def(
        "time_percentages",
        [](const std::vector<double>& glucose) {
            return metrics_dict(analytics::glucose_percentages(glucose));
        },
        py::arg("glucose"), "Time-in-range percentages of a glucose series");
    m.def(
        "risk_indices",
        [](const std::vector<double>& glucose) { return analytics::lbgi_hbgi(glucose); },
        py::arg("glucose"), "(LBGI, HBGI) of a glucose series");

    py::class_<config::FullConfig>(m, "Config")
        .def_property_readonly("master_seed",
                               [](const config::FullConfig& c) { return c.master_seed; })
        .def_property_readonly("n_patients",
                               [](const config::FullConfig& c) { return c.cohort.size(); })
        .def_property_readonly(
            "mode", [](const config::FullConfig& c) { return strategy::mode_name(c.strategy.mode); })
        .def_property_readonly("patient_ids", [](const config::FullConfig& c) {
            std::vector<std::string> ids;
            for (const auto& p : c.cohort) ids.push_back(p.patient_id);
            return ids;
        });

    m.def("load_config", &config::parse_config, py::arg("path"),
          "Parse and resolve a run configuration file");

    m.def(
        "scenario_meals",
        [](const config::FullConfig& cfg) {
            const auto sc = config::make_scenario(cfg);
            py::list out;
            for (const auto& meal : sc.meals) {
                py::dict d;
                d["day"] = meal.day;
                d["time_min"] = meal.time_min;
                d["grams"] = meal.grams;
                d["type"] = scenario::meal_type_name(meal.type);
                out.append(d);
            }
            return out;
        },
        py::arg("config"), "The configured meal scenario as a list of dicts");

    m.def(
        "run_simulation",
        [](const config::FullConfig& cfg_in, int patient, const std::string& mode,
           py::object seed) {
            config::FullConfig cfg = cfg_in;
            if (!mode.empty()) {
                cfg.strategy.mode = strategy::mode_from_name(mode);
                cfg.strategy.validate();
            }
            if (!seed.is_none()) {
                cfg.master_seed = seed.cast<std::uint64_t>();
            }
            const auto sc = config::make_scenario(cfg);
            const auto run = engine::run_closed_loop(config::make_sim_config(cfg, patient, sc));
            return run_dict(run, cfg.metrics_use_cgm);
        },
        py::arg("config"), py::arg("patient") = 0, py::arg("mode") = std::string(),
        py::arg("seed") = py::none(), "Run one patient through the closed loop");

    m.def(
        "run_batch",
        [](const config::FullConfig& cfg, const std::vector<std::string>& modes) {
            const auto sc = config::make_scenario(cfg);
            std::vector<strategy::StrategyConfig> strategies;
            for (const auto& name : modes) {
                auto s = cfg.strategy;
                s.mode = strategy::mode_from_name(name);
                s.validate();
                strategies.push_back(s);
            }
            if (strategies.empty()) strategies.push_back(cfg.strategy);
            auto base = config::make_sim_config(cfg, 0, sc);
            const auto results = engine::batch_run(cfg.cohort, strategies, base);
            py::list out;
            for (const auto& [key, run] : results) {
                py::dict d;
                d["patient"] = key.patient;
                d["patient_id"] = cfg.cohort[static_cast<std::size_t>(key.patient)].patient_id;
                d["mode"] = strategy::mode_name(key.mode);
                d["aborted"] = run.aborted;
                if (!run.aborted) {
                    d["metrics"] = metrics_dict(analytics::compute_metrics(run, cfg.metrics_use_cgm));
                }
                out.append(d);
            }
            return out;
        },
        py::arg("config"), py::arg("modes") = std::vector<std::string>{},
        "Run the cohort under the given modes; results are paired per patient");

    m.def(
        "compare",
        [](const config::FullConfig& cfg, const std::string& comparator, const std::string& strat,
           const std::string& metric, long bootstrap_n) {
            const auto sc = config::make_scenario(cfg);
            const auto cmode = strategy::mode_from_name(comparator);
            const auto smode = strategy::mode_from_name(strat);
            std::vector<strategy::StrategyConfig> strategies;
            for (const auto mode : {cmode, smode}) {
                auto s = cfg.strategy;
                s.mode = mode;
                s.validate();
                strategies.push_back(s);
            }
            auto base = config::make_sim_config(cfg, 0, sc);
            const auto results = engine::batch_run(cfg.cohort, strategies, base);
            std::map<engine::BatchKey, analytics::GlycemicMetrics> metrics;
            for (const auto& [key, run] : results) {
                if (run.aborted) throw std::runtime_error("aborted run: " + run.fault);
                metrics[key] = analytics::compute_metrics(run, cfg.metrics_use_cgm);
            }
            auto rng = derive_stream(cfg.master_seed, "bootstrap", 0, 0, 0);
            const auto cmp =
                analytics::paired_differences(metrics, cmode, smode, metric, bootstrap_n, rng);
            py::dict d;
            d["comparator"] = cmp.comparator;
            d["strategy"] = cmp.strategy;
            d["metric"] = cmp.metric;
            d["mean_diff"] = cmp.mean_diff;
            d["ci95"] = py::make_tuple(cmp.ci_lo, cmp.ci_hi);
            d["per_subject"] = cmp.per_subject;
            return d;
        },
        py::arg("config"), py::arg("comparator"), py::arg("strategy"),
        py::arg("metric") = std::string("pct_in_70_180"), py::arg("bootstrap_n") = 10000,
        "Paired strategy-minus-comparator difference with a bootstrap 95% CI");
}
