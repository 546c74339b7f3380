#include "pramloop/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace pramloop::config {

using nlohmann::json;

namespace {

/// Strict object reader: every key must be consumed, units are part of the
/// diagnostics.
class ObjReader {
public:
    ObjReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) {
            throw std::invalid_argument("config: " + path_ + " must be an object");
        }
    }

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    double num(const char* key, const char* units) {
        require(key, units);
        return get_number(key, units);
    }

    double num_or(const char* key, const char* units, double def) {
        if (!mark(key)) return def;
        if (j_.at(key).is_null()) return def;
        return get_number(key, units);
    }

    int int_or(const char* key, const char* units, int def) {
        if (!mark(key)) return def;
        if (j_.at(key).is_null()) return def;
        if (!j_.at(key).is_number_integer()) {
            throw std::invalid_argument("config: " + full(key) + " (" + units +
                                        ") must be an integer");
        }
        return j_.at(key).get<int>();
    }

    std::uint64_t u64_or(const char* key, const char* units, std::uint64_t def) {
        if (!mark(key)) return def;
        if (j_.at(key).is_null()) return def;
        if (!j_.at(key).is_number_unsigned() && !j_.at(key).is_number_integer()) {
            throw std::invalid_argument("config: " + full(key) + " (" + units +
                                        ") must be a nonnegative integer");
        }
        return j_.at(key).get<std::uint64_t>();
    }

    bool bool_or(const char* key, bool def) {
        if (!mark(key)) return def;
        if (j_.at(key).is_null()) return def;
        if (!j_.at(key).is_boolean()) {
            throw std::invalid_argument("config: " + full(key) + " must be true or false");
        }
        return j_.at(key).get<bool>();
    }

    std::string str(const char* key, const char* what) {
        require(key, what);
        return get_string(key, what);
    }

    std::string str_or(const char* key, const char* what, const std::string& def) {
        if (!mark(key)) return def;
        if (j_.at(key).is_null()) return def;
        return get_string(key, what);
    }

    const json* obj_opt(const char* key) {
        if (!mark(key)) return nullptr;
        if (j_.at(key).is_null()) return nullptr;
        return &j_.at(key);
    }

    std::vector<double> num_vec_or(const char* key, const char* units,
                                   std::vector<double> def) {
        if (!mark(key)) return def;
        const auto& v = j_.at(key);
        if (v.is_null()) return def;
        if (!v.is_array()) {
            throw std::invalid_argument("config: " + full(key) + " (" + units +
                                        ") must be an array of numbers");
        }
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) {
                throw std::invalid_argument("config: " + full(key) + " (" + units +
                                            ") must be an array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw std::invalid_argument("config: unknown key " + full(it.key().c_str()));
            }
        }
    }

    std::string full(const char* key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    void require(const char* key, const char* what) {
        if (!mark(key) || j_.at(key).is_null()) {
            throw std::invalid_argument("config: " + full(key) + " (" + what + ") required");
        }
    }

    bool mark(const char* key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }

    double get_number(const char* key, const char* units) {
        if (!j_.at(key).is_number()) {
            throw std::invalid_argument("config: " + full(key) + " (" + units +
                                        ") must be a number");
        }
        return j_.at(key).get<double>();
    }

    std::string get_string(const char* key, const char* what) {
        if (!j_.at(key).is_string()) {
            throw std::invalid_argument("config: " + full(key) + " (" + what +
                                        ") must be a string");
        }
        return j_.at(key).get<std::string>();
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty()) return path;
    const std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

pkpd::MealModelParams parse_meal(const json& j, const std::string& path, double bw) {
    ObjReader r(j, path);
    pkpd::MealModelParams m;
    m.k_g21 = r.num_or("k_g21_per_min", "1/min", m.k_g21);
    m.k_abs = r.num_or("k_abs_per_min", "1/min", m.k_abs);
    m.k_min = r.num_or("k_min_per_min", "1/min", m.k_min);
    m.k_max = r.num_or("k_max_per_min", "1/min", m.k_max);
    m.b = r.num_or("b_frac", "dose fraction", m.b);
    m.c = r.num_or("c_frac", "dose fraction", m.c);
    m.f = r.num_or("f_frac", "fraction", m.f);
    r.finish();
    m.bw = bw;
    return m;
}

pkpd::PramlintideParams parse_pram(const json& j, const std::string& path) {
    ObjReader r(j, path);
    pkpd::PramlintideParams p;
    p.a_s = r.num_or("a_s", "fraction", p.a_s);
    p.k_q1 = r.num_or("k_q1_per_min", "1/min", p.k_q1);
    p.k_q12 = r.num_or("k_q12_per_min", "1/min", p.k_q12);
    p.k_q2 = r.num_or("k_q2_per_min", "1/min", p.k_q2);
    p.k_e = r.num_or("k_e_per_min", "1/min", p.k_e);
    p.k_a = r.num_or("k_a_per_min", "1/min", p.k_a);
    p.v_p = r.num_or("V_P_l", "L", p.v_p);
    p.hill_n = r.num_or("hill_n", "dimensionless", p.hill_n);
    p.hill_d = r.num_or("hill_d_pmol", "pmol", p.hill_d);
    p.hill_e = r.num_or("hill_e", "dimensionless", p.hill_e);
    p.molar_mass = r.num_or("molar_mass_g_per_mol", "g/mol", p.molar_mass);
    r.finish();
    return p;
}

patient::PatientParams parse_patient(const json& j, const std::string& path) {
    ObjReader r(j, path);
    patient::PatientParams p;
    p.patient_id = r.str("patient_id", "identifier");
    p.g_b = r.num("G_b_mgdl", "mg/dL");
    p.u_b = r.num("u_b_u_per_step", "U per step");
    p.cir = r.num("CIR_g_per_u", "g/U");
    p.bw = r.num("BW_kg", "kg");
    p.k_u = r.num("K_u_mgdl_per_u", "mg/dL per U/step");
    p.tau1_u = r.num("tau1_u_min", "min");
    p.tau2_u = r.num("tau2_u_min", "min");
    p.k_ra = r.num_or("K_ra_mgdl_per_ra", "mg/dL per mg/kg/min; omit to calibrate", 0.0);
    p.tau1_ra = r.num("tau1_ra_min", "min");
    p.tau2_ra = r.num("tau2_ra_min", "min");
    p.input_delay = r.num_or("input_delay_min", "min", 15.0);
    p.gamma_override = r.num_or("gamma_u_per_g", "U/g; omit for 1/CIR", 0.0);
    const json* meal = r.obj_opt("meal");
    p.meal = meal ? parse_meal(*meal, path + ".meal", p.bw) : pkpd::MealModelParams{};
    p.meal.bw = p.bw;
    const json* pram = r.obj_opt("pram");
    p.pram = pram ? parse_pram(*pram, path + ".pram") : pkpd::PramlintideParams{};
    r.finish();
    return p;
}

strategy::StrategyConfig parse_strategy(const json& j, const std::string& base_dir) {
    ObjReader r(j, "strategy");
    strategy::StrategyConfig s;
    s.mode = strategy::mode_from_name(r.str("mode", "S1|S2|S3|S4|INS_MA|INS_SMA|INS_NMA"));
    s.lambda_ug = r.num_or("lambda_ug", "ug", 30.0);
    s.rho_ug_per_u = r.num_or("rho_ug_per_u", "ug/U", 10.0);
    s.phi_ug = r.num_or("phi_ug", "ug", 15.0);
    s.delta_ug_per_u = r.num_or("delta_ug_per_u", "ug/U", 10.0);
    s.sma_assumed_cho = r.num_or("sma_assumed_cho_g", "g", 25.0);
    const std::string thresholds = r.str_or("thresholds_file", "path", "");
    if (r.has("z1_basal_mult")) s.z1 = r.num("z1_basal_mult", "multiple of basal");
    if (r.has("z2_mgdl_per_min")) s.z2 = r.num("z2_mgdl_per_min", "mg/dL per min");
    if (r.has("z3_steps")) s.z3 = r.int_or("z3_steps", "iterations", 0);
    if (!thresholds.empty()) {
        load_thresholds_file(resolve_path(base_dir, thresholds), s);
    }
    if (s.mode == strategy::Mode::S1) {
        if (!s.z1) {
            throw std::invalid_argument(
                "config: strategy.z1_basal_mult (multiple of basal) required for mode S1");
        }
        if (!s.z2) {
            throw std::invalid_argument(
                "config: strategy.z2_mgdl_per_min (mg/dL per min) required for mode S1");
        }
        if (!s.z3) {
            throw std::invalid_argument(
                "config: strategy.z3_steps (iterations) required for mode S1");
        }
    }
    r.finish();
    s.validate();
    return s;
}

} // namespace

void write_thresholds_file(const std::string& path, double z1, double z2, int z3) {
    json j;
    j["z1_basal_mult"] = z1;
    j["z2_mgdl_per_min"] = z2;
    j["z3_steps"] = z3;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write thresholds file '" + path + "'");
    out << j.dump(2) << "\n";
}

void load_thresholds_file(const std::string& path, strategy::StrategyConfig& strategy) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open thresholds file '" + path + "'");
    json j = json::parse(in);
    ObjReader r(j, "thresholds");
    if (!strategy.z1) strategy.z1 = r.num("z1_basal_mult", "multiple of basal");
    if (!strategy.z2) strategy.z2 = r.num("z2_mgdl_per_min", "mg/dL per min");
    if (!strategy.z3) strategy.z3 = r.int_or("z3_steps", "iterations", 0);
}

FullConfig parse_config_json(const json& j, const std::string& base_dir) {
    ObjReader r(j, "");
    FullConfig cfg;
    cfg.schema_version = r.int_or("schema_version", "version", 1);
    if (cfg.schema_version != 1) {
        throw std::invalid_argument("config: unsupported schema_version " +
                                    std::to_string(cfg.schema_version));
    }
    cfg.master_seed = r.u64_or("master_seed", "seed", 0);
    cfg.duration_days = r.int_or("duration_days", "days", 0);
    cfg.sampling_period_min = r.num_or("sampling_period_min", "min", 5.0);
    cfg.integrator_substeps = r.int_or("integrator_substeps", "count", 10);
    cfg.metrics_use_cgm = r.bool_or("metrics_use_cgm", true);
    cfg.allow_suspension = r.bool_or("allow_suspension", true);
    cfg.ra_target_excursion = r.num_or("ra_target_excursion_mgdl", "mg/dL", 120.0);

    if (const json* sensor = r.obj_opt("sensor")) {
        ObjReader sr(*sensor, "sensor");
        cfg.sensor.noise_sd = sr.num_or("noise_sd_mgdl", "mg/dL", 5.0);
        cfg.sensor.ar1_coeff = sr.num_or("ar1_coeff", "dimensionless", 0.7);
        sr.finish();
    }
    if (const json* var = r.obj_opt("variability")) {
        ObjReader vr(*var, "variability");
        cfg.variability.kabs_pct = vr.num_or("kabs_pct", "fraction", 0.30);
        cfg.variability.f_pct = vr.num_or("f_pct", "fraction", 0.10);
        cfg.variability.insulin_pk_pct = vr.num_or("insulin_pk_pct", "fraction", 0.30);
        cfg.variability.circadian_amp_max = vr.num_or("circadian_amp_max", "fraction", 0.30);
        cfg.misestimation.error_lo = vr.num_or("cho_error_lo_pct", "fraction", 0.30);
        cfg.misestimation.error_hi = vr.num_or("cho_error_hi_pct", "fraction", 0.30);
        vr.finish();
    }
    if (const json* ctl = r.obj_opt("controller")) {
        ObjReader cr(*ctl, "controller");
        cfg.gamma_u_per_g = cr.num_or("gamma_u_per_g", "U/g; null for 1/CIR", 0.0);
        cfg.theta_min = cr.num_or("theta_min", "min", 15.0);
        cfg.delay_min = cr.num_or("delay_min", "min", 15.0);
        cfg.nu = cr.num_or("nu", "fraction", 0.8);
        cr.finish();
    }

    const json* strat = r.obj_opt("strategy");
    if (!strat) {
        throw std::invalid_argument("config: strategy section required");
    }
    cfg.strategy = parse_strategy(*strat, base_dir);

    if (const json* sc = r.obj_opt("scenario")) {
        ObjReader scr(*sc, "scenario");
        cfg.scenario_kind = scr.str_or("kind", "tuning|file", "tuning");
        if (cfg.scenario_kind != "tuning" && cfg.scenario_kind != "file") {
            throw std::invalid_argument("config: scenario.kind must be 'tuning' or 'file'");
        }
        cfg.scenario_days = scr.int_or("days", "days", 14);
        cfg.scenario_file = resolve_path(base_dir, scr.str_or("file", "path", ""));
        auto& t = cfg.tuning_scenario;
        t.mean_time_min[0] = scr.num_or("breakfast_time_min", "min since midnight", 480.0);
        t.mean_time_min[1] = scr.num_or("lunch_time_min", "min since midnight", 780.0);
        t.mean_time_min[2] = scr.num_or("dinner_time_min", "min since midnight", 1200.0);
        t.nominal_grams[0] = scr.num_or("breakfast_grams_g", "g", 35.0);
        t.nominal_grams[1] = scr.num_or("lunch_grams_g", "g", 50.0);
        t.nominal_grams[2] = scr.num_or("dinner_grams_g", "g", 85.0);
        t.time_sd_min = scr.num_or("time_sd_min", "min", 20.0);
        t.grams_cv = scr.num_or("grams_cv", "fraction", 0.30);
        t.min_grams = scr.num_or("min_grams_g", "g", 5.0);
        scr.finish();
        if (cfg.scenario_kind == "file" && cfg.scenario_file.empty()) {
            throw std::invalid_argument("config: scenario.file (path) required for kind 'file'");
        }
    }

    const bool has_inline = r.has("cohort");
    const std::string cohort_file = r.str_or("cohort_file", "path", "");
    if (has_inline == !cohort_file.empty()) {
        throw std::invalid_argument("config: exactly one of cohort or cohort_file required");
    }
    json cohort_json;
    if (!cohort_file.empty()) {
        const std::string resolved = resolve_path(base_dir, cohort_file);
        std::ifstream in(resolved);
        if (!in) throw std::runtime_error("config: cannot open cohort file '" + resolved + "'");
        cohort_json = json::parse(in);
    } else {
        const json* inline_cohort = r.obj_opt("cohort");
        cohort_json = *inline_cohort;
    }
    if (!cohort_json.is_array() || cohort_json.empty()) {
        throw std::invalid_argument("config: cohort must be a non-empty array");
    }
    for (std::size_t i = 0; i < cohort_json.size(); ++i) {
        cfg.cohort.push_back(
            parse_patient(cohort_json[i], "cohort[" + std::to_string(i) + "]"));
    }

    if (const json* tj = r.obj_opt("tuning")) {
        ObjReader tr(*tj, "tuning");
        cfg.bolus_grid = tr.num_vec_or("bolus_grid_ug", "ug", {});
        cfg.ratio_grid = tr.num_vec_or("ratio_grid_ug_per_u", "ug/U", {});
        cfg.z1_grid = tr.num_vec_or("z1_grid", "multiple of basal", {});
        cfg.z2_grid = tr.num_vec_or("z2_grid", "mg/dL per min", {});
        const auto z3 = tr.num_vec_or("z3_grid", "iterations", {});
        for (double v : z3) cfg.z3_grid.push_back(static_cast<int>(v));
        cfg.lambda_for_thresholds = tr.num_or("lambda_for_thresholds_ug", "ug", 30.0);
        tr.finish();
    }
    r.finish();

    // Resolve the Ra channel gains; patients without K_ra are calibrated so a
    // reference 50 g meal peaks at the configured excursion.
    for (auto& p : cfg.cohort) {
        if (p.k_ra <= 0.0) {
            p.k_ra = patient::calibrate_ra_gain(p, cfg.sampling_period_min,
                                                cfg.integrator_substeps,
                                                cfg.ra_target_excursion);
        }
        p.validate(cfg.sampling_period_min);
    }
    return cfg;
}

FullConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config_json(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::json to_json(const FullConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["master_seed"] = cfg.master_seed;
    j["duration_days"] = cfg.duration_days;
    j["sampling_period_min"] = cfg.sampling_period_min;
    j["integrator_substeps"] = cfg.integrator_substeps;
    j["metrics_use_cgm"] = cfg.metrics_use_cgm;
    j["allow_suspension"] = cfg.allow_suspension;
    j["ra_target_excursion_mgdl"] = cfg.ra_target_excursion;
    j["sensor"] = {{"noise_sd_mgdl", cfg.sensor.noise_sd}, {"ar1_coeff", cfg.sensor.ar1_coeff}};
    j["variability"] = {{"kabs_pct", cfg.variability.kabs_pct},
                        {"f_pct", cfg.variability.f_pct},
                        {"insulin_pk_pct", cfg.variability.insulin_pk_pct},
                        {"circadian_amp_max", cfg.variability.circadian_amp_max},
                        {"cho_error_lo_pct", cfg.misestimation.error_lo},
                        {"cho_error_hi_pct", cfg.misestimation.error_hi}};
    j["controller"] = {{"gamma_u_per_g", cfg.gamma_u_per_g},
                       {"theta_min", cfg.theta_min},
                       {"delay_min", cfg.delay_min},
                       {"nu", cfg.nu}};
    json s;
    s["mode"] = strategy::mode_name(cfg.strategy.mode);
    s["lambda_ug"] = cfg.strategy.lambda_ug;
    s["rho_ug_per_u"] = cfg.strategy.rho_ug_per_u;
    s["phi_ug"] = cfg.strategy.phi_ug;
    s["delta_ug_per_u"] = cfg.strategy.delta_ug_per_u;
    s["sma_assumed_cho_g"] = cfg.strategy.sma_assumed_cho;
    if (cfg.strategy.z1) s["z1_basal_mult"] = *cfg.strategy.z1;
    if (cfg.strategy.z2) s["z2_mgdl_per_min"] = *cfg.strategy.z2;
    if (cfg.strategy.z3) s["z3_steps"] = *cfg.strategy.z3;
    j["strategy"] = s;
    json sc;
    sc["kind"] = cfg.scenario_kind;
    sc["days"] = cfg.scenario_days;
    if (!cfg.scenario_file.empty()) sc["file"] = cfg.scenario_file;
    sc["breakfast_time_min"] = cfg.tuning_scenario.mean_time_min[0];
    sc["lunch_time_min"] = cfg.tuning_scenario.mean_time_min[1];
    sc["dinner_time_min"] = cfg.tuning_scenario.mean_time_min[2];
    sc["breakfast_grams_g"] = cfg.tuning_scenario.nominal_grams[0];
    sc["lunch_grams_g"] = cfg.tuning_scenario.nominal_grams[1];
    sc["dinner_grams_g"] = cfg.tuning_scenario.nominal_grams[2];
    sc["time_sd_min"] = cfg.tuning_scenario.time_sd_min;
    sc["grams_cv"] = cfg.tuning_scenario.grams_cv;
    sc["min_grams_g"] = cfg.tuning_scenario.min_grams;
    j["scenario"] = sc;
    json cohort = json::array();
    for (const auto& p : cfg.cohort) {
        json pj;
        pj["patient_id"] = p.patient_id;
        pj["G_b_mgdl"] = p.g_b;
        pj["u_b_u_per_step"] = p.u_b;
        pj["CIR_g_per_u"] = p.cir;
        pj["BW_kg"] = p.bw;
        pj["K_u_mgdl_per_u"] = p.k_u;
        pj["tau1_u_min"] = p.tau1_u;
        pj["tau2_u_min"] = p.tau2_u;
        pj["K_ra_mgdl_per_ra"] = p.k_ra;
        pj["tau1_ra_min"] = p.tau1_ra;
        pj["tau2_ra_min"] = p.tau2_ra;
        pj["input_delay_min"] = p.input_delay;
        if (p.gamma_override > 0.0) pj["gamma_u_per_g"] = p.gamma_override;
        pj["meal"] = {{"k_g21_per_min", p.meal.k_g21}, {"k_abs_per_min", p.meal.k_abs},
                      {"k_min_per_min", p.meal.k_min}, {"k_max_per_min", p.meal.k_max},
                      {"b_frac", p.meal.b},            {"c_frac", p.meal.c},
                      {"f_frac", p.meal.f}};
        pj["pram"] = {{"a_s", p.pram.a_s},
                      {"k_q1_per_min", p.pram.k_q1},
                      {"k_q12_per_min", p.pram.k_q12},
                      {"k_q2_per_min", p.pram.k_q2},
                      {"k_e_per_min", p.pram.k_e},
                      {"k_a_per_min", p.pram.k_a},
                      {"V_P_l", p.pram.v_p},
                      {"hill_n", p.pram.hill_n},
                      {"hill_d_pmol", p.pram.hill_d},
                      {"hill_e", p.pram.hill_e},
                      {"molar_mass_g_per_mol", p.pram.molar_mass}};
        cohort.push_back(pj);
    }
    j["cohort"] = cohort;
    if (!cfg.bolus_grid.empty() || !cfg.ratio_grid.empty() || !cfg.z1_grid.empty() ||
        !cfg.z2_grid.empty() || !cfg.z3_grid.empty() || cfg.lambda_for_thresholds != 30.0) {
        json t;
        if (!cfg.bolus_grid.empty()) t["bolus_grid_ug"] = cfg.bolus_grid;
        if (!cfg.ratio_grid.empty()) t["ratio_grid_ug_per_u"] = cfg.ratio_grid;
        if (!cfg.z1_grid.empty()) t["z1_grid"] = cfg.z1_grid;
        if (!cfg.z2_grid.empty()) t["z2_grid"] = cfg.z2_grid;
        if (!cfg.z3_grid.empty()) t["z3_grid"] = cfg.z3_grid;
        t["lambda_for_thresholds_ug"] = cfg.lambda_for_thresholds;
        j["tuning"] = t;
    }
    return j;
}

scenario::Scenario make_scenario(const FullConfig& cfg) {
    if (cfg.scenario_kind == "file") {
        return scenario::load_scenario(cfg.scenario_file);
    }
    auto rng = derive_stream(cfg.master_seed, "scenario", 0, 0, 0);
    return scenario::gen_tuning_scenario(rng, cfg.scenario_days, cfg.tuning_scenario);
}

control::ControllerParams controller_template(const FullConfig& cfg) {
    control::ControllerParams tmpl;
    tmpl.gamma = cfg.gamma_u_per_g;
    tmpl.theta = cfg.theta_min;
    tmpl.delay = cfg.delay_min;
    tmpl.nu = cfg.nu;
    tmpl.h = cfg.sampling_period_min;
    tmpl.allow_suspension = cfg.allow_suspension;
    return tmpl;
}

engine::SimConfig make_sim_config(const FullConfig& cfg, int patient_index,
                                  const scenario::Scenario& sc) {
    if (patient_index < 0 || patient_index >= static_cast<int>(cfg.cohort.size())) {
        throw std::invalid_argument("make_sim_config: patient index out of range");
    }
    engine::SimConfig sim;
    sim.patient = cfg.cohort[static_cast<std::size_t>(patient_index)];
    sim.controller =
        engine::controller_for_patient(sim.patient, controller_template(cfg), cfg.sampling_period_min);
    sim.strategy = cfg.strategy;
    sim.scenario = sc;
    sim.master_seed = cfg.master_seed;
    sim.subject_index = patient_index;
    sim.duration_days = cfg.duration_days;
    sim.h = cfg.sampling_period_min;
    sim.substeps = cfg.integrator_substeps;
    sim.variability = cfg.variability;
    sim.misestimation = cfg.misestimation;
    sim.sensor = cfg.sensor;
    return sim;
}

} // namespace pramloop::config
