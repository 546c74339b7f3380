#include "pramloop/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pramloop::scenario {

std::string meal_type_name(MealType type) {
    switch (type) {
        case MealType::Breakfast: return "breakfast";
        case MealType::Lunch: return "lunch";
        case MealType::Dinner: return "dinner";
        case MealType::Snack: return "snack";
    }
    throw std::logic_error("meal_type_name: unknown type");
}

MealType meal_type_from_name(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "breakfast") return MealType::Breakfast;
    if (lower == "lunch") return MealType::Lunch;
    if (lower == "dinner") return MealType::Dinner;
    if (lower == "snack") return MealType::Snack;
    throw std::invalid_argument("unknown meal type '" + name + "'");
}

namespace {

void sort_and_check(Scenario& s, bool nudge_duplicates) {
    std::stable_sort(s.meals.begin(), s.meals.end(), [](const MealEvent& a, const MealEvent& b) {
        return a.abs_time() < b.abs_time();
    });
    for (std::size_t i = 1; i < s.meals.size(); ++i) {
        while (s.meals[i].abs_time() <= s.meals[i - 1].abs_time()) {
            if (!nudge_duplicates) {
                throw std::runtime_error("scenario: duplicate meal time on day " +
                                         std::to_string(s.meals[i].day));
            }
            s.meals[i].time_min += 1;
        }
    }
    for (const auto& m : s.meals) {
        if (m.day > s.duration_days) s.duration_days = m.day;
    }
}

} // namespace

Scenario gen_tuning_scenario(Rng& rng, int days, const TuningScenarioConfig& cfg) {
    if (days < 1) throw std::invalid_argument("gen_tuning_scenario: days must be >= 1");
    static constexpr MealType kTypes[3] = {MealType::Breakfast, MealType::Lunch,
                                           MealType::Dinner};
    Scenario s;
    s.duration_days = days;
    s.label = "tuning";
    for (int day = 1; day <= days; ++day) {
        for (int i = 0; i < 3; ++i) {
            const double t = rng.normal(cfg.mean_time_min[static_cast<std::size_t>(i)],
                                        cfg.time_sd_min);
            const double g = cfg.nominal_grams[static_cast<std::size_t>(i)] *
                             (1.0 + cfg.grams_cv * rng.normal());
            MealEvent m;
            m.day = day;
            m.time_min = static_cast<int>(std::min(1439.0, std::max(0.0, std::round(t))));
            m.grams = std::round(std::max(cfg.min_grams, g) * 100.0) / 100.0;
            m.type = kTypes[i];
            s.meals.push_back(m);
        }
    }
    sort_and_check(s, true);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("scenario: cannot open '" + path + "'");
    }
    Scenario s;
    s.label = "file:" + path;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("scenario: '" + path + "' is empty (header required)");
    }
    std::set<std::pair<int, int>> seen;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string day_s, type_s, time_s, grams_s;
        if (!std::getline(ss, day_s, ',') || !std::getline(ss, type_s, ',') ||
            !std::getline(ss, time_s, ',') || !std::getline(ss, grams_s)) {
            throw std::runtime_error("scenario: row " + std::to_string(row) +
                                     ": expected day,meal_type,HH:MM,grams");
        }
        MealEvent m;
        try {
            m.day = std::stoi(day_s);
            m.type = meal_type_from_name(type_s);
            const auto colon = time_s.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("time");
            const int hh = std::stoi(time_s.substr(0, colon));
            const int mm = std::stoi(time_s.substr(colon + 1));
            if (hh < 0 || hh > 23 || mm < 0 || mm > 59) throw std::invalid_argument("time");
            m.time_min = hh * 60 + mm;
            m.grams = std::stod(grams_s);
        } catch (const std::exception&) {
            throw std::runtime_error("scenario: row " + std::to_string(row) +
                                     ": malformed field in '" + line + "'");
        }
        if (m.day < 1) {
            throw std::runtime_error("scenario: row " + std::to_string(row) + ": day must be >= 1");
        }
        if (m.grams <= 0.0) {
            throw std::runtime_error("scenario: row " + std::to_string(row) +
                                     ": grams must be > 0");
        }
        if (!seen.insert({m.day, m.time_min}).second) {
            throw std::runtime_error("scenario: row " + std::to_string(row) +
                                     ": duplicate meal at day " + std::to_string(m.day) + " " +
                                     time_s);
        }
        s.meals.push_back(m);
    }
    if (s.meals.empty()) {
        throw std::runtime_error("scenario: '" + path + "' contains no meals");
    }
    sort_and_check(s, false);
    return s;
}

void export_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("scenario: cannot write '" + path + "'");
    }
    out << "day,meal_type,HH:MM,grams\n";
    char buf[96];
    for (const auto& m : scenario.meals) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%02d:%02d,%.2f\n", m.day,
                      meal_type_name(m.type).c_str(), m.time_min / 60, m.time_min % 60, m.grams);
        out << buf;
    }
    if (!out) {
        throw std::runtime_error("scenario: write failed for '" + path + "'");
    }
}

double misestimate_cho(double true_grams, Rng& rng, const MisestimationConfig& cfg) {
    if (true_grams <= 0.0) {
        throw std::invalid_argument("misestimate_cho: grams must be > 0");
    }
    if (cfg.error_lo < 0.0 || cfg.error_hi < 0.0) {
        throw std::invalid_argument("misestimate_cho: bounds must be >= 0");
    }
    double eps = 0.0;
    if (cfg.error_lo > 0.0 || cfg.error_hi > 0.0) {
        eps = rng.uniform(-cfg.error_lo, cfg.error_hi);
    }
    return std::max(0.0, true_grams * (1.0 + eps));
}

} // namespace pramloop::scenario
