#pragma once

#include <array>
#include <string>
#include <vector>

#include "pramloop/rng.hpp"

namespace pramloop::scenario {

enum class MealType { Breakfast, Lunch, Dinner, Snack };

std::string meal_type_name(MealType type);
MealType meal_type_from_name(const std::string& name);

struct MealEvent {
    int day = 1;            // 1-based
    int time_min = 0;       // minutes since day start, [0, 1440)
    double grams = 0.0;     // carbohydrates, g
    MealType type = MealType::Breakfast;

    double abs_time() const { return (day - 1) * 1440.0 + time_min; }
    bool is_snack() const { return type == MealType::Snack; }
};

struct Scenario {
    int duration_days = 0;
    std::vector<MealEvent> meals;          // sorted by absolute time
    std::vector<double> announce_errors;   // optional pinned misestimation
                                           // fractions, one per meal; empty =
                                           // draw from the run's streams
    std::string label;
};

/// Distribution of the randomized tuning scenario: three daily meals with
/// normal times and lognormal-free normal gram variation.
struct TuningScenarioConfig {
    std::array<double, 3> mean_time_min{480.0, 780.0, 1200.0};
    std::array<double, 3> nominal_grams{35.0, 50.0, 85.0};
    double time_sd_min = 20.0;
    double grams_cv = 0.30;
    double min_grams = 5.0;
};

/// Three daily random meals for `days` days; deterministic per rng. Times
/// round to whole minutes and grams to two decimals so scenarios survive the
/// meal-table interchange format unchanged.
Scenario gen_tuning_scenario(Rng& rng, int days, const TuningScenarioConfig& cfg);

/// Loads a meal table: header line, then day,meal_type,HH:MM,grams rows.
/// Malformed rows, non-positive grams and duplicate (day,time) pairs are
/// load errors naming the offending row.
Scenario load_scenario(const std::string& path);

/// Writes the meal-table format above (grams with two decimals).
void export_scenario(const Scenario& scenario, const std::string& path);

struct MisestimationConfig {
    double error_lo = 0.30; // lower relative bound (subtracted)
    double error_hi = 0.30; // upper relative bound (added)
};

/// true_grams * (1 + eps), eps uniform on [-error_lo, +error_hi], floored at 0.
double misestimate_cho(double true_grams, Rng& rng, const MisestimationConfig& cfg);

} // namespace pramloop::scenario
