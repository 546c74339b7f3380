#include "pramloop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pramloop::analytics {

GlycemicMetrics glucose_percentages(std::span<const double> glucose) {
    if (glucose.empty()) {
        throw std::invalid_argument("glucose_percentages: empty trace");
    }
    long below54 = 0, below70 = 0, in_range = 0, above180 = 0, above250 = 0;
    for (double g : glucose) {
        if (g < 54.0) ++below54;
        if (g < 70.0) {
            ++below70;
        } else if (g <= 180.0) {
            ++in_range;
        } else {
            ++above180;
        }
        if (g > 250.0) ++above250;
    }
    const double n = static_cast<double>(glucose.size());
    GlycemicMetrics m;
    m.pct_below_54 = 100.0 * static_cast<double>(below54) / n;
    m.pct_below_70 = 100.0 * static_cast<double>(below70) / n;
    m.pct_in_70_180 = 100.0 * static_cast<double>(in_range) / n;
    m.pct_above_180 = 100.0 * static_cast<double>(above180) / n;
    m.pct_above_250 = 100.0 * static_cast<double>(above250) / n;
    return m;
}

namespace {

double risk_f(double g) {
    if (g <= 0.0) {
        throw std::invalid_argument("lbgi_hbgi: glucose must be > 0");
    }
    return 1.509 * (std::pow(std::log(g), 1.084) - 5.381);
}

} // namespace

std::pair<double, double> lbgi_hbgi(std::span<const double> glucose) {
    if (glucose.empty()) {
        throw std::invalid_argument("lbgi_hbgi: empty trace");
    }
    double lo = 0.0;
    double hi = 0.0;
    for (double g : glucose) {
        const double f = risk_f(g);
        const double r = 10.0 * f * f;
        if (f < 0.0) {
            lo += r;
        } else if (f > 0.0) {
            hi += r;
        }
    }
    const double n = static_cast<double>(glucose.size());
    return {lo / n, hi / n};
}

GlycemicMetrics compute_metrics(const engine::RunResult& result, bool use_cgm) {
    if (result.trace.empty()) {
        throw std::invalid_argument("compute_metrics: empty trace");
    }
    std::vector<double> glucose;
    glucose.reserve(result.trace.size());
    for (const auto& row : result.trace) {
        glucose.push_back(use_cgm ? row.g_cgm : row.g_true);
    }
    GlycemicMetrics m = glucose_percentages(glucose);
    const auto risk = lbgi_hbgi(glucose);
    m.lbgi = risk.first;
    m.hbgi = risk.second;
    if (!result.daily_insulin.empty()) {
        double total = 0.0;
        for (double v : result.daily_insulin) total += v;
        m.daily_insulin = total / static_cast<double>(result.daily_insulin.size());
    }
    if (!result.daily_pramlintide.empty()) {
        double total = 0.0;
        for (double v : result.daily_pramlintide) total += v;
        m.daily_pramlintide = total / static_cast<double>(result.daily_pramlintide.size());
    }
    return m;
}

double metric_value(const GlycemicMetrics& m, const std::string& name) {
    if (name == "pct_below_54") return m.pct_below_54;
    if (name == "pct_below_70") return m.pct_below_70;
    if (name == "pct_in_70_180") return m.pct_in_70_180;
    if (name == "pct_above_180") return m.pct_above_180;
    if (name == "pct_above_250") return m.pct_above_250;
    if (name == "lbgi") return m.lbgi;
    if (name == "hbgi") return m.hbgi;
    if (name == "daily_insulin") return m.daily_insulin;
    if (name == "daily_pramlintide") return m.daily_pramlintide;
    throw std::invalid_argument("unknown metric '" + name + "'");
}

std::vector<std::string> metric_names() {
    return {"pct_below_54", "pct_below_70", "pct_in_70_180", "pct_above_180",
            "pct_above_250", "lbgi",        "hbgi",          "daily_insulin",
            "daily_pramlintide"};
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw std::invalid_argument("quantile: empty sample");
    }
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("quantile: p must be in [0,1]");
    }
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto idx = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(idx);
    if (idx + 1 < values.size()) {
        return values[idx] * (1.0 - frac) + values[idx + 1] * frac;
    }
    return values[idx];
}

double median(std::vector<double> values) {
    return quantile(std::move(values), 0.5);
}

PairedComparison paired_differences(
    const std::map<engine::BatchKey, GlycemicMetrics>& metrics, strategy::Mode comparator,
    strategy::Mode strat, const std::string& metric, long bootstrap_n, Rng& rng) {
    PairedComparison out;
    out.comparator = strategy::mode_name(comparator);
    out.strategy = strategy::mode_name(strat);
    out.metric = metric;

    std::vector<int> patients;
    for (const auto& [key, value] : metrics) {
        if (key.mode == comparator) patients.push_back(key.patient);
    }
    if (patients.empty()) {
        throw std::invalid_argument("paired_differences: comparator mode has no results");
    }
    for (int p : patients) {
        const auto it = metrics.find({p, strat});
        if (it == metrics.end()) {
            throw std::invalid_argument("paired_differences: patient " + std::to_string(p) +
                                        " missing under " + out.strategy);
        }
        const auto cit = metrics.find({p, comparator});
        out.per_subject.push_back(metric_value(it->second, metric) -
                                  metric_value(cit->second, metric));
    }

    const std::size_t n = out.per_subject.size();
    double sum = 0.0;
    for (double d : out.per_subject) sum += d;
    out.mean_diff = sum / static_cast<double>(n);

    std::vector<double> means;
    if (bootstrap_n == 0) {
        // Exhaustive enumeration of all n^n resamples.
        double total = 1.0;
        for (std::size_t i = 0; i < n; ++i) total *= static_cast<double>(n);
        if (total > 1e6) {
            throw std::invalid_argument("paired_differences: exhaustive bootstrap too large");
        }
        const auto count = static_cast<long>(total);
        means.reserve(static_cast<std::size_t>(count));
        for (long code = 0; code < count; ++code) {
            long c = code;
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += out.per_subject[static_cast<std::size_t>(c % static_cast<long>(n))];
                c /= static_cast<long>(n);
            }
            means.push_back(s / static_cast<double>(n));
        }
    } else {
        means.reserve(static_cast<std::size_t>(bootstrap_n));
        for (long b = 0; b < bootstrap_n; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
                s += out.per_subject[std::min(pick, n - 1)];
            }
            means.push_back(s / static_cast<double>(n));
        }
    }
    out.ci_lo = quantile(means, 0.025);
    out.ci_hi = quantile(std::move(means), 0.975);
    return out;
}

std::size_t tuning_select(const std::vector<CandidateStats>& stats, double tol_tir,
                          double tol_hypo) {
    if (stats.empty()) {
        throw std::invalid_argument("tuning_select: empty candidate table");
    }
    double best_tir = stats[0].median_tir;
    for (const auto& s : stats) best_tir = std::max(best_tir, s.median_tir);

    double best_hypo = std::numeric_limits<double>::infinity();
    for (const auto& s : stats) {
        if (s.median_tir >= best_tir - tol_tir) best_hypo = std::min(best_hypo, s.median_hypo);
    }

    std::size_t chosen = stats.size();
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& s = stats[i];
        if (s.median_tir < best_tir - tol_tir) continue;
        if (s.median_hypo > best_hypo + tol_hypo) continue;
        if (chosen == stats.size()) {
            chosen = i;
            continue;
        }
        const auto& c = stats[chosen];
        if (s.median_pram < c.median_pram ||
            (s.median_pram == c.median_pram && s.tiebreak_key < c.tiebreak_key)) {
            chosen = i;
        }
    }
    return chosen;
}

} // namespace pramloop::analytics
