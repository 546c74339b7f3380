"""Smoke tests for the _pramloop extension module."""

import os
import sys

import _pramloop as pl

DATA = os.environ.get("PRAMLOOP_DATA", "data")
FAILURES = []


def check(name, ok):
    print(("PASS" if ok else "FAIL") + "  " + name)
    if not ok:
        FAILURES.append(name)


def main():
    check("version string present", isinstance(pl.__version__, str) and pl.__version__)

    params = pl.PramlintideParams()
    check("eta(0) is exactly 1", pl.eta_factor(0.0, params) == 1.0)
    check(
        "eta at the Hill midpoint",
        abs(pl.eta_factor(params.hill_d, params) - 2.0 / (2.0 + params.hill_n)) < 1e-12,
    )
    check(
        "dose conversion 30 ug",
        abs(pl.convert_pram_dose(30.0, params) - 30e6 / params.molar_mass) < 1e-9,
    )

    meal = pl.MealModelParams()
    k_inf = pl.kempt_rate(100.0 * 50000.0, 50000.0, meal)
    check("kempt saturates at k_max", abs(k_inf - meal.k_max) < 1e-9)

    pct = pl.time_percentages([100.0] * 50)
    check("constant trace is fully in range", pct["pct_in_70_180"] == 100.0)
    lbgi, hbgi = pl.risk_indices([112.517] * 10)
    check("neutral glucose has no risk", lbgi < 1e-6 and hbgi < 1e-6)

    cfg = pl.load_config(os.path.join(DATA, "sim_validation.json"))
    check("cohort loads with ten patients", cfg.n_patients == 10)

    meals = pl.scenario_meals(cfg)
    check("validation scenario has 60 meals", len(meals) == 60)
    check(
        "first meal matches the table",
        meals[0]["day"] == 1 and meals[0]["time_min"] == 605 and meals[0]["grams"] == 64.88,
    )

    run = pl.run_simulation(cfg, patient=0, mode="INS_NMA")
    check("simulation completes", not run["aborted"])
    check("trace spans 14 days", len(run["t_min"]) == 14 * 288 + 1)
    check("daily totals cover every day", len(run["daily_insulin"]) == 14)
    check("metrics attached", "pct_in_70_180" in run["metrics"])
    u_total = [b + i + j for b, i, j in zip(run["u_basal"], run["u_infusion"], run["u_bolus"])]
    check("positivity holds", min(u_total) >= 0.0)

    rerun = pl.run_simulation(cfg, patient=0, mode="INS_NMA")
    check("reruns are bit-identical", run["g_cgm"] == rerun["g_cgm"])

    s2 = pl.run_simulation(cfg, patient=0, mode="S2")
    check("S2 delivers pramlintide", sum(s2["p_infusion"]) > 0.0)
    check("S2 slows gastric emptying", min(s2["eta"]) < 1.0)

    cmp = pl.compare(cfg, "INS_NMA", "S2", metric="pct_in_70_180", bootstrap_n=2000)
    check("comparison carries per-subject diffs", len(cmp["per_subject"]) == 10)
    check("comparison CI is ordered", cmp["ci95"][0] <= cmp["mean_diff"] <= cmp["ci95"][1])
    check("S2 improves cohort time in range", cmp["mean_diff"] > 0.0)

    if FAILURES:
        print("%d smoke check(s) failed" % len(FAILURES))
        return 1
    print("all smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
