"""Regenerates cases/6bus.json and cases/2bus.json.

The 6-bus generator, line and yearly score tables are reference data. Cost
magnitudes, the bus-level demand split and solar parameters are chosen here.
"""
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parents[2]

YEARS = 10
NET_DEMAND = [1078, 1099, 1121, 1144, 1167, 1190, 1214, 1238, 1263, 1288]
SCORE_TOTAL = {"low": [0.21, 0.22, 0.23, 0.24, 0.25, 0.20, 0.19, 0.18, 0.17, 0.16],
               "high": [5.92, 6.38, 6.83, 7.29, 7.75, 5.37, 5.09, 4.83, 4.57, 4.49]}
HOURS = {"low": 6760.0, "high": 2000.0}
LOAD_SHARE = {3: 0.3, 4: 0.3, 5: 0.4}
SOLAR_BUSES = (3, 4, 5, 6)
SOLAR_AVAILABILITY = 0.8
SOLAR_COST = 4.0e6
INSTALL_COST = 5.0e8
MODIFY_COST = 1.0e9

GENERATORS = [  # id, bus, pmin, pmax, a, b, c
    ("G1", 1, 100, 220, 177, 13.5, 0.00045),
    ("G2", 2, 10, 100, 130, 40, 0.001),
    ("G3", 6, 10, 40, 137, 17.7, 0.005),
]
LINES = [  # id, from, to, x, rating, psi low, psi high, existing
    ("L1", 1, 2, 0.2, 200, 0.0743, 0.6330, True),
    ("L2", 2, 3, 0.25, 100, 0.0375, 0.6432, True),
    ("L3", 1, 4, 0.2, 100, 0.0251, 0.6483, True),
    ("L4", 2, 4, 0.1, 100, 0.0189, 0.6534, True),
    ("L5", 4, 5, 0.4, 100, 0.0152, 0.6584, True),
    ("L6", 5, 6, 0.3, 100, 0.0127, 0.6636, True),
    ("L7", 3, 6, 0.1, 100, 0.0109, 0.6687, True),
    ("L8", 3, 5, 0.26, 100, 0.0096, 0.6738, False),
    ("L9", 2, 5, 0.3, 100, 0.0086, 0.6789, False),
]


def six_bus():
    scen = list(HOURS)
    buses = []
    for b in range(1, 7):
        share = LOAD_SHARE.get(b, 0.0)
        avail = SOLAR_AVAILABILITY if b in SOLAR_BUSES else 0.0
        buses.append({
            "id": b,
            "solar_candidate": b in SOLAR_BUSES,
            "nominal_demand": [[round(share * NET_DEMAND[y], 6)] * len(scen) for y in range(YEARS)],
            "solar_availability": [[avail] * len(scen) for _ in range(YEARS)],
        })
    gens = [{"id": g, "bus": bus, "p_min": lo, "p_max": hi, "cost": {"a": a, "b": b, "c": c}}
            for g, bus, lo, hi, a, b, c in GENERATORS]
    lines = []
    for lid, f, t, x, rating, lo, hi, existing in LINES:
        psi = {"low": lo, "high": hi}
        lines.append({
            "id": lid, "from": f, "to": t, "reactance": x, "rating": rating, "existing": existing,
            "install_cost": [0.0 if existing else INSTALL_COST] * YEARS,
            "modify_cost": [MODIFY_COST] * YEARS,
            "ignition_score": [[round(psi[k] * SCORE_TOTAL[k][y] / SCORE_TOTAL[k][0], 6) for k in scen]
                               for y in range(YEARS)],
        })
    return {
        "version": "1",
        "name": "6-bus wildfire expansion (reconstructed costs)",
        "units": {"power": "MW", "energy": "MWh", "cost": "$", "reactance": "p.u.", "hours": "h/year"},
        "config": {
            "years": YEARS, "risk_tolerance": 2.7, "uncertainty_budget": 4, "shed_penalty": 1000.0,
            "delta": 0.5, "solar_cost": [SOLAR_COST] * YEARS, "epsilon": 1e-4, "epsilon_mode": "relative",
            "max_iterations": 40, "segments": 3, "base_mva": 100.0,
            "uncertainty": {"demand": 0.10, "solar": 0.10, "ignition": 0.0},
        },
        "scenarios": [{"label": k, "hours": HOURS[k]} for k in scen],
        "buses": buses, "generators": gens, "lines": lines,
    }


def two_bus():
    return {
        "version": "1",
        "name": "2-bus test system",
        "units": {"power": "MW", "energy": "MWh", "cost": "$", "reactance": "p.u.", "hours": "h/year"},
        "config": {
            "years": 2, "risk_tolerance": 0.8, "uncertainty_budget": 1, "shed_penalty": 1000.0,
            "delta": 0.5, "solar_cost": [2.0e5, 2.0e5], "epsilon": 1e-6, "epsilon_mode": "relative",
            "max_iterations": 20, "segments": 2, "base_mva": 100.0,
            "uncertainty": {"demand": 0.2, "solar": 0.2, "ignition": 0.0},
        },
        "scenarios": [{"label": "low", "hours": 6000.0}, {"label": "high", "hours": 2760.0}],
        "buses": [
            {"id": 1, "solar_candidate": False, "nominal_demand": [[0, 0], [0, 0]]},
            {"id": 2, "solar_candidate": True, "nominal_demand": [[80, 85], [88, 90]],
             "solar_availability": [[0.7, 0.8], [0.7, 0.8]]},
        ],
        "generators": [{"id": "G1", "bus": 1, "p_min": 0, "p_max": 100, "cost": {"a": 0, "b": 20, "c": 0.05}}],
        "lines": [
            {"id": "L1", "from": 1, "to": 2, "reactance": 0.2, "rating": 60, "existing": True,
             "install_cost": [0, 0], "modify_cost": [1.0e6, 1.0e6],
             "ignition_score": [[0.1, 0.6], [0.1, 0.65]]},
            {"id": "L2", "from": 1, "to": 2, "reactance": 0.25, "rating": 60, "existing": False,
             "install_cost": [3.0e6, 3.0e6], "modify_cost": [1.0e6, 1.0e6],
             "ignition_score": [[0.12, 0.7], [0.12, 0.72]]},
        ],
    }


if __name__ == "__main__":
    out = ROOT / "cases"
    out.mkdir(exist_ok=True)
    for name, doc in (("6bus.json", six_bus()), ("2bus.json", two_bus())):
        (out / name).write_text(json.dumps(doc, indent=2) + "\n")
