import json, numpy as np, scipy
from scipy import stats

rng = np.random.default_rng(20240611)
sw = []
specs = [(10, "normal"), (10, "exponential"), (10, "uniform"), (10, "lognormal"),
         (50, "normal"), (50, "exponential"), (50, "uniform"),
         (200, "normal"), (200, "lognormal"), (200, "uniform")]
for n, dist in specs:
    if dist == "normal": x = rng.normal(5, 2, n)
    elif dist == "exponential": x = rng.exponential(1.5, n)
    elif dist == "uniform": x = rng.uniform(0, 10, n)
    else: x = rng.lognormal(0, 0.8, n)
    x = [round(float(v), 4) for v in x]
    r = stats.shapiro(x)
    sw.append({"name": f"{dist}_{n}", "x": x, "w": float(r.statistic), "p_value": float(r.pvalue)})

mw = []
for i in range(20):
    n1 = int(rng.integers(5, 40)); n2 = int(rng.integers(5, 40))
    levels = int(rng.integers(3, 12))
    shift = float(rng.choice([0, 0, 1, 2]))
    a = [float(v) for v in rng.integers(0, levels, n1)]
    b = [float(v + shift) for v in rng.integers(0, levels, n2)]
    if i % 5 == 4:
        a = [v / 4 for v in a]; b = [v / 4 for v in b]
    r = stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic", use_continuity=True)
    mw.append({"name": f"ties_{i:02}", "a": a, "b": b, "u": float(r.statistic), "p_value": float(r.pvalue)})

meta = {"generator": "scipy " + scipy.__version__ + ", numpy " + np.__version__}
json.dump({"meta": meta, "cases": sw}, open("shapiro_wilk.json", "w"), indent=1)
json.dump({"meta": meta, "cases": mw}, open("mann_whitney_asymptotic.json", "w"), indent=1)
print(meta, [round(c["p_value"], 4) for c in sw], [round(c["p_value"], 4) for c in mw])
