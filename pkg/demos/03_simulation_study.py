"""
Desk-scale Monte Carlo study
============================

The bundled manifest has 10 copulas at n = 100, 200, 500 with 10^4
replications each. ``SCALE = 0.05`` runs 500 replications per cell in a few
seconds. Set it to 1.0 for the full study.
"""

import os

from wfootrule.montecarlo import bias_decay_report, load_manifest, render_table, run_table

SCALE = 0.05
jobs = os.cpu_count() or 1

results = run_table(load_manifest(scale=SCALE), jobs=jobs)
print(render_table(results, "md"))

# bias should halve and SD shrink by about 1/sqrt(2) when n doubles
for row in bias_decay_report(results):
    if row["estimator"] == "phi" and row["n_from"] == 100:
        print(f"{row['copula']:<20} bias ratio {row['bias_ratio']:6.3f}   sd ratio {row['sd_ratio']:.3f}")
