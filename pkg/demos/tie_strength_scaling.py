"""
Asymmetric tie strength against asymmetric overlap
==================================================

Seen from one end of an edge, the share of your papers written with a
coauthor (v) tracks the share of your other contacts you both know (Q)
as a power law.
"""

import numpy as np

from asymlink import ModelConfig, simulate
from asymlink.analysis import fit_power_law_exponent, weight_overlap_relation

g = simulate(ModelConfig(seed=4)).graph

series = weight_overlap_relation(g, "v", "q", bins_per_decade=10)
for x, y, n in zip(series.x_rep, series.y_mean, series.count):
    if n >= 10:
        print(f"v ~ {x:.3f}   <Q> = {y:.3f}   ({n} edge ends)")

fit = fit_power_law_exponent(series, min_count=10)
print(f"Q ~ v^{fit.beta:.2f}  (r2 {fit.r2:.3f} over {fit.n_points} bins)")

# the symmetric view: <O> against w* dips and recovers
sym = weight_overlap_relation(g, "wstar", "o")
keep = sym.count >= 10
low = np.argmin(sym.y_mean[keep])
print(f"<O> bottoms out at {sym.y_mean[keep][low]:.3f} near w* = {sym.x_rep[keep][low]:.2f}")
