"""
Link prediction on a model network
==================================

Hide d links, mix them with d absent pairs that share a neighbour, and ask
each score to tell them apart.  AUC and average precision summarise how
well it does.
"""

from asymlink import ModelConfig, build_balanced_set, evaluate_all, holdout_scores, roc_auc, simulate

g = simulate(ModelConfig(seed=2)).graph

# one balanced set, scored by hand
test = build_balanced_set(g, d=2000, seed=0)
scored = holdout_scores(g, test, ["cn", "ra"])
for kind, values in scored.values.items():
    print(f"{kind.token}: AUC {roc_auc(scored.labels, values).area:.3f}")

# the same thing over five seeds with standard errors
report = evaluate_all(g, 2000, ["jc", "qq", "aa", "at2", "wat1", "mix1"], seeds=range(5))
for row in report.rows:
    print(f"{row.kind.token:5s} AUC {row.auc:.3f} ± {row.stderr_auc:.3f}   PRAUC {row.prauc:.3f}")

# summary.csv, roc.csv and pr.csv, ready for plotting
report.write("link_prediction_out")
