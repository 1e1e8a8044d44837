"""
Scores and overlaps on a four-author toy network
================================================

Four papers, four authors.  a and c never wrote together but share two
coauthors, so every similarity score has something to say about them.
"""

from asymlink import PaperRecord, build_from_papers, score
from asymlink.metrics import asymmetric_overlap, asymmetric_tie_strength, symmetric_overlap

papers = [
    PaperRecord("P1", ("a", "b", "z")),
    PaperRecord("P2", ("b", "c")),
    PaperRecord("P3", ("z", "c")),
    PaperRecord("P4", ("a", "z")),
]
g = build_from_papers(papers)
a, b, z, c = (g.node_id(x) for x in "abzc")
print(g.node_count, "nodes,", g.edge_count, "edges")

# the pair (a, c) under every score
for kind in ("cn", "jc", "ra", "aa", "at1", "wat1", "wat3", "mix1"):
    print(f"{kind:5s} {score(g, a, c, kind):.4f}")

# wAT3 looks at the pair from one side, so the order matters
print("wat3(c, a) =", round(score(g, c, a, "wat3"), 4))

# overlap seen from both ends of the edge (a, b): b has more other contacts
print("O(a,b) =", symmetric_overlap(g, a, b))
print("Q(a,b) =", asymmetric_overlap(g, a, b), " Q(b,a) =", asymmetric_overlap(g, b, a))

# a wrote both of its papers with z, z only two of its three with a
print("v(a,z) =", asymmetric_tie_strength(g, a, z), " v(z,a) =", round(asymmetric_tie_strength(g, z, a), 4))
