"""Verify the defining subdivision conditions on each built-in scheme.

Four conditions make a porous subdivision a fractal-generating one: the
kept-to-removed measure ratio stays inside fixed bounds, every kept cell
touches a removed sibling, removed cells never share interior, and cell
diameters decay.  A fifth, the separation condition, is the prerequisite for
chaotic shift dynamics.  This script runs the full verifier on every
built-in and then on a deliberately broken scheme.
"""

import dataclasses

import numpy as np

from porofractal import build_tree, builtin
from porofractal.geometry import AffineMap2
from porofractal.verifier import full_verify

EXPECTED_RATIO = {"carpet": 8.0, "pascal3": 2.0, "koch": 2.0, "cantor": 2.0}

for name in ("carpet", "pascal3", "koch", "cantor"):
    t = build_tree(builtin(name), 4)
    rep = full_verify(t, expected_ratio=EXPECTED_RATIO[name])
    print(f"=== {name} (depth 4) -> {rep.overall.upper()} ===")
    for c in rep.conditions:
        mode = f" [{c.extremal['mode']}]" if c.condition == "separation" else ""
        detail = ""
        if c.condition == "ratio":
            detail = f"r={c.extremal['observed_r']:.9f}, R={c.extremal['observed_R']:.9f}"
        elif c.condition == "adjacency":
            detail = f"max gap {c.extremal['max_gap']:.3g}"
        elif c.condition == "accumulation":
            detail = f"max overlap {c.extremal['max_overlap']:.3g}"
        elif c.condition == "diameter":
            detail = f"decay factors ~ {c.extremal['max_factor']:.6f}"
        elif c.condition == "separation":
            detail = f"epsilon0 = {c.extremal['epsilon0']:.6f} at depth {c.extremal['depth']}"
        print(f"  {c.condition + mode:32s} {c.status:4s}  {detail}")
    print()

# now break the carpet: shrink the removed center square by 10 percent so
# the kept ring no longer touches it
s = builtin("carpet")
shrunk = AffineMap2(np.eye(2) * 0.3, np.array([0.35, 0.35]))
broken = dataclasses.replace(s, name="carpet-gap", child_maps=s.child_maps[:8] + (shrunk,))
rep = full_verify(build_tree(broken, 3))
print(f"=== carpet with shrunk center (depth 3) -> {rep.overall.upper()} ===")
adjacency = rep.condition("adjacency")
print(f"  adjacency {adjacency.status}: max gap {adjacency.extremal['max_gap']:.6f}")
print(f"  witness pair (kept cell, nearest removed sibling): {adjacency.witnesses[0]}")
