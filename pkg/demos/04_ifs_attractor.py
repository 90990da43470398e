"""The kept child maps as an iterated function system.

Iterating all kept maps on the base set walks the construction down level by
level; composed map words reproduce individual cells; and on a totally
disconnected system the inverse branch map undoes one subdivision step,
realizing the symbolic shift geometrically.
"""

from porofractal import builtin, realize_point
from porofractal.codespace import Address, Code, shift
from porofractal.geometry import Point2
from porofractal.ifs import SetApproximation, compose_word, from_scheme, inverse_shift, iterate_attractor, total_measure

print("=== attractor iteration ===")
for name, scale in [("cantor", 2 / 3), ("carpet", 8 / 9), ("koch", 2 / 3)]:
    sys_ = from_scheme(builtin(name))
    approx = SetApproximation((sys_.base,), 0)
    seed_mu = total_measure(sys_, approx)
    print(f"{name}: per-generation measure factor {scale:.6f}")
    for k in range(1, 5):
        approx = iterate_attractor(sys_, approx, 1)
        mu = total_measure(sys_, approx)
        print(f"  generation {k}: {len(approx.cells):4d} cells, measure {mu:.6f} "
              f"(predicted {seed_mu * scale ** k:.6f})")
    print()

print("=== composed words are cells ===")
sys_ = from_scheme(builtin("cantor"))
for word in [(1,), (2, 1), (2, 1, 2)]:
    poly = compose_word(sys_, Address(word, 2, 2))
    a, b = poly.vertices[:, 0]
    label = "".join(map(str, word))
    print(f"  cell {label}: [{a:.6f}, {b:.6f}]")
print()

print("=== the inverse branch map is the shift ===")
# the point 1/4 belongs to the middle-thirds limit set; its code is (13)
# repeating in base-3 digits, i.e. the kept word 1 2 1 2 ...
p = Point2(0.25, 0.0)
for step in range(5):
    q, branch = inverse_shift(sys_, p)
    print(f"  {p.x:.9f} sits in branch {branch}; inverse maps it to {q.x:.9f}")
    p = q
print()

code = Code((), (1, 2), 2)
print("symbolically: realizing the code (12)-repeat and shifting matches")
for step in range(3):
    pt, err = realize_point(builtin("cantor"), code, 20)
    print(f"  shift^{step}: realized {pt.x:.9f} (+/- {err:.3g})")
    code = shift(code)
