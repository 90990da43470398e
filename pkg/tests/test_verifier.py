import math

import pytest

from porofractal.codespace import Address
from porofractal.config import Caps
from porofractal.errors import CapExceededError, EmptyTreeError
from porofractal.geometry import min_distance, overlap_measure
from porofractal.scheme import build_tree, builtin
from porofractal.verifier import (
    check_accumulation,
    check_adjacency,
    check_diameter,
    check_ratio,
    check_separation,
    full_verify,
)

EXPECTED_RATIO = {"carpet": 8.0, "pascal3": 2.0, "koch": 2.0, "cantor": 2.0}


# ---------------------------------------------------------------------------
# ratio condition


@pytest.mark.parametrize("name,depth", [("carpet", 5), ("pascal3", 4), ("koch", 8), ("cantor", 8)])
def test_ratio_constant_at_every_depth(name, depth, make_tree):
    res = check_ratio(make_tree(name, depth), expected=EXPECTED_RATIO[name])
    assert res.passed
    assert res.extremal["observed_r"] == pytest.approx(EXPECTED_RATIO[name], abs=1e-9)
    assert res.extremal["observed_R"] == pytest.approx(EXPECTED_RATIO[name], abs=1e-9)
    for entry in res.extremal["per_depth"]:
        assert entry["min"] == pytest.approx(EXPECTED_RATIO[name], abs=1e-9)
        assert entry["max"] == pytest.approx(EXPECTED_RATIO[name], abs=1e-9)


def test_ratio_fails_on_wrong_expected_value(make_tree):
    res = check_ratio(make_tree("carpet", 2), expected=7.5)
    assert not res.passed
    assert res.witnesses


# ---------------------------------------------------------------------------
# adjacency condition


@pytest.mark.parametrize("name", ["carpet", "pascal3", "koch", "cantor"])
def test_adjacency_builtins_touch(name, make_tree):
    res = check_adjacency(make_tree(name, 4))
    assert res.passed
    assert res.extremal["max_gap"] <= 1e-9


def test_adjacency_cantor_deeper(make_tree):
    res = check_adjacency(make_tree("cantor", 6))
    assert res.passed
    # endpoints agree up to one ulp of composed map arithmetic
    assert res.extremal["max_gap"] <= 1e-15


def test_adjacency_fails_for_shrunk_complement(carpet_gap):
    t = build_tree(carpet_gap, 3)
    res = check_adjacency(t)
    assert not res.passed
    # edge squares sit 1/60 away from the shrunk center, corners sqrt(2)/60
    assert res.extremal["max_gap"] >= 1 / 60 - 1e-12
    assert res.witnesses
    # witness replay: the reported kept cell really is separated from the
    # reported nearest complement sibling
    kept, comp = res.witnesses[0]
    ka = t.cell(Address.parse(kept, 8, 9))
    ca = t.cell(Address.parse(comp, 8, 9))
    assert min_distance(ka.polygon, ca.polygon) > 1e-9


# ---------------------------------------------------------------------------
# accumulation condition


@pytest.mark.parametrize("name", ["carpet", "pascal3", "koch", "cantor"])
def test_accumulation_builtins_disjoint(name, make_tree):
    t = make_tree(name, 4)
    res = check_accumulation(t)
    assert res.passed
    assert res.extremal["max_overlap"] <= 1e-12 * t.scheme.base_measure()


def test_accumulation_fails_for_overlapping_complements(carpet_overlap):
    t = build_tree(carpet_overlap, 3)
    res = check_accumulation(t)
    assert not res.passed
    assert res.witnesses
    a, b = res.witnesses[0]
    pa = t.cell(Address.parse(a, 8, 9)).polygon
    pb = t.cell(Address.parse(b, 8, 9)).polygon
    assert overlap_measure(pa, pb, "area") > 1e-12 * t.scheme.base_measure()


def test_accumulation_pair_cap(make_tree):
    with pytest.raises(CapExceededError):
        check_accumulation(make_tree("pascal3", 4), caps=Caps(pairs=5))


# ---------------------------------------------------------------------------
# diameter condition


@pytest.mark.parametrize(
    "name,factor,tol",
    [("carpet", 1 / 3, 1e-9), ("cantor", 1 / 3, 1e-9), ("pascal3", 1 / 3, 1e-9), ("koch", 1 / math.sqrt(3), 1e-6)],
)
def test_diameter_decay_factors(name, factor, tol, make_tree):
    res = check_diameter(make_tree(name, 6 if name in ("koch", "cantor") else 4))
    assert res.passed
    for f in res.extremal["decay_factors"]:
        assert f == pytest.approx(factor, abs=tol)


def test_diameter_closed_form_koch(make_tree):
    # kept cells are exact 1/sqrt(3) similarities, so the per-depth maxima
    # must follow the closed form 3**(-n/2) * diam(base)
    res = check_diameter(make_tree("koch", 6))
    for n, d in enumerate(res.extremal["max_diameter_by_depth"], start=1):
        assert d == pytest.approx(3.0 ** (-n / 2), rel=1e-12)


def test_diameter_needs_depth_two(make_tree):
    with pytest.raises(EmptyTreeError):
        check_diameter(make_tree("cantor", 1))


# ---------------------------------------------------------------------------
# separation condition


def test_separation_cantor_pairwise_exact_thirds(make_tree):
    res = check_separation(make_tree("cantor", 6), "pairwise")
    assert res.passed
    for n, v in enumerate(res.extremal["by_depth"], start=1):
        assert v == pytest.approx(3.0**-n, abs=1e-12)
    assert res.extremal["epsilon0"] == pytest.approx(3.0**-6, abs=1e-12)


def test_separation_forall_exists_depth1(make_tree):
    for name in ("cantor", "carpet"):
        res = check_separation(make_tree(name, 1), "forall_exists")
        assert res.passed
        assert res.extremal["epsilon0"] == pytest.approx(1 / 3, abs=1e-9)


def test_separation_carpet_forall_depth1_brute_force(make_tree):
    # independent oracle: plain double loop over all 28 kept pairs
    t = make_tree("carpet", 1)
    cells = t.kept_cells(1)
    eps = min(
        max(min_distance(a.polygon, b.polygon) for b in cells if b is not a)
        for a in cells
    )
    res = check_separation(t, "forall_exists")
    assert res.extremal["epsilon0"] == pytest.approx(eps, abs=1e-12)
    assert eps == pytest.approx(1 / 3, abs=1e-9)


def test_separation_carpet_pairwise_fails(make_tree):
    res = check_separation(make_tree("carpet", 1), "pairwise")
    assert not res.passed
    assert res.extremal["epsilon0"] == 0.0


@pytest.mark.parametrize("name", ["carpet", "pascal3", "koch", "cantor"])
def test_pairwise_never_exceeds_forall_exists(name, make_tree):
    t = make_tree(name, 3)
    pw = check_separation(t, "pairwise").extremal["epsilon0"]
    fe = check_separation(t, "forall_exists").extremal["epsilon0"]
    assert pw <= fe + 1e-15


def test_separation_pruned_path_matches_full_matrix(make_tree, monkeypatch):
    # force the bbox-pruned path onto cell sets small enough for the
    # exhaustive matrix path, and require identical values and witnesses
    import porofractal.verifier as verifier_mod

    for name, depth in [("carpet", 2), ("pascal3", 2), ("cantor", 4)]:
        t = make_tree(name, depth)
        for mode in ("pairwise", "forall_exists"):
            full = check_separation(t, mode)
            monkeypatch.setattr(verifier_mod, "_FULL_MATRIX_LIMIT", 1)
            pruned = check_separation(t, mode)
            monkeypatch.undo()
            assert pruned.extremal["by_depth"] == full.extremal["by_depth"], (name, mode)
            assert pruned.witnesses == full.witnesses, (name, mode)


def test_separation_cap():
    t = build_tree(builtin("cantor"), 5)
    with pytest.raises(CapExceededError):
        check_separation(t, "pairwise", caps=Caps(pairs=10))


# ---------------------------------------------------------------------------
# full verification


def test_full_verify_carpet_passes(make_tree):
    rep = full_verify(make_tree("carpet", 4), expected_ratio=8.0)
    assert rep.overall == "pass"
    assert rep.condition("separation", mode="forall_exists").extremal["counted"] is True
    assert rep.condition("separation", mode="pairwise").extremal["counted"] is False
    assert rep.condition("separation", mode="pairwise").status == "fail"


def test_full_verify_koch_passes(make_tree):
    rep = full_verify(make_tree("koch", 6), expected_ratio=2.0)
    assert rep.overall == "pass"


def test_full_verify_counts_selected_separation_mode(make_tree):
    rep = full_verify(make_tree("carpet", 2), separation_mode="pairwise")
    assert rep.overall == "fail"  # kept squares touch


def test_full_verify_fails_on_shrunk_complement(carpet_gap):
    rep = full_verify(build_tree(carpet_gap, 3))
    assert rep.overall == "fail"
    assert rep.condition("adjacency").status == "fail"


def test_full_verify_fails_on_overlapping_complements(carpet_overlap):
    rep = full_verify(build_tree(carpet_overlap, 3))
    assert rep.overall == "fail"
    assert rep.condition("accumulation").status == "fail"


def test_reports_are_deterministic(make_tree):
    t1 = build_tree(builtin("koch"), 4)
    t2 = build_tree(builtin("koch"), 4)
    r1 = full_verify(t1, expected_ratio=2.0)
    r2 = full_verify(t2, expected_ratio=2.0)
    assert r1.to_json() == r2.to_json()


def test_full_verify_requires_depth_two(make_tree):
    with pytest.raises(EmptyTreeError):
        full_verify(make_tree("cantor", 1))


def test_conditions_hold_in_rotated_frames():
    # conjugating a scheme by a similarity preserves every condition, so the
    # checks must not depend on axis alignment (this also drives the bbox
    # pruning machinery with tilted cells)
    import dataclasses
    import numpy as np

    from porofractal.geometry import AffineMap2, ConvexPolygon, apply, compose
    from porofractal.scheme import validate_geometry

    s = builtin("carpet")
    for angle, scale in [(0.58, 1.7), (-1.1, 0.4)]:
        c, sn = np.cos(angle), np.sin(angle)
        lin = scale * np.array([[c, -sn], [sn, c]])
        g = AffineMap2(lin, np.array([0.3, -2.0]))
        g_inv = g.inverse()
        conjugated = dataclasses.replace(
            s,
            name="carpet-rot",
            base=apply(g, s.base),
            child_maps=tuple(compose(g, compose(w, g_inv)) for w in s.child_maps),
        )
        assert validate_geometry(conjugated) == []
        rep = full_verify(build_tree(conjugated, 3), expected_ratio=8.0)
        assert rep.overall == "pass", (angle, scale)
        sep = rep.condition("separation", mode="forall_exists")
        assert sep.extremal["by_depth"][0] == pytest.approx(scale / 3, rel=1e-9)


def test_report_json_shape(make_tree, carpet_gap):
    import json

    for rep in (full_verify(make_tree("cantor", 3)), full_verify(build_tree(carpet_gap, 2))):
        doc = json.loads(rep.to_json())
        assert set(doc) == {"scheme", "depth", "tolerances", "conditions", "overall"}
        for cond in doc["conditions"]:
            assert set(cond) == {"condition", "status", "extremal", "witnesses"}
            assert cond["status"] in ("pass", "fail")
            if cond["status"] == "fail":
                assert cond["witnesses"]  # every failure carries a witness
