"""Numerical verification of the defining subdivision conditions.

Each check sweeps a built CellTree and reports pass/fail together with the
extremal values observed and witness addresses.  A finite-depth sweep can
refute a condition but never prove it for all depths, so every report states
the depth it was checked to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .codespace import Address
from .config import DEFAULT_CAPS, DEFAULT_TOLERANCES, Caps, Tolerances
from .errors import CapExceededError, EmptyTreeError
from .geometry import ConvexPolygon, PairDistanceEvaluator, min_distance_matrix, overlap_measure
from .scheme import CellTree

SeparationMode = Literal["pairwise", "forall_exists"]

_MAX_WITNESSES = 16


@dataclass(frozen=True)
class ConditionResult:
    condition: str
    status: str  # "pass" | "fail"
    extremal: dict
    witnesses: tuple

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "status": self.status,
            "extremal": self.extremal,
            "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses],
        }


@dataclass(frozen=True)
class VerificationReport:
    scheme: str
    depth: int
    tolerances: dict
    conditions: tuple[ConditionResult, ...]
    overall: str

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "depth": self.depth,
            "tolerances": self.tolerances,
            "conditions": [c.to_dict() for c in self.conditions],
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def condition(self, name: str, mode: str | None = None) -> ConditionResult:
        for c in self.conditions:
            if c.condition == name and (mode is None or c.extremal.get("mode") == mode):
                return c
        raise KeyError(name)


def _require_depth(t: CellTree, depth: int) -> None:
    if t.depth < depth or len(t.levels) <= depth or not t.levels[1]:
        raise EmptyTreeError(f"tree of depth {t.depth} is too shallow (need {depth})")


def _level_measures(t: CellTree, n: int) -> np.ndarray:
    cells = t.levels[n]
    verts = np.stack([c.polygon.vertices for c in cells])
    if t.scheme.measure_kind == "length":
        d = verts[:, 1, :] - verts[:, 0, :]
        return np.hypot(d[:, 0], d[:, 1])
    x, y = verts[..., 0], verts[..., 1]
    return np.abs(np.sum(x * np.roll(y, -1, axis=1) - np.roll(x, -1, axis=1) * y, axis=1)) / 2.0


def _level_diameters(t: CellTree, n: int) -> np.ndarray:
    verts = np.stack([c.polygon.vertices for c in t.levels[n]])
    diff = verts[:, :, None, :] - verts[:, None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1]).max(axis=(1, 2))


def check_ratio(t: CellTree, tol: Tolerances = DEFAULT_TOLERANCES, expected: float | None = None) -> ConditionResult:
    """Kept-to-complement measure ratio within every subdivision.

    Sweeps every kept parent at every depth; the observed minimum and maximum
    are the finite-depth evidence for the two uniform bounds the construction
    requires.  With `expected` given, every single ratio must also match it.
    """
    _require_depth(t, 1)
    s = t.scheme
    m, M = s.m, s.M
    per_depth = []
    witnesses: list = []
    violators: list = []
    worst = (np.inf, None)
    best = (-np.inf, None)
    for n in range(1, t.depth + 1):
        mus = _level_measures(t, n)
        blocks = mus.reshape(-1, M)
        kept = blocks[:, :m].sum(axis=1)
        comp = blocks[:, m:].sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(comp > 0.0, kept / np.where(comp > 0.0, comp, 1.0), np.inf)
        parents = [c.address for c in t.levels[n - 1] if c.is_kept]
        i_min, i_max = int(np.argmin(ratios)), int(np.argmax(ratios))
        per_depth.append({"depth": n, "min": float(ratios[i_min]), "max": float(ratios[i_max])})
        if ratios[i_min] < worst[0]:
            worst = (float(ratios[i_min]), str(parents[i_min]))
        if ratios[i_max] > best[0]:
            best = (float(ratios[i_max]), str(parents[i_max]))
        bad = ~np.isfinite(ratios) | (ratios <= tol.ratio)
        if expected is not None:
            bad |= np.abs(ratios - expected) > tol.ratio
        for i in np.nonzero(bad)[0][:_MAX_WITNESSES]:
            violators.append(str(parents[int(i)]))
    status = "fail" if violators else "pass"
    witnesses = violators if violators else [w for _, w in (worst, best) if w is not None]
    extremal = {
        "observed_r": worst[0],
        "observed_R": best[0],
        "per_depth": per_depth,
        "expected": expected,
    }
    return ConditionResult("ratio", status, extremal, tuple(dict.fromkeys(witnesses)))


def check_adjacency(t: CellTree, tol: Tolerances = DEFAULT_TOLERANCES) -> ConditionResult:
    """Every kept cell touches some complement sibling of its parent."""
    _require_depth(t, 1)
    s = t.scheme
    m, M = s.m, s.M
    n_comp = M - m
    max_gap = -1.0
    max_pair: tuple[str, str] | None = None
    violators: list[tuple[str, str]] = []
    for n in range(1, t.depth + 1):
        cells = t.levels[n]
        ev = PairDistanceEvaluator([c.polygon for c in cells])
        n_par = len(cells) // M
        base = np.repeat(np.arange(n_par) * M, m * n_comp)
        ii = base + np.tile(np.repeat(np.arange(m), n_comp), n_par)
        jj = base + np.tile(np.tile(np.arange(m, M), m), n_par)
        gaps = ev.distances(ii, jj).reshape(-1, n_comp)
        per_kept = gaps.min(axis=1)
        nearest = gaps.argmin(axis=1)
        for r in range(per_kept.shape[0]):
            kept_cell = cells[(r // m) * M + (r % m)]
            comp_cell = cells[(r // m) * M + m + int(nearest[r])]
            pair = (str(kept_cell.address), str(comp_cell.address))
            if per_kept[r] > max_gap:
                max_gap, max_pair = float(per_kept[r]), pair
            if per_kept[r] > tol.geom and len(violators) < _MAX_WITNESSES:
                violators.append(pair)
    status = "fail" if max_gap > tol.geom else "pass"
    extremal = {"max_gap": max_gap}
    witnesses = tuple(violators) if violators else ((max_pair,) if max_pair else ())
    return ConditionResult("adjacency", status, extremal, witnesses)


def check_accumulation(t: CellTree, tol: Tolerances = DEFAULT_TOLERANCES, caps: Caps = DEFAULT_CAPS) -> ConditionResult:
    """Complement cells of all orders are pairwise interior-disjoint.

    Under the closed-cell model a point accumulating on two complement sets
    then lies on both boundaries, hence in neither open complement region.
    Pairs are pruned by bounding boxes before exact clipping.
    """
    _require_depth(t, 1)
    comps = list(t.complement_cells())
    base_mu = t.scheme.base_measure()
    bb = np.array([c.polygon.bbox() for c in comps])
    lo, hi = bb[:, :2], bb[:, 2:]
    overlap_x = (np.minimum.outer(hi[:, 0], hi[:, 0]) - np.maximum.outer(lo[:, 0], lo[:, 0])) >= -tol.geom
    overlap_y = (np.minimum.outer(hi[:, 1], hi[:, 1]) - np.maximum.outer(lo[:, 1], lo[:, 1])) >= -tol.geom
    cand = np.triu(overlap_x & overlap_y, k=1)
    ii, jj = np.nonzero(cand)
    if ii.shape[0] > caps.pairs:
        raise CapExceededError(f"{ii.shape[0]} candidate complement pairs exceed the pair cap {caps.pairs}")
    max_overlap = 0.0
    max_pair: tuple[str, str] | None = None
    violators: list[tuple[str, str]] = []
    threshold = tol.area * base_mu
    for i, j in zip(ii.tolist(), jj.tolist()):
        ov = overlap_measure(comps[i].polygon, comps[j].polygon, t.scheme.measure_kind, tol.geom)
        pair = (str(comps[i].address), str(comps[j].address))
        if ov > max_overlap:
            max_overlap, max_pair = ov, pair
        if ov > threshold and len(violators) < _MAX_WITNESSES:
            violators.append(pair)
    status = "fail" if max_overlap > threshold else "pass"
    extremal = {"max_overlap": max_overlap, "base_measure": base_mu, "pairs_examined": int(ii.shape[0])}
    witnesses = tuple(violators) if violators else ((max_pair,) if max_pair else ())
    return ConditionResult("accumulation", status, extremal, witnesses)


def check_diameter(t: CellTree, tol: Tolerances = DEFAULT_TOLERANCES) -> ConditionResult:
    """Maximal cell diameter must decay by a factor below one at every step."""
    _require_depth(t, 2)
    maxima = []
    argmax_addr = []
    for n in range(1, t.depth + 1):
        diams = _level_diameters(t, n)
        i = int(np.argmax(diams))
        maxima.append(float(diams[i]))
        argmax_addr.append(str(t.levels[n][i].address))
    factors = [maxima[i + 1] / maxima[i] for i in range(len(maxima) - 1)]
    bad = [i for i, f in enumerate(factors) if f > tol.lambda_max]
    status = "fail" if bad else "pass"
    witnesses = tuple(argmax_addr[i + 1] for i in bad[:_MAX_WITNESSES]) if bad else (argmax_addr[-1],)
    extremal = {
        "max_diameter_by_depth": maxima,
        "decay_factors": factors,
        "max_factor": max(factors),
    }
    return ConditionResult("diameter", status, extremal, witnesses)


@dataclass(frozen=True)
class SeparationSweep:
    """Result of a separation sweep over kept cells by depth."""

    mode: str
    value: float
    depth: int
    by_depth: tuple[float, ...]
    word_a: Address
    word_b: Address


_FULL_MATRIX_LIMIT = 600


def _depth_pairwise(ev: PairDistanceEvaluator) -> tuple[float, int, int, int]:
    """Exact min over distinct pairs, pruned by bbox/centroid bounds."""
    k = len(ev.polys)
    upper = np.inf  # min centroid distance is an upper bound on the answer
    for i in range(k - 1):
        upper = min(upper, float(ev.centroid_distances_from(i)[i + 1 :].min()))
    ii_list = []
    jj_list = []
    for i in range(k - 1):
        gaps = ev.bbox_gaps_from(i)[i + 1 :]
        js = np.nonzero(gaps <= upper)[0]
        ii_list.append(np.full(js.shape[0], i))
        jj_list.append(js + i + 1)
    ii = np.concatenate(ii_list)
    jj = np.concatenate(jj_list)
    dists = ev.distances(ii, jj)
    best = int(np.argmin(dists))
    return float(dists[best]), int(ii[best]), int(jj[best]), int(ii.shape[0])


def _depth_forall_exists(ev: PairDistanceEvaluator) -> tuple[float, int, int, int]:
    """Exact min over cells of the max partner distance, with pruning.

    Bbox gaps bound each distance from below and centroid distances from
    above, so a row's exact maximum only needs the partners whose upper
    bound reaches the row's best lower bound; rows whose lower bound already
    meets the running minimum cannot lower it and are skipped.
    """
    k = len(ev.polys)
    running = np.inf
    pick = (0, 0)
    n_exact = 0
    for i in range(k):
        gaps = ev.bbox_gaps_from(i)
        gaps[i] = 0.0
        best_lower = float(gaps.max())
        if best_lower >= running:
            continue
        cdist = ev.centroid_distances_from(i)
        cand = np.nonzero(cdist >= best_lower)[0]
        cand = cand[cand != i]
        exact = ev.distances(np.full(cand.shape[0], i), cand)
        n_exact += int(cand.shape[0])
        jbest = int(np.argmax(exact))
        row_max = float(exact[jbest])
        if row_max < running:
            running = row_max
            pick = (i, int(cand[jbest]))
    return running, pick[0], pick[1], n_exact


def separation_sweep(
    cells_by_depth: Sequence[Sequence[tuple[Address, ConvexPolygon]]],
    mode: SeparationMode,
    caps: Caps = DEFAULT_CAPS,
) -> SeparationSweep:
    """Shared sweep behind both separation semantics.

    pairwise: the smallest distance between distinct kept cells, minimized
    over depths.  forall_exists: per depth the worst cell's best partner
    distance, then the best depth.  The pair cap applies to the exact
    evaluations remaining after bounding-box pruning.  Ties break toward
    lexicographically smaller addresses because cells arrive in address
    order.
    """
    if mode not in ("pairwise", "forall_exists"):
        raise ValueError(f"unknown separation mode {mode!r}")
    per_depth: list[tuple[float, Address, Address]] = []
    exact_budget = caps.pairs
    for cells in cells_by_depth:
        addrs = [a for a, _ in cells]
        polys = [p for _, p in cells]
        k = len(polys)
        if k <= _FULL_MATRIX_LIMIT:
            n_exact = k * (k - 1) // 2
            if n_exact > exact_budget:
                raise CapExceededError(f"separation sweep exceeds the pair cap {caps.pairs}")
            exact_budget -= n_exact
            mat = min_distance_matrix(polys)
            if mode == "pairwise":
                masked = mat + np.where(np.eye(k, dtype=bool), np.inf, 0.0)
                i, j = np.unravel_index(int(np.argmin(masked)), masked.shape)
                per_depth.append((float(masked[i, j]), addrs[min(i, j)], addrs[max(i, j)]))
            else:
                row_best = mat.max(axis=1)
                i = int(np.argmin(row_best))
                j = int(np.argmax(mat[i]))
                per_depth.append((float(row_best[i]), addrs[i], addrs[j]))
        else:
            ev = PairDistanceEvaluator(polys)
            fn = _depth_pairwise if mode == "pairwise" else _depth_forall_exists
            value, i, j, n_exact = fn(ev)
            if n_exact > exact_budget:
                raise CapExceededError(f"separation sweep exceeds the pair cap {caps.pairs}")
            exact_budget -= n_exact
            per_depth.append((value, addrs[i], addrs[j]))
    values = [v for v, _, _ in per_depth]
    pick = int(np.argmin(values)) if mode == "pairwise" else int(np.argmax(values))
    value, a, b = per_depth[pick]
    return SeparationSweep(mode, value, pick + 1, tuple(values), a, b)


def check_separation(
    t: CellTree,
    mode: SeparationMode = "forall_exists",
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
) -> ConditionResult:
    """Positive separation between kept cells, in one of two readings.

    pairwise takes the infimum over all distinct kept-cell pairs and is zero
    for any construction with touching kept cells; forall_exists only asks
    that every cell has some cell far from it, which is the reading under
    which the standard planar examples pass.
    """
    _require_depth(t, 1)
    cells_by_depth = [[(c.address, c.polygon) for c in t.kept_cells(n)] for n in range(1, t.depth + 1)]
    sweep = separation_sweep(cells_by_depth, mode, caps)
    status = "pass" if sweep.value >= tol.sep else "fail"
    extremal = {
        "mode": mode,
        "epsilon0": sweep.value,
        "depth": sweep.depth,
        "by_depth": list(sweep.by_depth),
    }
    return ConditionResult("separation", status, extremal, ((str(sweep.word_a), str(sweep.word_b)),))


def full_verify(
    t: CellTree,
    tol: Tolerances = DEFAULT_TOLERANCES,
    caps: Caps = DEFAULT_CAPS,
    expected_ratio: float | None = None,
    separation_mode: SeparationMode = "forall_exists",
) -> VerificationReport:
    """Run every condition check and aggregate into one report.

    Separation is evaluated in both readings; only the configured mode
    counts toward the overall status, the other is reported alongside so the
    discrepancy between the two is never hidden.
    """
    _require_depth(t, 2)
    conditions = [
        check_ratio(t, tol, expected_ratio),
        check_adjacency(t, tol),
        check_accumulation(t, tol, caps),
        check_diameter(t, tol),
    ]
    counted = list(conditions)
    for mode in ("pairwise", "forall_exists"):
        res = check_separation(t, mode, tol, caps)
        res = ConditionResult(
            res.condition,
            res.status,
            {**res.extremal, "counted": mode == separation_mode},
            res.witnesses,
        )
        conditions.append(res)
        if mode == separation_mode:
            counted.append(res)
    overall = "pass" if all(c.passed for c in counted) else "fail"
    tolerances = {
        "geom": tol.geom,
        "area": tol.area,
        "sep": tol.sep,
        "lambda_max": tol.lambda_max,
        "ratio": tol.ratio,
        "separation_mode": separation_mode,
        "expected_ratio": expected_ratio,
    }
    return VerificationReport(t.scheme.name, t.depth, tolerances, tuple(conditions), overall)
