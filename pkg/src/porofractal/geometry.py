"""Planar metric-measure substrate: convex polygons, affine maps, measures.

Polygons are vertex arrays in counterclockwise order; a single vertex (a
point) and a vertex pair (a segment) are allowed as degenerate cases so that
one-dimensional constructions ride on the same machinery.  All operations are
pure and all values immutable, so everything here is safe to call from
parallel sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import SingularMapError

MeasureKind = Literal["area", "length"]

_CONSTRUCTION_TOL = DEFAULT_TOLERANCES.geom


@dataclass(frozen=True)
class Point2:
    """A point of the plane with finite coordinates."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("point coordinates must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    def distance_to(self, other: "Point2") -> float:
        return float(np.hypot(self.x - other.x, self.y - other.y))


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon given by counterclockwise vertices.

    Degenerate instances carry one vertex (a point) or two (a segment); both
    have zero area.  Convexity is checked at construction with the package
    geometric tolerance, so downstream operations never re-validate.
    """

    vertices: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a (k, 2) array with k >= 1")
        if not np.isfinite(v).all():
            raise ValueError("vertices must be finite")
        k = v.shape[0]
        if k > 1:
            diff = v[:, None, :] - v[None, :, :]
            dist = np.hypot(diff[..., 0], diff[..., 1])
            np.fill_diagonal(dist, np.inf)
            if dist.min() <= _CONSTRUCTION_TOL:
                raise ValueError("vertices must be pairwise distinct beyond tolerance")
        if k >= 3:
            e = np.roll(v, -1, axis=0) - v
            cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
            if (cross < -_CONSTRUCTION_TOL).any():
                raise ValueError("vertices must be convex in counterclockwise order")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def _unchecked(cls, vertices: np.ndarray) -> "ConvexPolygon":
        # fast path for polygons that are valid by construction (affine
        # images of validated polygons); skips the invariant checks
        obj = object.__new__(cls)
        v = np.asarray(vertices, dtype=float).copy()
        v.setflags(write=False)
        object.__setattr__(obj, "vertices", v)
        return obj

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def is_degenerate(self) -> bool:
        return self.n_vertices < 3

    def bbox(self) -> tuple[float, float, float, float]:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    def centroid(self) -> Point2:
        c = self.vertices.mean(axis=0)
        return Point2(float(c[0]), float(c[1]))


@dataclass(frozen=True, eq=False)
class AffineMap2:
    """Affine map x -> linear @ x + translation on the plane."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        lin = np.asarray(self.linear, dtype=float)
        tr = np.asarray(self.translation, dtype=float)
        if lin.shape != (2, 2) or tr.shape != (2,):
            raise ValueError("linear must be 2x2 and translation length 2")
        if not (np.isfinite(lin).all() and np.isfinite(tr).all()):
            raise ValueError("map entries must be finite")
        lin = lin.copy()
        tr = tr.copy()
        lin.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    def transform(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.linear.T + self.translation

    def transform_point(self, p: Point2) -> Point2:
        q = self.transform(p.as_array()[None, :])[0]
        return Point2(float(q[0]), float(q[1]))

    @property
    def det(self) -> float:
        lin = self.linear
        return float(lin[0, 0] * lin[1, 1] - lin[0, 1] * lin[1, 0])

    @property
    def operator_norm(self) -> float:
        """Largest singular value of the linear part."""
        return float(np.linalg.norm(self.linear, ord=2))

    def is_contraction(self, tol: float = _CONSTRUCTION_TOL) -> bool:
        return self.operator_norm < 1.0 - tol

    def inverse(self, tol: float = _CONSTRUCTION_TOL) -> "AffineMap2":
        if abs(self.det) <= tol:
            raise SingularMapError("cannot invert a numerically singular map")
        inv = np.linalg.inv(self.linear)
        return AffineMap2(inv, -inv @ self.translation)


def identity_map() -> AffineMap2:
    return AffineMap2(np.eye(2), np.zeros(2))


def similarity_map(scale: float, angle: float, translation=(0.0, 0.0), reflect: bool = False) -> AffineMap2:
    """Similarity of the given ratio: rotation by `angle` (radians), optional
    reflection across the x-axis applied first."""
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    if reflect:
        rot = rot @ np.diag([1.0, -1.0])
    return AffineMap2(scale * rot, np.asarray(translation, dtype=float))


# ---------------------------------------------------------------------------
# measures


def area(p: ConvexPolygon) -> float:
    """Shoelace area; zero for degenerate polygons."""
    if p.is_degenerate:
        return 0.0
    v = p.vertices
    x, y = v[:, 0], v[:, 1]
    return float(abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)) / 2.0)


def length(p: ConvexPolygon) -> float:
    """Length of a degenerate polygon: 0 for a point, |v1 - v0| for a segment."""
    if p.n_vertices == 1:
        return 0.0
    if p.n_vertices == 2:
        d = p.vertices[1] - p.vertices[0]
        return float(np.hypot(d[0], d[1]))
    raise ValueError("length measure is only defined for degenerate polygons")


def measure(p: ConvexPolygon, kind: MeasureKind) -> float:
    if kind == "area":
        return area(p)
    if kind == "length":
        return length(p)
    raise ValueError(f"unknown measure kind {kind!r}")


def diameter(p: ConvexPolygon) -> float:
    """Maximum pairwise vertex distance (exact for convex polygons)."""
    v = p.vertices
    if v.shape[0] == 1:
        return 0.0
    diff = v[:, None, :] - v[None, :, :]
    return float(np.hypot(diff[..., 0], diff[..., 1]).max())


# ---------------------------------------------------------------------------
# distances


def _edges(p: ConvexPolygon) -> np.ndarray:
    """Edge list as an (E, 2, 2) array of (start, end) pairs."""
    v = p.vertices
    k = v.shape[0]
    if k == 1:
        return np.stack([v, v], axis=1)
    if k == 2:
        return v[None, :, :]
    return np.stack([v, np.roll(v, -1, axis=0)], axis=1)


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points p to segments (a, b); all arrays (N, 2)."""
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    safe = np.where(denom > 0.0, denom, 1.0)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / safe, 0.0, 1.0)
    closest = a + t[:, None] * ab
    d = p - closest
    return np.hypot(d[:, 0], d[:, 1])


def _cross3(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, 0] - o[:, 0]) * (b[:, 1] - o[:, 1]) - (a[:, 1] - o[:, 1]) * (b[:, 0] - o[:, 0])


def _segment_segment_distance(p1, p2, q1, q2) -> np.ndarray:
    """Distances between segments (p1, p2) and (q1, q2); all arrays (N, 2)."""
    d = np.minimum.reduce(
        [
            _point_segment_distance(p1, q1, q2),
            _point_segment_distance(p2, q1, q2),
            _point_segment_distance(q1, p1, p2),
            _point_segment_distance(q2, p1, p2),
        ]
    )
    s1 = _cross3(q1, q2, p1)
    s2 = _cross3(q1, q2, p2)
    s3 = _cross3(p1, p2, q1)
    s4 = _cross3(p1, p2, q2)
    crossing = (s1 * s2 < 0.0) & (s3 * s4 < 0.0)
    return np.where(crossing, 0.0, d)


def point_in_polygon(point, p: ConvexPolygon, tol: float = _CONSTRUCTION_TOL) -> bool:
    """True if the point lies in the closed polygon, within distance tol."""
    q = np.asarray(point, dtype=float).reshape(2)
    v = p.vertices
    if v.shape[0] == 1:
        return bool(np.hypot(*(q - v[0])) <= tol)
    if v.shape[0] == 2:
        return bool(_point_segment_distance(q[None, :], v[0][None, :], v[1][None, :])[0] <= tol)
    e = np.roll(v, -1, axis=0) - v
    w = q[None, :] - v
    cross = e[:, 0] * w[:, 1] - e[:, 1] * w[:, 0]
    norms = np.hypot(e[:, 0], e[:, 1])
    return bool((cross / norms >= -tol).all())


def point_distance(point, p: ConvexPolygon) -> float:
    """Distance from a point to a closed convex polygon (0 inside)."""
    q = np.asarray(point, dtype=float).reshape(2)
    if point_in_polygon(q, p, tol=0.0):
        return 0.0
    e = _edges(p)
    qs = np.broadcast_to(q, (e.shape[0], 2))
    return float(_point_segment_distance(qs, e[:, 0], e[:, 1]).min())


def min_distance(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Minimum Euclidean distance between two closed convex polygons.

    Zero when they touch, overlap, or one contains the other.
    """
    ea, eb = _edges(a), _edges(b)
    na, nb = ea.shape[0], eb.shape[0]
    A = np.repeat(ea, nb, axis=0)
    B = np.tile(eb, (na, 1, 1))
    d = float(_segment_segment_distance(A[:, 0], A[:, 1], B[:, 0], B[:, 1]).min())
    if d > 0.0:
        # boundaries apart: distance is zero only if one polygon contains the other
        if point_in_polygon(a.vertices[0], b, tol=0.0) or point_in_polygon(b.vertices[0], a, tol=0.0):
            return 0.0
    return d


def _stacked_edges(polys: Sequence[ConvexPolygon]) -> np.ndarray:
    """Edge arrays padded to a common edge count by repeating the first edge."""
    edge_lists = [_edges(p) for p in polys]
    emax = max(e.shape[0] for e in edge_lists)
    out = np.empty((len(polys), emax, 2, 2))
    for i, e in enumerate(edge_lists):
        out[i, : e.shape[0]] = e
        out[i, e.shape[0] :] = e[0]
    return out


_PAIR_CHUNK = 131072


class PairDistanceEvaluator:
    """Batched min_distance queries over a fixed polygon set.

    Edge stacks, bounding boxes, and centroids are computed once, so sweeps
    that evaluate many index pairs against the same cells stay cheap.
    """

    def __init__(self, polys: Sequence[ConvexPolygon]):
        self.polys = list(polys)
        if not self.polys:
            raise ValueError("need at least one polygon")
        self.edges = _stacked_edges(self.polys)
        bbs = np.array([p.bbox() for p in self.polys])
        self.lo, self.hi = bbs[:, :2], bbs[:, 2:]
        self.centroids = np.stack([p.vertices.mean(axis=0) for p in self.polys])

    def bbox_gaps_from(self, i: int) -> np.ndarray:
        """Lower bounds on min_distance from polygon i to every polygon."""
        dx = np.maximum(np.maximum(self.lo[:, 0] - self.hi[i, 0], self.lo[i, 0] - self.hi[:, 0]), 0.0)
        dy = np.maximum(np.maximum(self.lo[:, 1] - self.hi[i, 1], self.lo[i, 1] - self.hi[:, 1]), 0.0)
        return np.hypot(dx, dy)

    def centroid_distances_from(self, i: int) -> np.ndarray:
        """Upper bounds on min_distance from polygon i to every polygon."""
        d = self.centroids - self.centroids[i]
        return np.hypot(d[:, 0], d[:, 1])

    def distances(self, ii, jj) -> np.ndarray:
        """Exact min_distance for the index pairs (ii[k], jj[k])."""
        ii = np.asarray(ii, dtype=int)
        jj = np.asarray(jj, dtype=int)
        n = ii.shape[0]
        out = np.empty(n)
        if n == 0:
            return out
        E = self.edges.shape[1]
        step = max(1, _PAIR_CHUNK // (E * E))
        for lo in range(0, n, step):
            hi = min(n, lo + step)
            A = np.repeat(self.edges[ii[lo:hi]], E, axis=1).reshape(-1, 2, 2)
            B = np.tile(self.edges[jj[lo:hi]], (1, E, 1, 1)).reshape(-1, 2, 2)
            d = _segment_segment_distance(A[:, 0], A[:, 1], B[:, 0], B[:, 1])
            out[lo:hi] = d.reshape(hi - lo, E * E).min(axis=1)
        # boundaries apart but one polygon nested in the other still means 0
        pos = np.nonzero(out > 0.0)[0]
        if pos.shape[0]:
            li, lj = self.lo[ii[pos]], self.lo[jj[pos]]
            hi_, hj = self.hi[ii[pos]], self.hi[jj[pos]]
            nested = ((li >= lj) & (hi_ <= hj)).all(axis=1) | ((lj >= li) & (hj <= hi_)).all(axis=1)
            for k in pos[np.nonzero(nested)[0]]:
                a, b = self.polys[int(ii[k])], self.polys[int(jj[k])]
                if point_in_polygon(a.vertices[0], b, tol=0.0) or point_in_polygon(b.vertices[0], a, tol=0.0):
                    out[k] = 0.0
        return out


def pair_min_distances(pa: Sequence[ConvexPolygon], pb: Sequence[ConvexPolygon]) -> np.ndarray:
    """Elementwise min_distance over two aligned polygon sequences."""
    if len(pa) != len(pb):
        raise ValueError("polygon sequences must have equal length")
    n = len(pa)
    if n == 0:
        return np.empty(0)
    ev = PairDistanceEvaluator(list(pa) + list(pb))
    idx = np.arange(n)
    return ev.distances(idx, idx + n)


def min_distance_matrix(polys: Sequence[ConvexPolygon]) -> np.ndarray:
    """Symmetric matrix of pairwise min_distance values (diagonal zero)."""
    n = len(polys)
    mat = np.zeros((n, n))
    if n < 2:
        return mat
    ii, jj = np.triu_indices(n, k=1)
    d = PairDistanceEvaluator(polys).distances(ii, jj)
    mat[ii, jj] = d
    mat[jj, ii] = d
    return mat


# ---------------------------------------------------------------------------
# intersection / overlap


def _clip_by_convex(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of `subject` against convex ccw `clip`.

    Crossings are computed parametrically on the subject edge, so every
    emitted point lies on that edge; sign noise at shared vertices can only
    produce degenerate slivers, never far-away intersection artifacts.
    """
    output = list(subject)
    for i in range(clip.shape[0]):
        cp1 = clip[i]
        cp2 = clip[(i + 1) % clip.shape[0]]
        if not output:
            return np.empty((0, 2))
        edge = cp2 - cp1
        points = output
        output = []
        s = points[-1]
        ds = edge[0] * (s[1] - cp1[1]) - edge[1] * (s[0] - cp1[0])
        for e in points:
            de = edge[0] * (e[1] - cp1[1]) - edge[1] * (e[0] - cp1[0])
            if (de >= 0.0) != (ds >= 0.0):
                t = ds / (ds - de)
                output.append(s + t * (e - s))
            if de >= 0.0:
                output.append(e)
            s, ds = e, de
    return np.array(output) if output else np.empty((0, 2))


def intersection_area(a: ConvexPolygon, b: ConvexPolygon) -> float:
    """Area of the intersection of two convex polygons (0 for degenerate input)."""
    if a.is_degenerate or b.is_degenerate:
        return 0.0
    clipped = _clip_by_convex(a.vertices, b.vertices)
    if clipped.shape[0] < 3:
        return 0.0
    x, y = clipped[:, 0], clipped[:, 1]
    return float(abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)) / 2.0)


def _segment_overlap_length(a: ConvexPolygon, b: ConvexPolygon, tol: float) -> float:
    """Length of the common part of two collinear closed segments."""
    if a.n_vertices < 2 or b.n_vertices < 2:
        return 0.0
    p0, p1 = a.vertices
    d = p1 - p0
    la = float(np.hypot(d[0], d[1]))
    u = d / la
    for q in b.vertices:
        if abs(u[0] * (q[1] - p0[1]) - u[1] * (q[0] - p0[0])) > tol:
            return 0.0
    s = [float(np.dot(q - p0, u)) for q in b.vertices]
    lo, hi = min(s), max(s)
    return max(0.0, min(la, hi) - max(0.0, lo))


def overlap_measure(a: ConvexPolygon, b: ConvexPolygon, kind: MeasureKind, tol: float = _CONSTRUCTION_TOL) -> float:
    """Measure of the intersection under the scheme's measure kind."""
    if kind == "area":
        return intersection_area(a, b)
    if kind == "length":
        return _segment_overlap_length(a, b, tol)
    raise ValueError(f"unknown measure kind {kind!r}")


# ---------------------------------------------------------------------------
# map application


def apply(m: AffineMap2, p: ConvexPolygon, tol: float = _CONSTRUCTION_TOL) -> ConvexPolygon:
    """Vertex-wise image of p under m, reordered ccw if m reverses orientation."""
    if abs(m.det) <= tol:
        raise SingularMapError("map is numerically singular")
    mapped = m.transform(p.vertices)
    if m.det < 0.0 and mapped.shape[0] >= 3:
        mapped = mapped[::-1]
    # a nonsingular affine image of a convex ccw polygon is convex ccw
    return ConvexPolygon._unchecked(mapped)


def compose(outer: AffineMap2, inner: AffineMap2) -> AffineMap2:
    """The map x -> outer(inner(x))."""
    return AffineMap2(outer.linear @ inner.linear, outer.linear @ inner.translation + outer.translation)
