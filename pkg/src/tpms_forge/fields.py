"""Implicit scalar fields for the 16 minimal-surface families.

Each family registers a level-set formula F together with its analytic
gradient and symmetry metadata.  Coordinates are normalized per axis:

    q_i = p_i / L_i + offset_i        (cell units, one period per unit)
    u_i = 2*pi * q_i                  (radians, used by the trigonometric forms)

so ``period_length`` is the single user-facing scale knob.  Field values are
dimensionless; spatial gradients carry 1/mm from the chain rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import SpecInvalid

TWO_PI = 2.0 * math.pi


class SurfaceKind(str, Enum):
    GYROID = "gyroid"
    DIAMOND = "diamond"
    SCHWARZ_P = "schwarz_p"
    NEOVIUS = "neovius"
    LIDINOID = "lidinoid"
    SPLIT_P = "split_p"
    D_PRIME = "d_prime"
    DOUBLE_GYROID = "double_gyroid"
    IWP = "iwp"
    PW_HYBRID = "pw_hybrid"
    SCHERK_1 = "scherk_1"
    SCHERK_2 = "scherk_2"
    SKELETAL_1 = "skeletal_1"
    SKELETAL_2 = "skeletal_2"
    SKELETAL_3 = "skeletal_3"
    SKELETAL_4 = "skeletal_4"


class Symmetry(str, Enum):
    """Antisymmetry class used by the property tests.

    ODD_INVERSION:        F(-p) = -F(p)
    ODD_HALF_TRANSLATION: F(p + (L/2)(1,1,1)) = -F(p)
    NONE:                 no declared antisymmetry
    """

    ODD_INVERSION = "odd_inversion"
    ODD_HALF_TRANSLATION = "odd_half_translation"
    NONE = "none"


@dataclass(frozen=True)
class SurfaceInfo:
    kind: SurfaceKind
    formula: str
    triply_periodic: bool
    symmetry: Symmetry


@dataclass(frozen=True)
class FieldSpec:
    """A surface family bound to a physical scale.

    period_length: mm per repeat along each axis (strictly positive).
    phase_offset:  dimensionless shift added to the normalized coordinates.
    strut_radius:  strut radius as a fraction of the period (skeletal kinds only).
    """

    kind: SurfaceKind
    period_length: tuple[float, float, float]
    phase_offset: tuple[float, float, float] = (0.0, 0.0, 0.0)
    strut_radius: float = 0.2

    def __post_init__(self):
        kind = SurfaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        period = _as_triple(self.period_length, "period_length")
        offset = _as_triple(self.phase_offset, "phase_offset")
        object.__setattr__(self, "period_length", period)
        object.__setattr__(self, "phase_offset", offset)
        if not all(math.isfinite(v) and v > 0 for v in period):
            raise SpecInvalid(f"period_length must be finite and > 0, got {period}")
        if not all(math.isfinite(v) for v in offset):
            raise SpecInvalid(f"phase_offset must be finite, got {offset}")
        if not (0.0 < self.strut_radius <= 0.5):
            raise SpecInvalid(f"strut_radius must be in (0, 0.5], got {self.strut_radius}")


@dataclass(frozen=True)
class FieldSample:
    """Value and per-normalized-coordinate gradient at one probe point."""

    value: float
    gradient: tuple[float, float, float]


def _as_triple(value, name: str) -> tuple[float, float, float]:
    if isinstance(value, (int, float)):
        return (float(value), float(value), float(value))
    seq = tuple(float(v) for v in value)
    if len(seq) != 3:
        raise SpecInvalid(f"{name} must be a scalar or 3-vector, got {value!r}")
    return seq


# ---------------------------------------------------------------------------
# Trigonometric nodal forms.
#
# Every triply periodic trig formula below is invariant under the cyclic
# rotation (u,v,w) -> (v,w,u), so a single first-slot partial derivative
# D(a,b,c) = dF/da yields the full gradient by rotating the arguments.
# ---------------------------------------------------------------------------

sin, cos = np.sin, np.cos


def _gyroid(u, v, w):
    # sin(x)cos(y) + sin(y)cos(z) + sin(z)cos(x)
    return sin(u) * cos(v) + sin(v) * cos(w) + sin(w) * cos(u)


def _gyroid_d(a, b, c):
    return cos(a) * cos(b) - sin(c) * sin(a)


def _schwarz_p(u, v, w):
    # cos(x) + cos(y) + cos(z)
    return cos(u) + cos(v) + cos(w)


def _schwarz_p_d(a, b, c):
    return -sin(a)


def _diamond(u, v, w):
    # sin sin sin + sin cos cos + cos sin cos + cos cos sin
    return (
        sin(u) * sin(v) * sin(w)
        + sin(u) * cos(v) * cos(w)
        + cos(u) * sin(v) * cos(w)
        + cos(u) * cos(v) * sin(w)
    )


def _diamond_d(a, b, c):
    return (
        cos(a) * sin(b) * sin(c)
        + cos(a) * cos(b) * cos(c)
        - sin(a) * sin(b) * cos(c)
        - sin(a) * cos(b) * sin(c)
    )


def _neovius(u, v, w):
    # 3(cos x + cos y + cos z) + 4 cos x cos y cos z
    return 3.0 * (cos(u) + cos(v) + cos(w)) + 4.0 * cos(u) * cos(v) * cos(w)


def _neovius_d(a, b, c):
    return -3.0 * sin(a) - 4.0 * sin(a) * cos(b) * cos(c)


def _iwp(u, v, w):
    # 2(cx cy + cy cz + cz cx) - (cos 2x + cos 2y + cos 2z)
    return 2.0 * (cos(u) * cos(v) + cos(v) * cos(w) + cos(w) * cos(u)) - (
        cos(2 * u) + cos(2 * v) + cos(2 * w)
    )


def _iwp_d(a, b, c):
    return -2.0 * sin(a) * (cos(b) + cos(c)) + 2.0 * sin(2 * a)


def _lidinoid(u, v, w):
    # 0.5 sum_cyc sin(2x)cos(y)sin(z) - 0.5 sum_cyc cos(2x)cos(2y) + 0.15
    return (
        0.5
        * (
            sin(2 * u) * cos(v) * sin(w)
            + sin(2 * v) * cos(w) * sin(u)
            + sin(2 * w) * cos(u) * sin(v)
        )
        - 0.5
        * (
            cos(2 * u) * cos(2 * v)
            + cos(2 * v) * cos(2 * w)
            + cos(2 * w) * cos(2 * u)
        )
        + 0.15
    )


def _lidinoid_d(a, b, c):
    return (
        cos(2 * a) * cos(b) * sin(c)
        + 0.5 * sin(2 * b) * cos(c) * cos(a)
        - 0.5 * sin(2 * c) * sin(a) * sin(b)
        + sin(2 * a) * (cos(2 * b) + cos(2 * c))
    )


def _split_p(u, v, w):
    # 1.1 sum_cyc sin(2x)sin(z)cos(y) - 0.2 sum_cyc cos(2x)cos(2y)
    #   - 0.4 (cos 2x + cos 2y + cos 2z)
    return (
        1.1
        * (
            sin(2 * u) * sin(w) * cos(v)
            + sin(2 * v) * sin(u) * cos(w)
            + sin(2 * w) * sin(v) * cos(u)
        )
        - 0.2
        * (
            cos(2 * u) * cos(2 * v)
            + cos(2 * v) * cos(2 * w)
            + cos(2 * w) * cos(2 * u)
        )
        - 0.4 * (cos(2 * u) + cos(2 * v) + cos(2 * w))
    )


def _split_p_d(a, b, c):
    return (
        1.1
        * (
            2.0 * cos(2 * a) * sin(c) * cos(b)
            + sin(2 * b) * cos(a) * cos(c)
            - sin(2 * c) * sin(b) * sin(a)
        )
        + 0.4 * sin(2 * a) * (cos(2 * b) + cos(2 * c))
        + 0.8 * sin(2 * a)
    )


def _double_gyroid(u, v, w):
    # 2.75 sum_cyc sin(2x)sin(z)cos(y) - sum_cyc cos(2x)cos(2y)
    return 2.75 * (
        sin(2 * u) * sin(w) * cos(v)
        + sin(2 * v) * sin(u) * cos(w)
        + sin(2 * w) * sin(v) * cos(u)
    ) - (
        cos(2 * u) * cos(2 * v)
        + cos(2 * v) * cos(2 * w)
        + cos(2 * w) * cos(2 * u)
    )


def _double_gyroid_d(a, b, c):
    return 2.75 * (
        2.0 * cos(2 * a) * sin(c) * cos(b)
        + sin(2 * b) * cos(a) * cos(c)
        - sin(2 * c) * sin(b) * sin(a)
    ) + 2.0 * sin(2 * a) * (cos(2 * b) + cos(2 * c))


def _d_prime(u, v, w):
    # 0.5(sss + ccc) - 0.5 sum_cyc cos(2x)cos(2y) - 0.2
    return (
        0.5 * (sin(u) * sin(v) * sin(w) + cos(u) * cos(v) * cos(w))
        - 0.5
        * (
            cos(2 * u) * cos(2 * v)
            + cos(2 * v) * cos(2 * w)
            + cos(2 * w) * cos(2 * u)
        )
        - 0.2
    )


def _d_prime_d(a, b, c):
    return 0.5 * (
        cos(a) * sin(b) * sin(c) - sin(a) * cos(b) * cos(c)
    ) + sin(2 * a) * (cos(2 * b) + cos(2 * c))


def _pw_hybrid(u, v, w):
    # 4(cx cy + cy cz + cz cx) - 3 cx cy cz + 2.4
    return (
        4.0 * (cos(u) * cos(v) + cos(v) * cos(w) + cos(w) * cos(u))
        - 3.0 * cos(u) * cos(v) * cos(w)
        + 2.4
    )


def _pw_hybrid_d(a, b, c):
    return -4.0 * sin(a) * (cos(b) + cos(c)) + 3.0 * sin(a) * cos(b) * cos(c)


# ---------------------------------------------------------------------------
# Scherk towers: admitted clamped to the brick domain, not triply periodic.
# The aperiodic coordinates stay in cell units (no 2*pi wrap).
# ---------------------------------------------------------------------------


def _scherk_1_value(qx, qy, qz, spec):
    # exp(z)cos(x) - cos(y), z linear in cell units
    return np.exp(qz) * cos(TWO_PI * qx) - cos(TWO_PI * qy)


def _scherk_1_grad(qx, qy, qz, spec):
    e = np.exp(qz)
    return (
        -TWO_PI * e * sin(TWO_PI * qx),
        TWO_PI * sin(TWO_PI * qy),
        e * cos(TWO_PI * qx),
    )


def _scherk_2_value(qx, qy, qz, spec):
    # sin(z) - sinh(x)sinh(y), x and y linear in cell units
    return sin(TWO_PI * qz) - np.sinh(qx) * np.sinh(qy)


def _scherk_2_grad(qx, qy, qz, spec):
    return (
        -np.cosh(qx) * np.sinh(qy),
        -np.sinh(qx) * np.cosh(qy),
        TWO_PI * cos(TWO_PI * qz),
    )


# ---------------------------------------------------------------------------
# Skeletal graphs: signed distance to a periodic strut network minus the
# strut radius, all in cell units.  Segments are defined inside [0,1]^3 and
# replicated into the 27 neighbor cells so the minimum-image distance is
# exact for wrapped query points.
# ---------------------------------------------------------------------------


def _simple_cubic_segments() -> np.ndarray:
    o = (0.0, 0.0, 0.0)
    return np.array(
        [[o, (1, 0, 0)], [o, (0, 1, 0)], [o, (0, 0, 1)]], dtype=float
    )


def _body_centered_segments() -> np.ndarray:
    center = np.array([0.5, 0.5, 0.5])
    corners = np.array(
        [[i, j, k] for i in (0.0, 1.0) for j in (0.0, 1.0) for k in (0.0, 1.0)]
    )
    return np.stack([np.broadcast_to(center, corners.shape), corners], axis=1)


def _diamond_graph_segments() -> np.ndarray:
    fcc = np.array([[0, 0, 0], [0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]], dtype=float)
    bonds = np.array(
        [[0.25, 0.25, 0.25], [0.25, -0.25, -0.25], [-0.25, 0.25, -0.25], [-0.25, -0.25, 0.25]]
    )
    segs = [(a, a + b) for a in fcc for b in bonds]
    return np.array(segs, dtype=float)


def _octet_segments() -> np.ndarray:
    corners = [
        np.array([i, j, k], dtype=float)
        for i in (0.0, 1.0)
        for j in (0.0, 1.0)
        for k in (0.0, 1.0)
    ]
    faces = [
        np.array(p, dtype=float)
        for p in [
            (0.5, 0.5, 0),
            (0.5, 0.5, 1),
            (0.5, 0, 0.5),
            (0.5, 1, 0.5),
            (0, 0.5, 0.5),
            (1, 0.5, 0.5),
        ]
    ]
    nodes = corners + faces
    segs = []
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            d2 = float(np.sum((nodes[i] - nodes[j]) ** 2))
            if abs(d2 - 0.5) < 1e-12:
                segs.append((nodes[i], nodes[j]))
    return np.array(segs, dtype=float)


def _point_segment_d2(pts: np.ndarray, a: np.ndarray, d: np.ndarray, dd: np.ndarray):
    """Squared distances (m, S) from points (m, 3) to segments a + t*d."""
    rel = pts[:, None, :] - a[None, :, :]
    t = np.clip((rel * d[None, :, :]).sum(-1) / dd[None, :], 0.0, 1.0)
    diff = rel - t[:, :, None] * d[None, :, :]
    return (diff * diff).sum(-1), t


_BUCKETS_PER_AXIS = 6
_CHUNK = 8192


@dataclass(frozen=True)
class _SkeletalIndex:
    """Exact nearest-strut queries over the wrapped unit cell.

    Segments are tiled into the 3x3x3 neighborhood, pruned by a covering
    radius bound, and bucketed: bucket b keeps every segment that could be
    nearest for some point in b (bucket-box distance <= bucket cover), so a
    query only scans its bucket's candidates."""

    segments: np.ndarray  # (S, 2, 3), for introspection/tests
    a: np.ndarray
    d: np.ndarray
    dd: np.ndarray
    candidates: tuple[np.ndarray, ...]  # per flat bucket id

    @classmethod
    def build(cls, base: np.ndarray) -> "_SkeletalIndex":
        offsets = np.array(
            [[i, j, k] for i in (-1, 0, 1) for j in (-1, 0, 1) for k in (-1, 0, 1)],
            dtype=float,
        )
        tiled = (base[None, :, :, :] + offsets[:, None, None, :]).reshape(-1, 2, 3)
        # Struts on cell boundaries replicate onto themselves; drop exact
        # duplicates (endpoint order canonicalized).
        lo_end = tiled.min(axis=1)
        hi_end = tiled.max(axis=1)
        canon = np.round(np.concatenate([lo_end, hi_end], axis=1), 9)
        _, uniq_idx = np.unique(canon, axis=0, return_index=True)
        tiled = tiled[np.sort(uniq_idx)]
        # Generous pre-prune before probing; validated against the measured
        # covering radius below.
        pre = cls._box_gap(tiled, np.zeros((1, 3)), np.ones((1, 3)))[0] <= 0.95
        tiled = tiled[pre]
        a = tiled[:, 0].copy()
        d = tiled[:, 1] - tiled[:, 0]
        dd = (d * d).sum(-1)

        # Nearest-distance field sampled on a probe grid; Lipschitz slack of
        # half a probe cell diagonal makes the per-bucket cover an upper bound.
        B = _BUCKETS_PER_AXIS
        n_probe = 2 * B + 1
        axes = np.linspace(0.0, 1.0, n_probe)
        probe = np.stack(np.meshgrid(axes, axes, axes, indexing="ij"), -1).reshape(-1, 3)
        nearest = np.empty(len(probe))
        for start in range(0, len(probe), 1024):
            d2, _ = _point_segment_d2(probe[start:start + 1024], a, d, dd)
            nearest[start:start + 1024] = np.sqrt(d2.min(axis=1))
        slack = math.sqrt(3.0) / (2 * (n_probe - 1))
        if nearest.max() + slack > 0.95:
            raise AssertionError("strut graph covering radius exceeds the prune bound")

        probe_bucket = np.minimum((probe * B).astype(int), B - 1)
        flat = (probe_bucket[:, 2] * B + probe_bucket[:, 1]) * B + probe_bucket[:, 0]
        cover = np.zeros(B**3)
        np.maximum.at(cover, flat, nearest)
        cover += slack

        grid = np.arange(B, dtype=float) / B
        bz, by, bx = np.meshgrid(grid, grid, grid, indexing="ij")
        lo = np.stack([bx, by, bz], -1).reshape(-1, 3)
        gap = cls._box_gap(tiled, lo, lo + 1.0 / B)  # (buckets, segs)
        candidates = tuple(np.flatnonzero(gap[b] <= cover[b]) for b in range(B**3))
        return cls(tiled, a, d, dd, candidates)

    @staticmethod
    def _box_gap(segs: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Lower bound on box-to-segment distance via the segment bbox;
        lo/hi are (m, 3) boxes, result is (m, segs)."""
        slo = segs.min(axis=1)[None, :, :]
        shi = segs.max(axis=1)[None, :, :]
        gap = np.maximum(slo - hi[:, None, :], 0.0) + np.maximum(
            lo[:, None, :] - shi, 0.0
        )
        return np.sqrt((gap**2).sum(axis=-1))

    def nearest(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(distance, offset-to-nearest-point) for wrapped points (m, 3)."""
        B = _BUCKETS_PER_AXIS
        bucket = np.minimum((pts * B).astype(int), B - 1)
        flat = (bucket[:, 2] * B + bucket[:, 1]) * B + bucket[:, 0]
        order = np.argsort(flat, kind="stable")
        dist = np.empty(pts.shape[0])
        offsets = np.empty_like(pts)
        sorted_flat = flat[order]
        boundaries = np.flatnonzero(np.diff(sorted_flat)) + 1
        for start, stop in zip(np.r_[0, boundaries], np.r_[boundaries, len(order)]):
            rows = order[start:stop]
            cand = self.candidates[sorted_flat[start]]
            a, d, dd = self.a[cand], self.d[cand], self.dd[cand]
            for cstart in range(0, len(rows), _CHUNK):
                sel = rows[cstart:cstart + _CHUNK]
                d2, t = _point_segment_d2(pts[sel], a, d, dd)
                idx = d2.argmin(axis=1)
                rr = np.arange(len(sel))
                dist[sel] = np.sqrt(d2[rr, idx])
                offsets[sel] = pts[sel] - (a[idx] + t[rr, idx][:, None] * d[idx])
        return dist, offsets


_SKELETAL_INDEX: dict[SurfaceKind, _SkeletalIndex] = {}


def _segments_for(kind: SurfaceKind) -> _SkeletalIndex:
    if kind not in _SKELETAL_INDEX:
        base = {
            SurfaceKind.SKELETAL_1: _simple_cubic_segments,
            SurfaceKind.SKELETAL_2: _body_centered_segments,
            SurfaceKind.SKELETAL_3: _diamond_graph_segments,
            SurfaceKind.SKELETAL_4: _octet_segments,
        }[kind]()
        _SKELETAL_INDEX[kind] = _SkeletalIndex.build(base)
    return _SKELETAL_INDEX[kind]


def _nearest_on_segments(kind: SurfaceKind, q: np.ndarray):
    """Min distance (and offset to the nearest strut point) from wrapped cell
    coords q (..., 3) in [0, 1)."""
    pts = q.reshape(-1, 3)
    dist, offsets = _segments_for(kind).nearest(pts)
    return dist.reshape(q.shape[:-1]), offsets, dist


def _make_skeletal(kind: SurfaceKind):
    def value(qx, qy, qz, spec: FieldSpec):
        q = np.stack(np.broadcast_arrays(qx, qy, qz), axis=-1)
        q = q - np.floor(q)
        dist, _, _ = _nearest_on_segments(kind, q)
        return dist - spec.strut_radius

    def grad(qx, qy, qz, spec: FieldSpec):
        q = np.stack(np.broadcast_arrays(qx, qy, qz), axis=-1)
        shape = q.shape[:-1]
        q = q - np.floor(q)
        _, offsets, dist = _nearest_on_segments(kind, q)
        safe = np.where(dist > 0, dist, 1.0)
        g = offsets / safe[:, None]
        g[dist == 0] = 0.0
        return tuple(g[:, i].reshape(shape) for i in range(3))

    return value, grad


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Surface:
    info: SurfaceInfo
    value: Callable
    grad: Callable


def _make_trig(F, D):
    def value(qx, qy, qz, spec: FieldSpec):
        return F(TWO_PI * qx, TWO_PI * qy, TWO_PI * qz)

    def grad(qx, qy, qz, spec: FieldSpec):
        u, v, w = TWO_PI * qx, TWO_PI * qy, TWO_PI * qz
        return (TWO_PI * D(u, v, w), TWO_PI * D(v, w, u), TWO_PI * D(w, u, v))

    return value, grad


def _entry(kind, formula, periodic, symmetry, value, grad):
    return _Surface(SurfaceInfo(kind, formula, periodic, symmetry), value, grad)


def _build_registry() -> dict[SurfaceKind, _Surface]:
    K, S = SurfaceKind, Symmetry
    reg: dict[SurfaceKind, _Surface] = {}

    trig = [
        (K.GYROID, "sin(x)cos(y) + sin(y)cos(z) + sin(z)cos(x)", S.ODD_INVERSION, _gyroid, _gyroid_d),
        (K.SCHWARZ_P, "cos(x) + cos(y) + cos(z)", S.ODD_HALF_TRANSLATION, _schwarz_p, _schwarz_p_d),
        (
            K.DIAMOND,
            "sin(x)sin(y)sin(z) + sin(x)cos(y)cos(z) + cos(x)sin(y)cos(z) + cos(x)cos(y)sin(z)",
            S.ODD_INVERSION,
            _diamond,
            _diamond_d,
        ),
        (K.NEOVIUS, "3(cos(x) + cos(y) + cos(z)) + 4cos(x)cos(y)cos(z)", S.NONE, _neovius, _neovius_d),
        (
            K.IWP,
            "2(cos(x)cos(y) + cos(y)cos(z) + cos(z)cos(x)) - (cos(2x) + cos(2y) + cos(2z))",
            S.NONE,
            _iwp,
            _iwp_d,
        ),
        (
            K.LIDINOID,
            "0.5 sum_cyc sin(2x)cos(y)sin(z) - 0.5 sum_cyc cos(2x)cos(2y) + 0.15",
            S.NONE,
            _lidinoid,
            _lidinoid_d,
        ),
        (
            K.SPLIT_P,
            "1.1 sum_cyc sin(2x)sin(z)cos(y) - 0.2 sum_cyc cos(2x)cos(2y) - 0.4(cos(2x) + cos(2y) + cos(2z))",
            S.NONE,
            _split_p,
            _split_p_d,
        ),
        (
            K.DOUBLE_GYROID,
            "2.75 sum_cyc sin(2x)sin(z)cos(y) - sum_cyc cos(2x)cos(2y)",
            S.NONE,
            _double_gyroid,
            _double_gyroid_d,
        ),
        (
            K.D_PRIME,
            "0.5(sin(x)sin(y)sin(z) + cos(x)cos(y)cos(z)) - 0.5 sum_cyc cos(2x)cos(2y) - 0.2",
            S.NONE,
            _d_prime,
            _d_prime_d,
        ),
        (
            K.PW_HYBRID,
            "4(cos(x)cos(y) + cos(y)cos(z) + cos(z)cos(x)) - 3cos(x)cos(y)cos(z) + 2.4",
            S.NONE,
            _pw_hybrid,
            _pw_hybrid_d,
        ),
    ]
    for kind, formula, sym, F, D in trig:
        value, grad = _make_trig(F, D)
        reg[kind] = _entry(kind, formula, True, sym, value, grad)

    reg[K.SCHERK_1] = _entry(
        K.SCHERK_1,
        "exp(z)cos(x) - cos(y), z unwrapped",
        False,
        S.NONE,
        _scherk_1_value,
        _scherk_1_grad,
    )
    reg[K.SCHERK_2] = _entry(
        K.SCHERK_2,
        "sin(z) - sinh(x)sinh(y), x and y unwrapped",
        False,
        S.NONE,
        _scherk_2_value,
        _scherk_2_grad,
    )

    skeletal = [
        (K.SKELETAL_1, "dist(p, simple-cubic strut graph) - r"),
        (K.SKELETAL_2, "dist(p, body-centered strut graph) - r"),
        (K.SKELETAL_3, "dist(p, diamond strut graph) - r"),
        (K.SKELETAL_4, "dist(p, octet strut graph) - r"),
    ]
    for kind, formula in skeletal:
        value, grad = _make_skeletal(kind)
        reg[kind] = _entry(kind, formula, True, S.NONE, value, grad)

    return reg


_REGISTRY = _build_registry()


def surface_catalog() -> tuple[SurfaceInfo, ...]:
    """All 16 families in declaration order."""
    return tuple(_REGISTRY[k].info for k in SurfaceKind)


def symmetry_descriptor(kind: SurfaceKind) -> SurfaceInfo:
    return _REGISTRY[SurfaceKind(kind)].info


def _normalized(spec: FieldSpec, x, y, z):
    lx, ly, lz = spec.period_length
    ox, oy, oz = spec.phase_offset
    return x / lx + ox, y / ly + oy, z / lz + oz


def evaluate_batch(spec: FieldSpec, x, y, z) -> np.ndarray:
    """Vectorized field evaluation at mm coordinates (broadcasting inputs)."""
    qx, qy, qz = _normalized(spec, np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
    return np.asarray(_REGISTRY[spec.kind].value(qx, qy, qz, spec), dtype=float)


def gradient_batch(spec: FieldSpec, x, y, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized spatial gradient (per mm) at mm coordinates."""
    qx, qy, qz = _normalized(spec, np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
    gq = _REGISTRY[spec.kind].grad(qx, qy, qz, spec)
    lx, ly, lz = spec.period_length
    return (np.asarray(gq[0]) / lx, np.asarray(gq[1]) / ly, np.asarray(gq[2]) / lz)


def evaluate(spec: FieldSpec, point) -> float:
    """Field value at a single mm point."""
    x, y, z = point
    return float(evaluate_batch(spec, x, y, z))


def gradient(spec: FieldSpec, point) -> np.ndarray:
    """Spatial gradient (per mm) at a single mm point."""
    x, y, z = point
    gx, gy, gz = gradient_batch(spec, x, y, z)
    return np.array([float(gx), float(gy), float(gz)])


def probe(spec: FieldSpec, point) -> FieldSample:
    """Value plus gradient in normalized (per cell-coordinate) units."""
    x, y, z = point
    qx, qy, qz = _normalized(spec, np.asarray(x, float), np.asarray(y, float), np.asarray(z, float))
    entry = _REGISTRY[spec.kind]
    value = float(entry.value(qx, qy, qz, spec))
    gq = entry.grad(qx, qy, qz, spec)
    return FieldSample(value, (float(gq[0]), float(gq[1]), float(gq[2])))
