"""Concrete finite-dimensional real normed spaces.

Every space is a frozen dataclass exposing ``dim``, ``is_hilbert`` and a
vectorized ``norms(arr)`` that evaluates the norm along the last axis of
``arr``. The module-level :func:`norm` is the validated single-vector entry
point; estimators call ``space.norms`` directly on batches.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "SpaceSpecError",
    "Lp",
    "LpLq",
    "Polyhedral",
    "GridSup",
    "Euclidean",
    "SpaceSpec",
    "norm",
    "unit_vector",
    "unit_vectors",
    "directions",
    "normalize",
    "parse_space_spec",
    "format_space_spec",
    "hexagon",
    "DEFAULT_CATALOG",
]


class SpaceSpecError(ValueError):
    """Invalid space description or a vector that does not fit the space."""


def _lp_norms(arr: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(arr)
    if p == 1.0:
        return a.sum(axis=-1)
    if math.isinf(p):
        return a.max(axis=-1)
    if p == 2.0:
        return np.sqrt((a * a).sum(axis=-1))
    # scale by the max entry so the powers cannot overflow
    m = a.max(axis=-1, keepdims=True)
    safe_m = np.where(m > 0, m, 1.0)
    r = a / safe_m
    with np.errstate(divide="ignore"):
        powers = np.where(r > 0, np.exp(p * np.log(np.where(r > 0, r, 1.0))), 0.0)
    return m[..., 0] * powers.sum(axis=-1) ** (1.0 / p)


@dataclass(frozen=True)
class Lp:
    dim: int
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise SpaceSpecError(f"lp: dim must be an integer >= 2, got {self.dim!r}")
        if not (self.p >= 1.0):
            raise SpaceSpecError(f"lp: p must be >= 1, got {self.p!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", float(self.p))

    @property
    def is_hilbert(self) -> bool:
        return self.p == 2.0

    def norms(self, arr: np.ndarray) -> np.ndarray:
        return _lp_norms(arr, self.p)


@dataclass(frozen=True)
class Euclidean:
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise SpaceSpecError(f"euclidean: dim must be an integer >= 2, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))

    p = 2.0
    is_hilbert = True

    def norms(self, arr: np.ndarray) -> np.ndarray:
        return _lp_norms(arr, 2.0)


@dataclass(frozen=True)
class GridSup:
    """R^n with the max-norm; stands in for C([a,b]) sampled on n nodes."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise SpaceSpecError(f"gridsup: n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    is_hilbert = False

    @property
    def dim(self) -> int:
        return self.n

    def norms(self, arr: np.ndarray) -> np.ndarray:
        return np.abs(arr).max(axis=-1)


@dataclass(frozen=True)
class LpLq:
    """R^2 normed by l_p on the closed quadrants x1*x2 >= 0 and l_q elsewhere."""

    p: float
    q: float

    def __post_init__(self):
        if not (self.q >= 1.0):
            raise SpaceSpecError(f"lplq: q must be >= 1, got {self.q!r}")
        if not (self.p >= 1.0):
            raise SpaceSpecError(f"lplq: p must be >= 1, got {self.p!r}")
        if math.isinf(self.p):
            raise SpaceSpecError("lplq: p must be finite")
        if self.q > self.p:
            raise SpaceSpecError(f"lplq: q exceeds p (q={self.q!r}, p={self.p!r})")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))

    dim = 2

    @property
    def is_hilbert(self) -> bool:
        return self.p == 2.0 and self.q == 2.0

    def norms(self, arr: np.ndarray) -> np.ndarray:
        same_sign = arr[..., 0] * arr[..., 1] >= 0
        if self.p == self.q:
            return _lp_norms(arr, self.p)
        return np.where(same_sign, _lp_norms(arr, self.p), _lp_norms(arr, self.q))


@dataclass(frozen=True)
class Polyhedral:
    """Planar norm whose unit ball is a centrally symmetric convex polygon.

    ``vertices`` are listed counterclockwise. The norm of ``v`` is found by
    locating the polygon edge hit by the ray through ``v`` (binary search on
    vertex angles) and solving the 2x2 ray/edge system by Cramer's rule.
    """

    vertices: tuple

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 4:
            raise SpaceSpecError(f"poly: need at least 4 vertices, got {len(verts)}")
        V = np.array(verts)
        if not np.all(np.isfinite(V)):
            raise SpaceSpecError("poly: vertex coordinates must be finite")
        scale = np.abs(V).max()
        for x, y in verts:
            if not np.any(np.all(np.abs(V + np.array([x, y])) <= 1e-12 * scale, axis=1)):
                raise SpaceSpecError(f"poly: asymmetric polygon, missing -({x!r},{y!r})")
        m = len(verts)
        for i in range(m):
            e1 = V[(i + 1) % m] - V[i]
            e2 = V[(i + 2) % m] - V[(i + 1) % m]
            if e1[0] * e2[1] - e1[1] * e2[0] <= 0:
                raise SpaceSpecError(
                    f"poly: vertices must form a strictly convex counterclockwise polygon "
                    f"(fails at vertex {verts[(i + 1) % m]!r})"
                )
        ang = np.arctan2(V[:, 1], V[:, 0])
        start = int(np.argmin(ang))
        order = [(start + k) % m for k in range(m)]
        # rotated copy whose angles increase strictly over (-pi, pi]
        object.__setattr__(self, "_V", V[order])
        object.__setattr__(self, "_ang", ang[order])

    dim = 2
    is_hilbert = False

    def norms(self, arr: np.ndarray) -> np.ndarray:
        V, ang = self._V, self._ang
        m = len(V)
        x, y = arr[..., 0], arr[..., 1]
        phi = np.arctan2(y, x)
        i = np.searchsorted(ang, phi, side="right") - 1
        i = np.where(i < 0, m - 1, i)
        a = V[i]
        e = V[(i + 1) % m] - a
        num = e[..., 0] * y - e[..., 1] * x
        den = e[..., 0] * a[..., 1] - e[..., 1] * a[..., 0]
        return np.abs(num / den)


SpaceSpec = Union[Lp, LpLq, Polyhedral, GridSup, Euclidean]


def _as_vector(space, v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != space.dim:
        raise SpaceSpecError(
            f"dimension mismatch: vector of shape {arr.shape} in a space of dim {space.dim}"
        )
    if not np.all(np.isfinite(arr)):
        raise SpaceSpecError(f"non-finite coordinate in {arr.tolist()!r}")
    return arr


def norm(space: SpaceSpec, v: Sequence[float]) -> float:
    """Norm of a single vector ``v`` in ``space``."""
    return float(space.norms(_as_vector(space, v)))


def directions(angles: np.ndarray) -> np.ndarray:
    """Euclidean unit directions from hyperspherical angles.

    ``angles`` has shape ``(..., n-1)``; the result has shape ``(..., n)``
    with ``x_1 = cos a_1``, ``x_k = sin a_1 ... sin a_{k-1} cos a_k`` and the
    last coordinate the full sine product.
    """
    angles = np.asarray(angles, dtype=float)
    k = angles.shape[-1]
    out = np.empty(angles.shape[:-1] + (k + 1,))
    sin_prod = np.ones(angles.shape[:-1])
    for j in range(k):
        out[..., j] = sin_prod * np.cos(angles[..., j])
        sin_prod = sin_prod * np.sin(angles[..., j])
    out[..., k] = sin_prod
    return out


def unit_vectors(space: SpaceSpec, angles: np.ndarray) -> np.ndarray:
    """Batch version of :func:`unit_vector`."""
    d = directions(angles)
    return d / space.norms(d)[..., None]


def unit_vector(space: SpaceSpec, direction: Sequence[float]) -> np.ndarray:
    """Point of the unit sphere of ``space`` in the given angular direction."""
    angles = np.atleast_1d(np.asarray(direction, dtype=float))
    if angles.shape != (space.dim - 1,):
        raise SpaceSpecError(f"expected {space.dim - 1} angle(s), got {angles.shape[0]}")
    return unit_vectors(space, angles)


def normalize(space: SpaceSpec, v: Sequence[float]) -> np.ndarray:
    arr = _as_vector(space, v)
    n = float(space.norms(arr))
    if n == 0.0:
        raise SpaceSpecError("cannot normalize the zero vector")
    return arr / n


# -- spec-string grammar ------------------------------------------------------

_FAMILY_RE = re.compile(r"^\s*([A-Za-z]+)\s*:(.*)$", re.S)


def _parse_real(token: str, name: str, allow_inf: bool = False) -> float:
    t = token.strip().lower()
    if allow_inf and t in ("inf", "infinity", "oo"):
        return math.inf
    try:
        val = float(t)
    except ValueError:
        raise SpaceSpecError(f"bad value for {name}: {token.strip()!r}") from None
    if not math.isfinite(val):
        raise SpaceSpecError(f"bad value for {name}: {token.strip()!r}")
    return val


def _parse_int(token: str, name: str) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise SpaceSpecError(f"bad integer for {name}: {token.strip()!r}") from None


def _parse_params(body: str, family: str, required: Sequence[str]) -> dict:
    params = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        if "=" not in item:
            raise SpaceSpecError(f"{family}: expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip().lower()
        if key not in required:
            raise SpaceSpecError(f"{family}: unknown parameter {key!r}")
        params[key] = value
    for key in required:
        if key not in params:
            raise SpaceSpecError(f"{family}: missing parameter {key!r}")
    return params


def parse_space_spec(s: str) -> SpaceSpec:
    """Parse e.g. ``"lp:dim=2,p=inf"`` or ``"poly:(1,0);(0,1);(-1,0);(0,-1)"``."""
    if not s or not s.strip():
        raise SpaceSpecError("empty space spec")
    match = _FAMILY_RE.match(s)
    if match is None:
        raise SpaceSpecError(f"missing family prefix in {s!r}")
    family, body = match.group(1).lower(), match.group(2)
    if family == "lp":
        kv = _parse_params(body, family, ("dim", "p"))
        p = _parse_real(kv["p"], "p", allow_inf=True)
        if p < 1:
            raise SpaceSpecError(f"lp: p below 1: {kv['p'].strip()!r}")
        return Lp(_parse_int(kv["dim"], "dim"), p)
    if family == "lplq":
        kv = _parse_params(body, family, ("p", "q"))
        p, q = _parse_real(kv["p"], "p"), _parse_real(kv["q"], "q")
        if p < 1:
            raise SpaceSpecError(f"lplq: p below 1: {kv['p'].strip()!r}")
        if q < 1:
            raise SpaceSpecError(f"lplq: q below 1: {kv['q'].strip()!r}")
        if q > p:
            raise SpaceSpecError(f"lplq: q exceeds p: q={kv['q'].strip()!r}")
        return LpLq(p, q)
    if family == "gridsup":
        kv = _parse_params(body, family, ("n",))
        return GridSup(_parse_int(kv["n"], "n"))
    if family == "euclidean":
        kv = _parse_params(body, family, ("dim",))
        return Euclidean(_parse_int(kv["dim"], "dim"))
    if family == "poly":
        verts = []
        for tok in filter(None, (t.strip() for t in body.split(";"))):
            inner = re.fullmatch(r"\(([^,()]+),([^,()]+)\)", tok.replace(" ", ""))
            if inner is None:
                raise SpaceSpecError(f"poly: bad vertex token {tok!r}")
            verts.append((_parse_real(inner.group(1), "x"), _parse_real(inner.group(2), "y")))
        return Polyhedral(tuple(verts))
    raise SpaceSpecError(f"unknown family {match.group(1)!r}")


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def format_space_spec(space: SpaceSpec) -> str:
    if isinstance(space, Euclidean):
        return f"euclidean:dim={space.dim}"
    if isinstance(space, Lp):
        return f"lp:dim={space.dim},p={_fmt(space.p)}"
    if isinstance(space, LpLq):
        return f"lplq:p={_fmt(space.p)},q={_fmt(space.q)}"
    if isinstance(space, GridSup):
        return f"gridsup:n={space.n}"
    if isinstance(space, Polyhedral):
        return "poly:" + ";".join(f"({_fmt(x)},{_fmt(y)})" for x, y in space.vertices)
    raise TypeError(f"not a space spec: {space!r}")


def hexagon() -> Polyhedral:
    h = math.sqrt(3.0) / 2.0
    return Polyhedral(((1.0, 0.0), (0.5, h), (-0.5, h), (-1.0, 0.0), (-0.5, -h), (0.5, -h)))


DEFAULT_CATALOG: tuple = (
    Euclidean(2),
    Lp(2, 1.0),
    Lp(2, 1.5),
    Lp(2, 3.0),
    Lp(2, math.inf),
    LpLq(2.0, 1.0),
    LpLq(3.0, 1.5),
    hexagon(),
    GridSup(4),
)
