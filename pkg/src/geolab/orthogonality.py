"""Isosceles and Pythagorean orthogonality.

``x`` is isosceles-orthogonal to ``y`` when ``||x+y|| = ||x-y||``. Any two
unit vectors ``u1, u2`` produce such a pair ``(u1+u2, u1-u2)``, and every
isosceles pair arises this way up to a positive factor; the estimators in
:mod:`geolab.constants` rely on that parameterization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spaces import SpaceSpec, SpaceSpecError, _as_vector, unit_vectors

__all__ = [
    "TOL_ISO",
    "IsoPair",
    "IsoError",
    "iso_residual",
    "pyth_residual",
    "iso_from_unit_pair",
    "iso_complete",
    "iso_complete_batch",
    "unit_iso_partner",
    "unit_iso_partners",
    "lemma3_check",
    "lemma3_margins",
    "random_iso_pairs",
]

TOL_ISO = 1e-9


class IsoError(ValueError):
    """Input cannot produce a certified isosceles pair."""


@dataclass(frozen=True)
class IsoPair:
    x1: tuple
    x2: tuple
    residual: float
    scale: float

    def to_dict(self) -> dict:
        return {
            "x1": list(self.x1),
            "x2": list(self.x2),
            "residual": self.residual,
            "scale": self.scale,
        }


def _pair(space, x, y):
    x, y = _as_vector(space, x), _as_vector(space, y)
    return x, y


def iso_residual(space: SpaceSpec, x: Sequence[float], y: Sequence[float]) -> float:
    x, y = _pair(space, x, y)
    return abs(float(space.norms(x + y)) - float(space.norms(x - y)))


def pyth_residual(space: SpaceSpec, x: Sequence[float], y: Sequence[float]) -> float:
    x, y = _pair(space, x, y)
    n = space.norms
    return abs(float(n(x - y)) ** 2 - float(n(x)) ** 2 - float(n(y)) ** 2)


def certify(space: SpaceSpec, x1, x2, tol: float = TOL_ISO) -> IsoPair:
    """Wrap ``(x1, x2)`` as an :class:`IsoPair` after checking the residual."""
    x1, x2 = _pair(space, x1, x2)
    if not (np.any(x1) or np.any(x2)):
        raise IsoError("(x1, x2) = (0, 0)")
    s, d = float(space.norms(x1 + x2)), float(space.norms(x1 - x2))
    scale = max(float(space.norms(x1)), float(space.norms(x2)), s)
    residual = abs(s - d)
    if residual > tol * scale:
        raise IsoError(f"residual {residual:.3g} exceeds {tol:g} * scale {scale:.3g}")
    return IsoPair(tuple(map(float, x1)), tuple(map(float, x2)), residual, scale)


def iso_from_unit_pair(space: SpaceSpec, u1, u2) -> IsoPair:
    u1, u2 = _pair(space, u1, u2)
    for u in (u1, u2):
        if abs(float(space.norms(u)) - 1.0) > 1e-9:
            raise IsoError(f"not a unit vector: {u.tolist()!r}")
    return certify(space, u1 + u2, u1 - u2, tol=2 * TOL_ISO)


def iso_complete_batch(space: SpaceSpec, X: np.ndarray, Y: np.ndarray,
                       width: float = 1e-12) -> np.ndarray:
    """Row-wise :func:`iso_complete` without the input checks."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)

    def g(a):
        a = a[:, None]
        return space.norms((1 + a) * X + Y) - space.norms((a - 1) * X + Y)

    m = len(X)
    lo, hi = np.full(m, -1.0), np.full(m, 1.0)
    glo, ghi = g(lo), g(hi)
    while True:
        grow_lo, grow_hi = glo > 0, ghi < 0
        if not (grow_lo.any() or grow_hi.any()):
            break
        if max(-lo.min(), hi.max()) > 1e6:
            raise IsoError("bracket expansion exceeded |alpha| = 1e6")
        lo = np.where(grow_lo, 2 * lo, lo)
        hi = np.where(grow_hi, 2 * hi, hi)
        glo, ghi = g(lo), g(hi)
    root = np.where(glo == 0, lo, np.where(ghi == 0, hi, np.nan))
    open_ = np.isnan(root)
    while True:
        todo = open_ & (hi - lo > width)
        if not todo.any():
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        hit = todo & (gm == 0)
        root = np.where(hit, mid, root)
        open_ &= ~hit
        lo = np.where(todo & (gm < 0), mid, lo)
        hi = np.where(todo & (gm > 0), mid, hi)
    return np.where(open_, 0.5 * (lo + hi), root)


def iso_complete(space: SpaceSpec, x, y, width: float = 1e-12) -> float:
    """Find ``alpha`` with ``x`` isosceles-orthogonal to ``alpha*x + y``.

    g(alpha) = ||(1+alpha)x + y|| - ||(alpha-1)x + y|| tends to +-2||x|| at
    +-infinity, so a bracket exists; it is widened by doubling from [-1, 1]
    and then bisected down to ``width``.
    """
    x, y = _pair(space, x, y)
    xx = float(x @ x)
    if xx == 0.0:
        raise IsoError("x must be nonzero")
    if np.linalg.norm(y - (x @ y) / xx * x) <= 1e-12 * np.linalg.norm(y):
        raise IsoError("y is parallel to x")
    return float(iso_complete_batch(space, x[None, :], y[None, :], width)[0])


def unit_iso_partners(space: SpaceSpec, theta: np.ndarray, iters: int = 60) -> np.ndarray:
    """Vectorized partner search in the plane.

    For each unit ``x = u(theta)`` bisect ``phi`` on ``[theta, theta+pi]``
    where ``||x+u(phi)|| - ||x-u(phi)||`` goes from +2 to -2.
    """
    if space.dim != 2:
        raise SpaceSpecError("unit_iso_partner needs a planar space")
    theta = np.asarray(theta, dtype=float)
    x = unit_vectors(space, theta[..., None])
    lo = theta.copy()
    hi = theta + math.pi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        u = unit_vectors(space, mid[..., None])
        pos = space.norms(x + u) - space.norms(x - u) > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    return unit_vectors(space, (0.5 * (lo + hi))[..., None])


def unit_iso_partner(space: SpaceSpec, x) -> np.ndarray:
    x = _as_vector(space, x)
    if space.dim != 2:
        raise SpaceSpecError("unit_iso_partner needs a planar space")
    if abs(float(space.norms(x)) - 1.0) > 1e-9:
        raise IsoError(f"not a unit vector: {x.tolist()!r}")
    theta = math.atan2(x[1], x[0])
    return unit_iso_partners(space, np.array([theta]))[0]


def lemma3_margins(space: SpaceSpec, x1: np.ndarray, x2: np.ndarray, alpha: float) -> np.ndarray:
    """Smallest slack ``rhs - lhs`` over the applicable isosceles inequalities.

    Rows of ``x1``/``x2`` are isosceles pairs. For |alpha| >= 1 the checks
    are ||x1+a x2|| <= |a| ||x1 +- x2|| and ||x1 +- x2|| <= ||x1+a x2||; for
    |alpha| <= 1 they are ||x1+a x2|| <= ||x1 +- x2|| and
    |a| ||x1 +- x2|| <= ||x1+a x2||. At |alpha| = 1 both sets apply.
    """
    n = space.norms
    a = abs(alpha)
    combo = n(x1 + alpha * x2)
    margins = []
    for side in (n(x1 + x2), n(x1 - x2)):
        if a >= 1:
            margins += [a * side - combo, combo - side]
        if a <= 1:
            margins += [side - combo, combo - a * side]
    return np.min(margins, axis=0)


def lemma3_check(space: SpaceSpec, pair: IsoPair, alpha: float, slack: float = 1e-9) -> bool:
    x1 = np.asarray(pair.x1)
    x2 = np.asarray(pair.x2)
    return bool(lemma3_margins(space, x1, x2, alpha) >= -slack * pair.scale)


def random_iso_pairs(space: SpaceSpec, n: int, seed: int = 0):
    """``n`` isosceles pairs ``(u1+u2, u1-u2)`` from seeded random unit vectors.

    Returns ``(x1, x2, scale)`` arrays; any dimension.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    d = space.dim
    u1 = rng.standard_normal((n, d))
    u2 = rng.standard_normal((n, d))
    u1 /= space.norms(u1)[:, None]
    u2 /= space.norms(u2)[:, None]
    # rescale so magnitudes vary; the relation is homogeneous
    lam = np.exp(rng.uniform(-3, 3, n))[:, None]
    x1, x2 = lam * (u1 + u2), lam * (u1 - u2)
    scale = np.maximum.reduce([space.norms(x1), space.norms(x2), space.norms(x1 + x2)])
    return x1, x2, scale
