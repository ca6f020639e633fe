"""Estimators for geometric constants of normed spaces.

Each supremum is a :func:`geolab.optimize.maximize` call over angular
coordinates of unit vectors (``dim - 1`` periodic angles per vector), plus
scalar parameters where the definition needs them. Values are therefore
lower bounds of the true suprema (upper bounds for the infimum in
:func:`modulus_convexity`).

Isosceles-constrained quantities use the pair ``x1 = u1 + u2``,
``x2 = u1 - u2`` over unit ``u1, u2``. It is isosceles by construction, every
isosceles pair is a positive multiple of one of these, and the ratios below
are invariant under a common rescaling of ``(x1, x2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .optimize import Estimate, OptConfig, maximize
from .orthogonality import iso_complete_batch, random_iso_pairs, unit_iso_partners
from .spaces import Euclidean, Lp, LpLq, SpaceSpec, SpaceSpecError, directions, unit_vectors

__all__ = [
    "CurvePoint",
    "SampleResult",
    "NonsquareDiagnostic",
    "ConsistencyError",
    "z_profile",
    "czi",
    "czi_curve",
    "z_curve",
    "czi_raw_sample",
    "zbaganu",
    "james",
    "nj_constant",
    "h_tilde",
    "modulus_convexity",
    "modulus_smoothness",
    "smoothness_slope",
    "nonsquare_diagnostic",
    "orthogonality_gap",
    "example_bounds",
    "CZI_GRID",
]

TWO_PI = 2.0 * math.pi

# default t-grid for curves: k/100, k = 0..50
CZI_GRID = tuple(k / 100 for k in range(51))


class ConsistencyError(AssertionError):
    """Two routes to the same quantity disagree beyond tolerance."""


@dataclass(frozen=True)
class CurvePoint:
    t: float
    value: float
    lower_bound: float
    upper_bound: float
    method: str


@dataclass(frozen=True)
class SampleResult:
    """Maximum over random samples; ``samples == 0`` means nothing was drawn."""

    value: float
    samples: int
    witness: Optional[tuple] = None

    @property
    def status(self) -> str:
        return "ok" if self.samples else "no samples"

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class NonsquareDiagnostic:
    flag: bool
    t_witness: Optional[float]
    james_value: float
    consistent: bool


def _cfg(cfg):
    return cfg if cfg is not None else OptConfig()


def _angles(space: SpaceSpec, count: int):
    k = space.dim - 1
    return [(0.0, TWO_PI)] * (k * count), [True] * (k * count)


def _units(space: SpaceSpec, P: np.ndarray, count: int, offset: int = 0):
    k = space.dim - 1
    return [
        unit_vectors(space, P[:, offset + i * k: offset + (i + 1) * k]) for i in range(count)
    ]


def _exact(value: float, nparams: int) -> Estimate:
    return Estimate(value=value, argmax=[0.0] * nparams, evaluations=0,
                    status="converged", refinement_steps=0)


def _maximize_pairs(space, objective, cfg, scalars=()):
    """Maximize ``objective(u1, u2, *scalar_columns)`` over unit pairs.

    ``scalars`` lists ``(lo, hi)`` boxes for extra parameters placed after
    the angles.
    """
    box, periodic = _angles(space, 2)
    box = box + list(scalars)
    periodic = periodic + [False] * len(scalars)
    nang = len(periodic) - len(scalars)

    def f(P):
        u1, u2 = _units(space, P, 2)
        return objective(u1, u2, *(P[:, nang + j] for j in range(len(scalars))))

    return maximize(f, box, _cfg(cfg), periodic=periodic, vectorized=True)


# -- Z profile and the isosceles Zbaganu constant ------------------------------

def z_profile(space: SpaceSpec, t: float, cfg: Optional[OptConfig] = None) -> Estimate:
    """sup of ||u1 + t u2|| * ||u1 - t u2|| / 2 over unit u1, u2; t in [0, 1]."""
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    if t == 0.0:
        return _exact(0.5, 2 * (space.dim - 1))
    n = space.norms
    return _maximize_pairs(space, lambda u1, u2: n(u1 + t * u2) * n(u1 - t * u2) / 2, cfg)


def _czi_ratio(space, u1, u2, t):
    n = space.norms
    t = np.asarray(t)[..., None] if np.ndim(t) else t
    x1, x2 = u1 + u2, u1 - u2
    return n(t * x1 + (1 - t) * x2) * n((1 - t) * x1 + t * x2) / n(x1 + x2) ** 2


def czi(space: SpaceSpec, t: float, method: str = "direct",
        cfg: Optional[OptConfig] = None) -> Estimate:
    """Isosceles Zbaganu constant at ``t`` in [0, 1/2].

    ``direct`` maximizes the defining ratio over the unit-pair isosceles
    parameterization; ``identity`` returns half of ``z_profile(1 - 2t)``.
    """
    if not (0.0 <= t <= 0.5):
        raise ValueError(f"t must lie in [0, 1/2], got {t!r}")
    if method == "identity":
        est = z_profile(space, 1.0 - 2.0 * t, cfg)
        est.value *= 0.5
        return est
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    return _maximize_pairs(space, lambda u1, u2: _czi_ratio(space, u1, u2, t), cfg)


def czi_curve(space: SpaceSpec, ts: Sequence[float] = CZI_GRID, method: str = "direct",
              cfg: Optional[OptConfig] = None) -> list:
    return [
        CurvePoint(t, czi(space, t, method, cfg).value, t - t * t, (1 - t) ** 2, method)
        for t in ts
    ]


def z_curve(space: SpaceSpec, ts: Sequence[float], cfg: Optional[OptConfig] = None) -> list:
    return [
        CurvePoint(t, z_profile(space, t, cfg).value, (1 - t * t) / 2, (1 + t) ** 2 / 2, "direct")
        for t in ts
    ]


def _random_iso(space, n, seed):
    if space.dim != 2:
        raise SpaceSpecError("sampling oracle needs a planar space")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.standard_normal((n, 2))
    y = rng.standard_normal((n, 2))
    alpha = iso_complete_batch(space, x, y)
    return x, alpha[:, None] * x + y


def czi_raw_sample(space: SpaceSpec, t: float, n: int, seed: int = 0) -> SampleResult:
    """Independent oracle: best raw ratio over ``n`` random isosceles pairs.

    Pairs are built by solving for the isosceles completion of random
    ``(x, y)``, never through the unit-pair parameterization.
    """
    if n <= 0:
        return SampleResult(-math.inf, 0)
    x1, x2 = _random_iso(space, n, seed)
    nrm = space.norms
    ratio = nrm(t * x1 + (1 - t) * x2) * nrm((1 - t) * x1 + t * x2) / nrm(x1 + x2) ** 2
    i = int(np.argmax(ratio))
    return SampleResult(float(ratio[i]), n, (tuple(x1[i]), tuple(x2[i])))


def zbaganu(space: SpaceSpec, method: str = "direct", cfg: Optional[OptConfig] = None) -> Estimate:
    """Zbaganu constant sup ||x+y|| ||x-y|| / (||x||^2 + ||y||^2).

    ``direct`` scales the larger vector to the unit sphere and maximizes over
    ``(u1, u2, s)`` with ``y = s u2``. The profile methods maximize
    ``factor * czi((1-eta)/2) / (1 + eta^2)`` jointly over ``eta`` and the
    czi pair, with factor 4 (``profile_corrected``) or factor 2
    (``profile_paper``). Factor 2 gives half of ``direct``, e.g. 1 instead
    of 2 on l1^2; it is kept only so that the discrepancy can be reported.
    """
    n = space.norms
    if method == "direct":
        return _maximize_pairs(
            space,
            lambda u1, u2, s: n(u1 + s[:, None] * u2) * n(u1 - s[:, None] * u2) / (1 + s * s),
            cfg, scalars=[(0.0, 1.0)],
        )
    factors = {"profile_corrected": 4.0, "profile_paper": 2.0}
    if method not in factors:
        raise ValueError(f"unknown method {method!r}")
    c = factors[method]
    return _maximize_pairs(
        space,
        lambda u1, u2, eta: c * _czi_ratio(space, u1, u2, (1 - eta) / 2) / (1 + eta * eta),
        cfg, scalars=[(0.0, 1.0)],
    )


def james(space: SpaceSpec, method: str = "minform", cfg: Optional[OptConfig] = None) -> Estimate:
    """James constant: sup min(||u1+u2||, ||u1-u2||), or in the planar case
    sup ||x + y|| over unit x with its unit isosceles partner y."""
    n = space.norms
    if method == "minform":
        return _maximize_pairs(space, lambda u1, u2: np.minimum(n(u1 + u2), n(u1 - u2)), cfg)
    if method != "isoform":
        raise ValueError(f"unknown method {method!r}")
    if space.dim != 2:
        raise SpaceSpecError("isoform James constant needs a planar space")

    def f(P):
        theta = P[:, 0]
        x = unit_vectors(space, theta[:, None])
        return n(x + unit_iso_partners(space, theta))

    return maximize(f, [(0.0, TWO_PI)], _cfg(cfg), periodic=[True], vectorized=True)


def nj_constant(space: SpaceSpec, variant: str = "classic",
                cfg: Optional[OptConfig] = None) -> Estimate:
    """von Neumann-Jordan constant: ``classic``, ``modified`` (unit pairs) or
    ``iso`` (restricted to isosceles pairs)."""
    n = space.norms
    if variant == "classic":
        def obj(u1, u2, s):
            s2 = s[:, None] * u2
            return (n(u1 + s2) ** 2 + n(u1 - s2) ** 2) / (2 * (1 + s * s))
        return _maximize_pairs(space, obj, cfg, scalars=[(0.0, 1.0)])
    if variant == "modified":
        return _maximize_pairs(space, lambda u1, u2: (n(u1 + u2) ** 2 + n(u1 - u2) ** 2) / 4, cfg)
    if variant == "iso":
        return _maximize_pairs(space, lambda u1, u2: 4 / (n(u1 + u2) ** 2 + n(u1 - u2) ** 2), cfg)
    raise ValueError(f"unknown variant {variant!r}")


def h_tilde(space: SpaceSpec, cfg: Optional[OptConfig] = None) -> Estimate:
    """sup (||x1|| + ||x2||) / ||x1 + x2|| over isosceles pairs; in [1, 2]."""
    n = space.norms
    return _maximize_pairs(space, lambda u1, u2: (n(u1 + u2) + n(u1 - u2)) / 2, cfg)


# -- moduli --------------------------------------------------------------------

def _plane_arc(space, d1, w, phi):
    """Unit vectors along the arc from ``d1`` towards ``w`` (Euclidean angle phi)."""
    c = np.cos(phi)[:, None] * d1 + np.sin(phi)[:, None] * w
    return c / space.norms(c)[:, None]


def _partner_at_distance(space, u1, d1, w, eps, iters=60):
    # ||u1 - arc(phi)|| climbs monotonically from 0 to 2 on [0, pi]
    lo = np.zeros(len(u1))
    hi = np.full(len(u1), math.pi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below = space.norms(u1 - _plane_arc(space, d1, w, mid)) < eps
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return _plane_arc(space, d1, w, 0.5 * (lo + hi))


def _orthonormal_partner(d1, w):
    """Unit vector orthogonal to ``d1`` in span(d1, w), Euclidean sense."""
    w = w - (w * d1).sum(axis=1, keepdims=True) * d1
    nw = np.linalg.norm(w, axis=1)
    # w parallel to d1: use the axis least aligned with d1 instead
    fallback = np.eye(d1.shape[1])[np.argmin(np.abs(d1), axis=1)]
    w = np.where((nw < 1e-9)[:, None], fallback, w)
    w = w - (w * d1).sum(axis=1, keepdims=True) * d1
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def modulus_convexity(space: SpaceSpec, eps: float, cfg: Optional[OptConfig] = None) -> Estimate:
    """inf of 1 - ||u1 + u2|| / 2 over unit u1, u2 with ||u1 - u2|| = eps.

    The partner of ``u1`` at distance ``eps`` is found by bisection along the
    unit circle of a 2-dimensional section through ``u1``; in the plane both
    arcs (counterclockwise and clockwise) are searched. The returned
    ``value`` is the infimum estimate (an upper bound of the true infimum).
    """
    if not (0.0 <= eps <= 2.0):
        raise ValueError(f"eps must lie in [0, 2], got {eps!r}")
    if eps == 0.0:
        return _exact(0.0, space.dim - 1)
    n = space.norms
    k = space.dim - 1
    if space.dim == 2:
        def f(P):
            d1 = directions(P[:, :1])
            u1 = d1 / n(d1)[:, None]
            perp = np.stack([-d1[:, 1], d1[:, 0]], axis=1)
            best = None
            for w in (perp, -perp):
                u2 = _partner_at_distance(space, u1, d1, w, eps)
                val = n(u1 + u2) / 2 - 1
                best = val if best is None else np.maximum(best, val)
            return best
        box, periodic = [(0.0, TWO_PI)], [True]
    else:
        def f(P):
            d1 = directions(P[:, :k])
            u1 = d1 / n(d1)[:, None]
            w = _orthonormal_partner(d1, directions(P[:, k:]))
            u2 = _partner_at_distance(space, u1, d1, w, eps)
            return n(u1 + u2) / 2 - 1
        box, periodic = _angles(space, 2)

    est = maximize(f, box, _cfg(cfg), periodic=periodic, vectorized=True)
    est.value = -est.value
    return est


def modulus_smoothness(space: SpaceSpec, t: float, cfg: Optional[OptConfig] = None) -> Estimate:
    """sup (||u1 + t u2|| + ||u1 - t u2||) / 2 - 1 over unit u1, u2."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t!r}")
    if t == 0.0:
        return _exact(0.0, 2 * (space.dim - 1))
    n = space.norms
    return _maximize_pairs(space, lambda u1, u2: (n(u1 + t * u2) + n(u1 - t * u2)) / 2 - 1, cfg)


def smoothness_slope(space: SpaceSpec, t_list: Sequence[float], cfg: Optional[OptConfig] = None,
                     tol: float = 1e-6, both: bool = False) -> list:
    """Difference quotients (Z(t) - 1/2) / t for small t.

    Each value is recomputed as (2 czi((1-t)/2) - 1/2) / t through the direct
    isosceles estimator; a disagreement above ``tol`` raises
    :class:`ConsistencyError`. With ``both=True`` pairs are returned.
    """
    out = []
    for t in t_list:
        if not (0.0 < t <= 0.1):
            raise ValueError(f"slope parameters must lie in (0, 0.1], got {t!r}")
        z_form = (z_profile(space, t, cfg).value - 0.5) / t
        czi_form = (2 * czi(space, (1 - t) / 2, "direct", cfg).value - 0.5) / t
        if abs(z_form - czi_form) > tol:
            raise ConsistencyError(f"slope forms disagree at t={t}: {z_form} vs {czi_form}")
        out.append((z_form, czi_form) if both else z_form)
    return out


# -- diagnostics ---------------------------------------------------------------

def nonsquare_diagnostic(space: SpaceSpec, cfg: Optional[OptConfig] = None, tol: float = 1e-3,
                         ts: Sequence[float] = tuple(k / 100 for k in range(41)),
                         curve: Optional[dict] = None,
                         james_value: Optional[float] = None) -> NonsquareDiagnostic:
    """Flag spaces whose czi curve touches the upper bound (1 - t)^2.

    The flag is compared with the James constant: touching the bound should
    coincide with J(X) >= 2 - 10 tol. ``curve`` (t -> czi value) and
    ``james_value`` may be supplied to reuse earlier computations.
    """
    witness = None
    for t in ts:
        value = curve[t] if curve is not None and t in curve else czi(space, t, "direct", cfg).value
        if value >= (1 - t) ** 2 - tol:
            witness = t
            break
    if james_value is None:
        james_value = james(space, "minform", cfg).value
    flag = witness is not None
    return NonsquareDiagnostic(flag, witness, james_value, flag == (james_value >= 2 - 10 * tol))


def orthogonality_gap(space: SpaceSpec, n: int, seed: int = 0) -> SampleResult:
    """max of | ||x1-x2||^2 - ||x1||^2 - ||x2||^2 | / scale^2 over random isosceles pairs.

    Planar pairs come from isosceles completion of random vectors; in higher
    dimension the unit-pair construction is used instead.
    """
    if n <= 0:
        return SampleResult(0.0, 0)
    if space.dim == 2:
        x1, x2 = _random_iso(space, n, seed)
    else:
        x1, x2, _ = random_iso_pairs(space, n, seed)
    nrm = space.norms
    a, b, s = nrm(x1), nrm(x2), nrm(x1 + x2)
    scale = np.maximum.reduce([a, b, s])
    gap = np.abs(nrm(x1 - x2) ** 2 - a * a - b * b) / scale ** 2
    i = int(np.argmax(gap))
    return SampleResult(float(gap[i]), n, (tuple(x1[i]), tuple(x2[i])))


def example_bounds(space: SpaceSpec, t: float) -> dict:
    """Closed-form lower bounds for czi from explicit witness pairs.

    ``lp_bound`` = 2^(-2/p) ((1-t)^p + t^p)^(2/p) for the l_p family;
    ``lplq_bound`` = 2^(-2/p-2) [(1 + c - 2ct)^p + (1 - c + 2ct)^p]^(2/p)
    with c = 2^(1/p - 1/q) for the l_p-l_q plane.
    """
    if not (0.0 <= t <= 0.5):
        raise ValueError(f"t must lie in [0, 1/2], got {t!r}")
    out = {"lp_bound": None, "lplq_bound": None}
    if isinstance(space, (Lp, Euclidean)):
        p = space.p
        if math.isinf(p):
            out["lp_bound"] = max(1 - t, t) ** 2
        else:
            out["lp_bound"] = 2 ** (-2 / p) * ((1 - t) ** p + t ** p) ** (2 / p)
    elif isinstance(space, LpLq):
        p, q = space.p, space.q
        c = 2 ** (1 / p - 1 / q)
        out["lplq_bound"] = 2 ** (-2 / p - 2) * (
            (1 + c - 2 * c * t) ** p + (1 - c + 2 * c * t) ** p
        ) ** (2 / p)
    return out
