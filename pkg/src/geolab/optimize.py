"""Deterministic derivative-free maximization over small parameter boxes.

Two phases: an exhaustive grid, then compass search from the best grid
points plus a few seeded random starts. The poll set holds the axis steps,
the pairwise diagonals and one extrapolated pattern point; the step halves
on failure and doubles on success, up to one grid cell. All starts are
refined together so that one objective call handles a whole batch of poll
points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = ["OptConfig", "Estimate", "ObjectiveError", "maximize", "grid_axes"]

TWO_PI = 2.0 * math.pi

# points per objective call during the grid phase
_CHUNK = 1 << 16

# relative improvement treated as rounding noise by the step control
_NOISE = 64 * np.finfo(float).eps


class ObjectiveError(ArithmeticError):
    """The objective returned a non-finite value."""

    def __init__(self, point):
        self.point = [float(x) for x in point]
        super().__init__(f"objective is not finite at {self.point}")


@dataclass(frozen=True)
class OptConfig:
    grid_resolution: int = 256
    top_cells: int = 16
    step_tol: float = 1e-10
    max_evals: int = 5_000_000
    seed: int = 0
    extra_starts: int = 8

    def __post_init__(self):
        for name in ("grid_resolution", "top_cells", "max_evals"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.extra_starts < 0:
            raise ValueError("extra_starts must be non-negative")
        if not (0 < self.step_tol < 1):
            raise ValueError("step_tol must lie in (0, 1)")


@dataclass
class Estimate:
    """Best value found by :func:`maximize` (a lower bound of the supremum).

    ``grid_gap`` is the difference between the best and second-best grid
    cells, a rough indicator of how sharply the grid resolved the peak.
    """

    value: float
    argmax: list
    evaluations: int
    status: str
    refinement_steps: int
    grid_gap: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": list(self.argmax),
            "evaluations": self.evaluations,
            "status": self.status,
            "refinement_steps": self.refinement_steps,
        }


def _grid_resolution(cfg: OptConfig, ndim: int) -> int:
    res = cfg.grid_resolution
    budget = cfg.max_evals // 2
    if res ** ndim <= budget:
        return res
    capped = int(math.floor(budget ** (1.0 / ndim) + 1e-9))
    # multiples of 8 keep the octant directions (k*pi/4) on periodic axes
    if capped >= 8:
        capped -= capped % 8
    return max(capped, 2)


def grid_axes(box, periodic, res: int) -> list:
    """Per-axis grid points: ``res`` cells, endpoint included unless periodic.

    With this layout doubling ``res`` yields a superset of the points.
    """
    axes = []
    for (lo, hi), per in zip(box, periodic):
        k = np.arange(res if per else res + 1)
        axes.append(lo + (hi - lo) * k / res)
    return axes


def _wrap(points, lo, hi, periodic):
    out = points.copy()
    span = hi - lo
    per = np.asarray(periodic)
    if per.any():
        out[:, per] = lo[per] + np.mod(out[:, per] - lo[per], span[per])
    clip = ~per
    if clip.any():
        out[:, clip] = np.clip(out[:, clip], lo[clip], hi[clip])
    return out


def _best_index(values: np.ndarray, points: np.ndarray) -> int:
    """Index of the maximum, ties to the lexicographically smallest point."""
    top = values.max()
    cand = np.flatnonzero(values == top)
    if len(cand) == 1:
        return int(cand[0])
    sub = points[cand]
    order = np.lexsort(sub.T[::-1])
    return int(cand[order[0]])


def _best_per_row(values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Row-wise :func:`_best_index` for ``values`` (r, k), ``points`` (r, k, d)."""
    r, k, d = points.shape
    flat = points.reshape(r * k, d)
    keys = [flat[:, c] for c in range(d - 1, -1, -1)]
    keys += [-values.reshape(-1), np.repeat(np.arange(r), k)]
    order = np.lexsort(keys)
    first = order[np.arange(r) * k]
    return first - np.arange(r) * k


def _rank(values: np.ndarray, points: np.ndarray) -> np.ndarray:
    # primary key -value, then coordinates in order
    keys = [points[:, j] for j in range(points.shape[1] - 1, -1, -1)] + [-values]
    return np.lexsort(keys)


def _poll_directions(ndim: int) -> np.ndarray:
    """Axis directions +-e_i followed by the diagonals +-e_i +-e_j (i < j)."""
    eye = np.eye(ndim)
    dirs = [eye, -eye]
    for i in range(ndim):
        for j in range(i + 1, ndim):
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    dirs.append((si * eye[i] + sj * eye[j])[None, :])
    return np.concatenate(dirs)


def maximize(
    objective: Callable,
    box: Sequence[Sequence[float]],
    cfg: Optional[OptConfig] = None,
    periodic: Optional[Sequence[bool]] = None,
    vectorized: bool = False,
) -> Estimate:
    """Maximize ``objective`` over the axis-aligned ``box``.

    With ``vectorized=True`` the objective receives an ``(m, d)`` array and
    returns ``m`` values; otherwise it is called once per point with a list.
    Axes flagged in ``periodic`` wrap around instead of clipping during
    refinement, and their grid omits the duplicate right endpoint.
    """
    cfg = cfg or OptConfig()
    box = [(float(lo), float(hi)) for lo, hi in box]
    ndim = len(box)
    if ndim == 0:
        raise ValueError("empty box")
    if any(not (hi >= lo) for lo, hi in box):
        raise ValueError(f"malformed box {box}")
    periodic = [False] * ndim if periodic is None else [bool(p) for p in periodic]
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])

    if vectorized:
        f = objective
    else:
        def f(P):
            return np.array([float(objective(list(map(float, row)))) for row in P])

    evals = 0
    seen_best = -math.inf

    def evaluate(P):
        nonlocal evals, seen_best
        vals = np.asarray(f(P), dtype=float).reshape(len(P))
        bad = ~np.isfinite(vals)
        if bad.any():
            raise ObjectiveError(P[np.flatnonzero(bad)[0]])
        evals += len(P)
        if len(vals):
            seen_best = max(seen_best, float(vals.max()))
        return vals

    # phase 1: exhaustive grid, keeping the top cells of each chunk
    res = _grid_resolution(cfg, ndim)
    axes = grid_axes(box, periodic, res)
    shape = tuple(len(a) for a in axes)
    total = int(np.prod(shape))
    keep = max(cfg.top_cells, 2)
    pool_pts = np.empty((0, ndim))
    pool_vals = np.empty(0)
    for start in range(0, total, _CHUNK):
        idx = np.unravel_index(np.arange(start, min(start + _CHUNK, total)), shape)
        P = np.stack([axes[j][idx[j]] for j in range(ndim)], axis=1)
        vals = evaluate(P)
        pool_pts = np.concatenate([pool_pts, P])
        pool_vals = np.concatenate([pool_vals, vals])
        order = _rank(pool_vals, pool_pts)[:keep]
        pool_pts, pool_vals = pool_pts[order], pool_vals[order]
    grid_gap = float(pool_vals[0] - pool_vals[1]) if len(pool_vals) > 1 else 0.0

    # phase 2: compass search from the best cells and seeded random starts
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    randoms = lo + (hi - lo) * rng.random((cfg.extra_starts, ndim))
    X = np.concatenate([pool_pts[: cfg.top_cells], randoms])
    F = np.concatenate([pool_vals[: cfg.top_cells], evaluate(randoms)])
    # per-axis poll offsets are one grid cell times a shared shrink factor
    cell = (hi - lo) / res
    width = float(cell.max())
    step = np.ones(len(X))
    active = step * width >= cfg.step_tol
    iterations = 0
    directions = _poll_directions(ndim) * cell
    span = hi - lo
    per = np.asarray(periodic)
    # position two accepted moves back; the pattern poll X + (X - back2)
    # follows ridges that no single axis direction can climb
    back1 = X.copy()
    back2 = X.copy()
    status = "converged"
    while active.any():
        if evals >= cfg.max_evals:
            status = "budget_exhausted"
            break
        iterations += 1
        ids = np.flatnonzero(active)
        shift = X[ids] - back2[ids]
        shift[:, per] = np.mod(shift[:, per] + span[per] / 2, span[per]) - span[per] / 2
        polls = X[ids, None, :] + step[ids, None, None] * directions[None, :, :]
        polls = np.concatenate([polls, (X[ids] + shift)[:, None, :]], axis=1)
        npoll = polls.shape[1]
        polls = _wrap(polls.reshape(-1, ndim), lo, hi, periodic)
        vals = evaluate(polls).reshape(len(ids), npoll)
        polls = polls.reshape(len(ids), npoll, ndim)
        j = _best_per_row(vals, polls)
        rows = np.arange(len(ids))
        best_vals = vals[rows, j]
        best_pts = polls[rows, j]
        gain = best_vals - F[ids]
        up = gain > 0
        moved = ids[up]
        back2[moved], back1[moved] = back1[moved], X[moved]
        X[moved], F[moved] = best_pts[up], best_vals[up]
        # gains at rounding level are kept but count as failures; otherwise
        # the step can cycle forever while the value creeps up by ulps
        real = gain > _NOISE * np.maximum(np.abs(F[ids]), 1.0)
        win, lose = ids[real], ids[~real]
        # expand after a success so ridge-following does not stall
        step[win] = np.minimum(2.0 * step[win], 1.0)
        step[lose] *= 0.5
        active[lose] = step[lose] * width >= cfg.step_tol

    b = _best_index(F, X)
    # every improving poll is accepted, so the best start holds the best sample
    assert F[b] >= seen_best
    return Estimate(
        value=float(F[b]),
        argmax=[float(x) for x in X[b]],
        evaluations=evals,
        status=status,
        refinement_steps=iterations,
        grid_gap=grid_gap,
    )
