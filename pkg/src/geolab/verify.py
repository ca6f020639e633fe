"""Registry of checkable statements about isosceles Zbaganu constants.

Every claim is bound to an evaluator and to the spaces it applies to.
``asserted`` claims must pass for the run to count as green; ``report``
claims are computed and recorded with verdict ``pass`` or
``mismatch_documented`` but never gate.

Shared quantities (czi curves, the Z profile, James, ...) are memoized per
run so that claims reuse each other's computations.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import constants as C
from .optimize import OptConfig
from .orthogonality import lemma3_margins, random_iso_pairs
from .spaces import Euclidean, GridSup, Lp, LpLq, SpaceSpec, format_space_spec

__all__ = ["Claim", "ClaimReport", "CLAIMS", "UnknownClaimError", "run_claims",
           "all_asserted_pass", "report_json"]

ASSERTED, REPORT = "asserted", "report"
PASS, FAIL, MISMATCH = "pass", "fail", "mismatch_documented"

# grids shared by the curve claims; Z is sampled at s = 1 - 2t so that the
# identity route reuses exactly the same points
T_GRID = C.CZI_GRID
S_GRID = tuple(1.0 - 2.0 * t for t in T_GRID)
T1_TS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
SLOPE_TS = (0.01, 0.02, 0.05)
LEMMA3_ALPHAS = (-3.0, -1.0, -0.5, 0.0, 0.25, 1.0, 2.0)
LEMMA3_PAIRS = 10_000
GAP_PAIRS = 1000

SLACK = 1e-6


class UnknownClaimError(KeyError):
    pass


@dataclass(frozen=True)
class Claim:
    id: str
    kind: str
    description: str
    anchor: str
    applies: Callable[[SpaceSpec], bool]
    evaluate: Callable


@dataclass
class ClaimReport:
    claim_id: str
    space: SpaceSpec
    verdict: str
    measured: dict
    witness: Optional[dict] = None
    runtime_ms: int = 0
    kind: str = ASSERTED

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "claim_id": self.claim_id,
            "space": format_space_spec(self.space),
            "verdict": self.verdict,
            "measured": {k: _json_num(v) for k, v in self.measured.items()},
            "witness": self.witness,
        }
        if timings:
            out["runtime_ms"] = self.runtime_ms
        return out


def _json_num(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


@dataclass
class _Memo:
    """Per-run cache keyed by (space, quantity, parameters)."""

    cfg: OptConfig
    store: dict = field(default_factory=dict)

    def get(self, key, compute):
        if key not in self.store:
            self.store[key] = compute()
        return self.store[key]

    def czi(self, space, t):
        return self.get((space, "czi", t), lambda: C.czi(space, t, "direct", self.cfg))

    def z(self, space, s):
        return self.get((space, "z", s), lambda: C.z_profile(space, s, self.cfg))

    def czi_curve(self, space):
        return [self.czi(space, t).value for t in T_GRID]

    def czi_identity_curve(self, space):
        return [0.5 * self.z(space, s).value for s in S_GRID]

    def z_curve(self, space):
        # ascending s
        return [self.z(space, s).value for s in S_GRID[::-1]]

    def james(self, space):
        return self.get((space, "james"), lambda: C.james(space, "minform", self.cfg))

    def zbaganu(self, space, method):
        return self.get((space, "zb", method), lambda: C.zbaganu(space, method, self.cfg))

    def h_tilde(self, space):
        return self.get((space, "h"), lambda: C.h_tilde(space, self.cfg))

    def nj(self, space):
        return self.get((space, "nj"), lambda: C.nj_constant(space, "classic", self.cfg))

    def rho(self, space, t):
        return self.get((space, "rho", t), lambda: C.modulus_smoothness(space, t, self.cfg))


def _worst(values, ts):
    """(max value, t at the max) with ties to the smallest t."""
    i = int(np.argmax(values))
    return float(values[i]), float(ts[i])


# -- evaluators ----------------------------------------------------------------
# each returns (ok, measured, witness)

def _t1(memo, space):
    diffs = [abs(memo.czi(space, t).value - 0.5 * memo.z(space, 1.0 - 2.0 * t).value)
             for t in T1_TS]
    worst, t = _worst(diffs, T1_TS)
    return worst <= 1e-5, {"max_abs_diff": worst}, {"t": t}


def _p1(memo, space):
    curve = np.array(memo.czi_curve(space))
    ts = np.array(T_GRID)
    claimed = ts - ts * ts
    hilbert = (ts * ts + (1 - ts) ** 2) / 2
    dev_claim, t = _worst(np.abs(curve - claimed), ts)
    dev_hilbert = float(np.abs(curve - hilbert).max())
    return dev_claim <= SLACK, {
        "max_dev_from_t_minus_t2": dev_claim,
        "max_dev_from_half_t2_plus_1mt2": dev_hilbert,
        "czi_at_0": float(curve[0]),
    }, {"t": t}


def _l1(memo, space):
    gap = C.orthogonality_gap(space, GAP_PAIRS, seed=memo.cfg.seed)
    ok = gap.value <= 1e-8 if space.is_hilbert else gap.value >= 1e-2
    witness = None if gap.witness is None else {"x1": list(gap.witness[0]), "x2": list(gap.witness[1])}
    return ok, {"gap": gap.value, "pairs": gap.samples}, witness


def _p2(memo, space):
    ts = np.array(T_GRID)
    worst = -math.inf
    where = 0.0
    for curve in (memo.czi_curve(space), memo.czi_identity_curve(space)):
        c = np.array(curve)
        excess = np.maximum((ts - ts * ts) - c, c - (1 - ts) ** 2)
        w, t = _worst(excess, ts)
        if w > worst:
            worst, where = w, t
    return worst <= SLACK, {"max_bound_excess": worst}, {"t": where}


def _closed_form(memo, space, formula):
    ts = np.array(T_GRID)
    dev, t = _worst(np.abs(np.array(memo.czi_curve(space)) - formula(ts)), ts)
    return dev <= SLACK, {"max_abs_dev": dev}, {"t": t}


def _ex1(memo, space):
    return _closed_form(memo, space, lambda t: t * t - 2 * t + 1)


def _ex2(memo, space):
    return _closed_form(memo, space, lambda t: t * t - 2 * t + 1)


def _monotone(values, grid, direction):
    steps = direction * np.diff(np.array(values))
    worst, at = _worst(steps, grid[:-1])
    return worst, at


def _l2(memo, space):
    grid = S_GRID[::-1]
    # largest drop between consecutive points
    worst, s = _monotone(memo.z_curve(space), grid, -1.0)
    return worst <= SLACK, {"max_decrease": worst}, {"s": s}


def _p3(memo, space):
    worst, t = _monotone(memo.czi_curve(space), T_GRID, 1.0)
    return worst <= SLACK, {"max_increase": worst}, {"t": t}


def _zbaganu_forms(memo, space):
    direct = memo.zbaganu(space, "direct").value
    halved = memo.zbaganu(space, "profile_paper").value
    corrected = memo.zbaganu(space, "profile_corrected").value
    return direct, halved, corrected


def _t2(memo, space):
    direct, halved, corrected = _zbaganu_forms(memo, space)
    return abs(halved - direct) <= 1e-4, {
        "direct": direct,
        "profile_paper": halved,
        "profile_corrected": corrected,
        "corrected_minus_direct": corrected - direct,
    }, None


def _ex5(memo, space):
    direct, halved, _ = _zbaganu_forms(memo, space)
    return abs(direct - 1.0) <= 1e-4, {"claimed": 1.0, "direct": direct,
                                       "profile_paper": halved}, None


def _floor(memo, space, key):
    ts = np.array(T_GRID)
    bound = np.array([C.example_bounds(space, t)[key] for t in T_GRID])
    short, t = _worst(bound - np.array(memo.czi_curve(space)), ts)
    return short <= SLACK, {"max_shortfall": short}, {"t": t}


def _ex4(memo, space):
    return _floor(memo, space, "lp_bound")


def _ex6(memo, space):
    return _floor(memo, space, "lplq_bound")


def _p4(memo, space):
    ts = np.array(T_GRID)
    h = memo.h_tilde(space).value
    nj = memo.nj(space).value
    rhs = (1 - ts) ** 2 + (-2 * ts * ts + 3 * ts - 1) * h + (2 * ts - 1) ** 2 / (2 * nj)
    excess, t = _worst(np.array(memo.czi_curve(space)) - rhs, ts)
    return excess <= SLACK, {"max_excess": excess, "h_tilde": h, "c_nj": nj}, {"t": t}


def _p5(memo, space):
    ts = np.array(T_GRID)
    J = memo.james(space).value
    c = np.array(memo.czi_curve(space))
    lower = J * J / 4 - ts * J - 3 * ts * ts
    upper = ts * ts + 2 * ts * (1 - 2 * ts) / J + (1 - 2 * ts) ** 2 / (J * J)
    low_ex, t_low = _worst(lower - c, ts)
    up_ex, t_up = _worst(c - upper, ts)
    return max(low_ex, up_ex) <= SLACK, {
        "james": J,
        "lower_excess": low_ex,
        "upper_excess": up_ex,
    }, {"t_lower": t_low, "t_upper": t_up}


def _l3(memo, space):
    x1, x2, scale = random_iso_pairs(space, LEMMA3_PAIRS, seed=memo.cfg.seed)
    worst = math.inf
    where = None
    for alpha in LEMMA3_ALPHAS:
        rel = lemma3_margins(space, x1, x2, alpha) / scale
        i = int(np.argmin(rel))
        if rel[i] < worst:
            worst, where = float(rel[i]), {"alpha": alpha, "x1": x1[i].tolist(), "x2": x2[i].tolist()}
    return worst >= -1e-9, {"min_relative_margin": worst}, where


def _t3(memo, space):
    curve = dict(zip(T_GRID, memo.czi_curve(space)))
    diag = C.nonsquare_diagnostic(space, memo.cfg, curve=curve,
                                  james_value=memo.james(space).value)
    return diag.consistent, {"flag": diag.flag, "james": diag.james_value,
                             "t_witness": diag.t_witness}, None


def _slopes(memo, space):
    def compute():
        out = []
        for t in SLOPE_TS:
            z_form = (memo.z(space, t).value - 0.5) / t
            czi_form = (2 * memo.czi(space, (1 - t) / 2).value - 0.5) / t
            out.append((z_form, czi_form))
        return out
    return memo.get((space, "slopes"), compute)


def _p6(memo, space):
    # the proposition rests on Z(t) <= (rho(t) + 1)^2 / 2
    excess = []
    for t in SLOPE_TS:
        z = memo.z(space, t).value
        excess.append(z - (memo.rho(space, t).value + 1) ** 2 / 2)
    worst, t = _worst(excess, SLOPE_TS)
    slopes = _slopes(memo, space)
    measured = {f"z_slope_{t:g}": s[0] for t, s in zip(SLOPE_TS, slopes)}
    measured["max_rho_bound_excess"] = worst
    ok = worst <= SLACK and min(s[0] for s in slopes) >= -SLACK
    return ok, measured, {"t": t}


def _t4(memo, space):
    slopes = _slopes(memo, space)
    diffs = [abs(a - b) for a, b in slopes]
    worst, t = _worst(diffs, SLOPE_TS)
    measured = {f"czi_slope_{t:g}": s[1] for t, s in zip(SLOPE_TS, slopes)}
    measured["max_form_diff"] = worst
    return worst <= SLACK, measured, {"t": t}


def _r1(memo, space):
    grid = np.array(S_GRID[::-1])
    z = np.array(memo.z_curve(space))
    excess = np.maximum((1 - grid ** 2) / 2 - z, z - (1 + grid) ** 2 / 2)
    worst, s = _worst(excess, grid)
    return worst <= SLACK, {"max_bound_excess": worst}, {"s": s}


# -- applicability ---------------------------------------------------------------

def _any(space):
    return True


def _hilbert(space):
    return bool(space.is_hilbert)


def _l1_plane(space):
    return isinstance(space, Lp) and space.dim == 2 and space.p == 1.0


def _sup_norm(space):
    return isinstance(space, GridSup) or (
        isinstance(space, Lp) and space.dim == 2 and math.isinf(space.p)
    )


def _lp_open(space):
    return isinstance(space, (Lp, Euclidean)) and 1.0 < space.p < math.inf


def _lplq(space):
    return isinstance(space, LpLq)


CLAIMS = {c.id: c for c in [
    Claim("T1", ASSERTED, "direct czi equals half the Z profile at 1 - 2t",
          "C_Z^I(t)=\\frac{1}{2} Z_X(1-2t)", _any, _t1),
    Claim("L1", ASSERTED, "isosceles and Pythagorean orthogonality coincide only in inner product spaces",
          "an inner product space if and only if", _any, _l1),
    Claim("P1", REPORT, "claimed Hilbert curve t - t^2",
          "then $C_Z^I(t)=t-t^2$", _hilbert, _p1),
    Claim("P2", ASSERTED, "t - t^2 <= czi(t) <= (1 - t)^2",
          "t-t^2 \\leq C_Z^I(t) \\leq t^2-2 t+1", _any, _p2),
    Claim("EX1", ASSERTED, "czi on the l1 plane equals (1 - t)^2",
          "then $C_Z^I(t)=t^2-2 t+1$", _l1_plane, _ex1),
    Claim("EX2", ASSERTED, "czi under a sup norm equals (1 - t)^2",
          "endowed with the supremum norm", _sup_norm, _ex2),
    Claim("L2", ASSERTED, "Z profile is non-decreasing",
          "is an increasing function", _any, _l2),
    Claim("P3", ASSERTED, "czi is non-increasing on [0, 1/2]",
          "non-increasing on \\([0,\\frac{1}{2}]\\)", _any, _p3),
    Claim("T2", REPORT, "C_Z equals the sup of 2 czi((1-eta)/2) / (1 + eta^2)",
          "\\frac{2C_Z^I\\left(\\frac{1-\\eta}{2}\\right)}{1+\\eta ^{2}}", _any, _t2),
    Claim("EX4", ASSERTED, "l_p floor 2^(-2/p) ((1-t)^p + t^p)^(2/p)",
          "C_{l_{p}}^I(t)\\geq 2^{-\\frac{2}{p}}", _lp_open, _ex4),
    Claim("EX5", REPORT, "C_Z of the l1 plane equals 1",
          "then \\(C_Z(X)=1\\)", _l1_plane, _ex5),
    Claim("EX6", ASSERTED, "l_p-l_q floor",
          "2^{-\\frac{2}{p}-2}", _lplq, _ex6),
    Claim("P4", REPORT, "upper bound through H~ and C_NJ",
          "(1-t)^2 + (-2t^2+3t-1)\\cdot\\widetilde{H}(X)", _any, _p4),
    Claim("P5", REPORT, "two-sided bound through the James constant",
          "\\frac{1}{4}J^{2}(X)-tJ(X)-3t^{2}", _any, _p5),
    Claim("L3", ASSERTED, "norm inequalities for x1 + alpha x2 along isosceles pairs",
          "then the following inequalities hold", _any, _l3),
    Claim("T3", ASSERTED, "touching (1 - t)^2 coincides with J(X) = 2",
          "then \\(X\\) is not uniformly non-square", _any, _t3),
    Claim("P6", ASSERTED, "Z(t) <= (rho(t) + 1)^2 / 2 and non-negative slopes at 0",
          "\\lim_{t \\to 0^{+}} \\frac{Z_X(t) - \\frac{1}{2}}{t} = 0", _any, _p6),
    Claim("T4", ASSERTED, "slope at t -> 1/2 of czi matches the Z slope at 0",
          "2C_Z^I(t) - \\frac{1}{2}}{1 - 2t}", _any, _t4),
    Claim("R1", ASSERTED, "(1 - t^2)/2 <= Z(t) <= (1 + t)^2 / 2",
          "\\frac{1}{2}\\leq Z_X(t) \\leq2", _any, _r1),
]}


def run_claims(spaces: Sequence[SpaceSpec], ids: Optional[Sequence[str]] = None,
               cfg: Optional[OptConfig] = None) -> list:
    """Evaluate the selected claims on every applicable space.

    Reports are sorted by ``(claim_id, space string)``.
    """
    if not spaces:
        raise ValueError("no spaces given")
    wanted = sorted(CLAIMS) if ids is None else list(dict.fromkeys(ids))
    unknown = [i for i in wanted if i not in CLAIMS]
    if unknown:
        raise UnknownClaimError(f"unknown claim id {unknown[0]!r}")
    memo = _Memo(cfg if cfg is not None else OptConfig())
    reports = []
    for cid in wanted:
        claim = CLAIMS[cid]
        for space in spaces:
            if not claim.applies(space):
                continue
            start = time.perf_counter()
            ok, measured, witness = claim.evaluate(memo, space)
            if ok:
                verdict = PASS
            else:
                verdict = FAIL if claim.kind == ASSERTED else MISMATCH
            ms = int(round(1000 * (time.perf_counter() - start)))
            reports.append(ClaimReport(cid, space, verdict, measured, witness, ms, claim.kind))
    reports.sort(key=lambda r: (r.claim_id, format_space_spec(r.space)))
    return reports


def all_asserted_pass(reports: Sequence[ClaimReport]) -> bool:
    return all(r.verdict != FAIL for r in reports)


def report_json(reports: Sequence[ClaimReport], timings: bool = False) -> list:
    return [r.to_dict(timings) for r in reports]
