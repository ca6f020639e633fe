"""Acceptance criteria 1-16, each at its stated tolerance.

Most criteria read the claim reports of one full registry run on the default
catalog (``catalog_reports``); the rest call the estimators directly.
"""
import math
import subprocess
import sys

import numpy as np

from geolab import constants as C
from geolab.orthogonality import lemma3_margins, random_iso_pairs
from geolab.spaces import GridSup, Lp, format_space_spec, parse_space_spec

E2 = parse_space_spec("euclidean:dim=2")
L1 = parse_space_spec("lp:dim=2,p=1")
LINF = parse_space_spec("lp:dim=2,p=inf")
LP3 = parse_space_spec("lp:dim=2,p=3")


def by(reports, claim_id):
    return {format_space_spec(r.space): r for r in reports if r.claim_id == claim_id}


def test_01_l1_curve(catalog_reports, criterion):
    r = by(catalog_reports, "EX1")[format_space_spec(L1)]
    dev = r.measured["max_abs_dev"]
    ok = criterion(1, dev <= 1e-6, f"l1 czi vs t^2-2t+1 over 51 points: max dev {dev:.3g}")
    assert ok


def test_02_sup_norm_curve(catalog_reports, criterion):
    r = by(catalog_reports, "EX2")[format_space_spec(GridSup(4))]
    dev = r.measured["max_abs_dev"]
    ok = criterion(2, dev <= 1e-6, f"GridSup(4) czi vs t^2-2t+1: max dev {dev:.3g}")
    assert ok


def test_03_identity(catalog_reports, catalog, criterion):
    reports = by(catalog_reports, "T1")
    worst = max(r.measured["max_abs_diff"] for r in reports.values())
    ok = len(reports) == len(catalog) == 9 and worst <= 1e-5
    criterion(3, ok, f"|direct - Z(1-2t)/2| over {len(reports)} spaces x 6 t: max {worst:.3g}")
    assert ok


def test_04_two_sided_bounds(catalog_reports, catalog, criterion):
    reports = by(catalog_reports, "P2")
    worst = max(r.measured["max_bound_excess"] for r in reports.values())
    ok = len(reports) == len(catalog) and worst <= 1e-6
    criterion(4, ok, f"t-t^2 <= czi <= (1-t)^2, direct and identity curves: max excess {worst:.3g}")
    assert ok


def test_05_midpoint(catalog, criterion):
    devs = [abs(C.czi(s, 0.5).value - 0.25) for s in catalog]
    ok = max(devs) <= 1e-9
    criterion(5, ok, f"czi(1/2) = 1/4 on {len(catalog)} spaces: max dev {max(devs):.3g}")
    assert ok


def test_06_hilbert_curve(catalog_reports, criterion):
    f = np.linspace(0, math.pi / 2, 1_000_000)
    r, s = np.cos(f), np.sin(f)
    worst = 0.0
    for t in C.CZI_GRID:
        oracle = float((np.hypot(t * r, (1 - t) * s) * np.hypot((1 - t) * r, t * s)).max())
        worst = max(worst, abs(C.czi(E2, t).value - oracle),
                    abs(oracle - (t * t + (1 - t) ** 2) / 2))
    p1 = by(catalog_reports, "P1")[format_space_spec(E2)]
    ok = worst <= 1e-4 and p1.verdict == "mismatch_documented"
    criterion(6, ok, f"Euclidean curve vs grid oracle and (t^2+(1-t)^2)/2: max dev {worst:.3g}; "
                     f"P1 verdict {p1.verdict}")
    assert ok


def test_07_lp_floor(catalog_reports, criterion):
    reports = by(catalog_reports, "EX4")
    keys = [format_space_spec(Lp(2, p)) for p in (1.5, 3.0)]
    worst = max(reports[k].measured["max_shortfall"] for k in keys)
    ok = worst <= 1e-6
    criterion(7, ok, f"l_p floor on p = 1.5, 3: max shortfall {worst:.3g}")
    assert ok


def test_08_lplq_floor(catalog_reports, criterion):
    reports = by(catalog_reports, "EX6")
    worst = max(r.measured["max_shortfall"] for r in reports.values())
    ok = set(reports) == {"lplq:p=2.0,q=1.0", "lplq:p=3.0,q=1.5"} and worst <= 1e-6
    criterion(8, ok, f"l_p-l_q floor on {sorted(reports)}: max shortfall {worst:.3g}")
    assert ok


def test_09_zbaganu(catalog_reports, catalog, criterion):
    reports = by(catalog_reports, "T2")
    worst = max(abs(r.measured["corrected_minus_direct"]) for r in reports.values())
    l1 = reports[format_space_spec(L1)].measured["direct"]
    e2 = reports[format_space_spec(E2)].measured["direct"]
    ex5 = by(catalog_reports, "EX5")[format_space_spec(L1)]
    ok = (len(reports) == len(catalog) and worst <= 1e-4 and abs(l1 - 2) <= 1e-4
          and abs(e2 - 1) <= 1e-4 and ex5.verdict == "mismatch_documented"
          and reports[format_space_spec(L1)].verdict == "mismatch_documented")
    criterion(9, ok, f"|direct - corrected profile| max {worst:.3g}; C_Z(l1) = {l1:.10g}, "
                     f"C_Z(E) = {e2:.10g}; EX5 {ex5.verdict}")
    assert ok


def test_10_james(catalog, criterion):
    gaps = []
    values = {}
    for s in catalog:
        if s.dim != 2:
            continue
        m = C.james(s, "minform").value
        i = C.james(s, "isoform").value
        gaps.append(abs(m - i))
        values[format_space_spec(s)] = m
    errs = [abs(values[format_space_spec(E2)] - math.sqrt(2)),
            abs(values[format_space_spec(L1)] - 2), abs(values[format_space_spec(LINF)] - 2)]
    ok = max(gaps) <= 1e-5 and max(errs) <= 1e-4
    criterion(10, ok, f"|minform - isoform| max {max(gaps):.3g} on {len(gaps)} planes; "
                      f"value errors max {max(errs):.3g}")
    assert ok


def test_11_nonsquare(catalog_reports, criterion):
    reports = by(catalog_reports, "T3")
    yes = [reports[format_space_spec(s)] for s in (L1, GridSup(4))]
    no = [reports[format_space_spec(s)] for s in (E2, LP3)]
    ok = (all(r.measured["flag"] and r.measured["james"] >= 1.999 for r in yes)
          and not any(r.measured["flag"] for r in no)
          and all(r.verdict == "pass" for r in reports.values()))
    criterion(11, ok, "flags " + ", ".join(
        f"{format_space_spec(r.space)}={r.measured['flag']} (J={r.measured['james']:.6g})" for r in yes + no))
    assert ok


def test_12_slopes(catalog_reports, criterion):
    e2 = C.smoothness_slope(E2, [1e-2])[0]
    l1 = C.smoothness_slope(L1, [1e-2])[0]
    forms = max(r.measured["max_form_diff"] for r in by(catalog_reports, "T4").values())
    ok = e2 <= 0.01 and l1 >= 0.9 and forms <= 1e-6
    criterion(12, ok, f"slope(E, 0.01) = {e2:.6g}, slope(l1, 0.01) = {l1:.6g}, "
                      f"form disagreement max {forms:.3g}")
    assert ok


def test_13_monotonicity(catalog_reports, criterion):
    up = max(r.measured["max_increase"] for r in by(catalog_reports, "P3").values())
    down = max(r.measured["max_decrease"] for r in by(catalog_reports, "L2").values())
    ok = up <= 1e-6 and down <= 1e-6
    criterion(13, ok, f"czi max step increase {up:.3g}; Z max step decrease {down:.3g}")
    assert ok


def test_14_orthogonality_gap(criterion):
    e2 = C.orthogonality_gap(E2, 1000, seed=0)
    l1 = C.orthogonality_gap(L1, 1000, seed=0)
    ok = e2.samples == l1.samples == 1000 and e2.value <= 1e-8 and l1.value >= 0.5
    criterion(14, ok, f"gap(E) = {e2.value:.3g}, gap(l1) = {l1.value:.6g} over 1000 pairs")
    assert ok


def test_15_lemma3(catalog, criterion):
    alphas = (-3.0, -1.0, -0.5, 0.0, 0.25, 1.0, 2.0)
    worst = math.inf
    for s in catalog:
        x1, x2, scale = random_iso_pairs(s, 10_000, seed=0)
        for a in alphas:
            worst = min(worst, float((lemma3_margins(s, x1, x2, a) + 1e-9 * scale).min()))
    ok = worst >= 0
    criterion(15, ok, f"10^4 pairs x 7 alphas x {len(catalog)} spaces: min margin with slack {worst:.3g}")
    assert ok


def test_16_determinism(tmp_path, criterion):
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        cmd = [sys.executable, "-m", "geolab", "verify", "--space", "lp:dim=2,p=1",
               "--space", "euclidean:dim=2", "--out", str(out)]
        rc = subprocess.run(cmd, capture_output=True).returncode
        outs.append((rc, out.read_bytes()))
    ok = outs[0][0] == outs[1][0] == 0 and outs[0][1] == outs[1][1]
    criterion(16, ok, f"two verify runs: exit codes {outs[0][0]}, {outs[1][0]}; "
                      f"identical bytes: {outs[0][1] == outs[1][1]} ({len(outs[0][1])} bytes)")
    assert ok
