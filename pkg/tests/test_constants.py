import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geolab import constants as C
from geolab.spaces import DEFAULT_CATALOG, Euclidean, GridSup, Lp, LpLq, hexagon

E2, L1, LINF = Euclidean(2), Lp(2, 1.0), Lp(2, math.inf)
PLANAR = [s for s in DEFAULT_CATALOG if s.dim == 2]
TS = (0.0, 0.1, 0.25, 0.4, 0.5)


def hilbert_czi_grid(t, n=1_000_000):
    """Exhaustive oracle: orthogonal x1 = (cos f, 0), x2 = (0, sin f)."""
    f = np.linspace(0, math.pi / 2, n)
    r, s = np.cos(f), np.sin(f)
    a = np.sqrt((t * r) ** 2 + ((1 - t) * s) ** 2)
    b = np.sqrt(((1 - t) * r) ** 2 + (t * s) ** 2)
    return float((a * b).max())


@pytest.mark.parametrize("t", TS)
def test_hilbert_czi_against_grid(t):
    oracle = hilbert_czi_grid(t)
    assert oracle == pytest.approx((t * t + (1 - t) ** 2) / 2, abs=1e-9)
    assert C.czi(E2, t).value == pytest.approx(oracle, abs=1e-9)


def test_hilbert_czi_in_three_dimensions():
    for t in (0.0, 0.3):
        assert C.czi(Euclidean(3), t).value == pytest.approx((t * t + (1 - t) ** 2) / 2, abs=1e-8)


@pytest.mark.parametrize("space", [L1, LINF, GridSup(2)], ids=repr)
@pytest.mark.parametrize("t", TS)
def test_square_unit_balls_touch_upper_bound(space, t):
    assert C.czi(space, t).value == pytest.approx((1 - t) ** 2, abs=1e-9)


def test_witness_lower_bounds_l1():
    # x1 = (1, 1), x2 = (1, -1) in l1 gives the closed form directly
    x1, x2 = np.array([1.0, 1.0]), np.array([1.0, -1.0])
    for t in TS:
        r = C._czi_ratio(L1, x1[None] / 2 + x2[None] / 2, x1[None] / 2 - x2[None] / 2, t)
        assert r[0] == pytest.approx((1 - t) ** 2)


@pytest.mark.parametrize("space", DEFAULT_CATALOG, ids=repr)
def test_half_is_a_quarter(space, coarse):
    assert C.czi(space, 0.5, cfg=coarse).value == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("space", PLANAR, ids=repr)
def test_identity_matches_direct(space, coarse):
    for t in (0.0, 0.2, 0.45):
        d = C.czi(space, t, "direct", coarse).value
        i = C.czi(space, t, "identity", coarse).value
        assert abs(d - i) <= 1e-5


@pytest.mark.parametrize("space", PLANAR, ids=repr)
def test_raw_sample_below_estimate(space):
    for t in (0.0, 0.3):
        raw = C.czi_raw_sample(space, t, 20000, seed=3)
        assert raw.samples == 20000
        assert raw.value <= C.czi(space, t).value + 1e-6


def test_raw_sample_without_samples():
    r = C.czi_raw_sample(E2, 0.2, 0)
    assert r.status == "no samples"
    assert r.value == -math.inf


@pytest.mark.parametrize("space", [Lp(2, 1.5), Lp(2, 3), E2], ids=repr)
def test_lp_floor(space, coarse):
    for t in (0.0, 0.2, 0.4):
        b = C.example_bounds(space, t)["lp_bound"]
        assert C.czi(space, t).value >= b - 1e-6


@pytest.mark.parametrize("space", [LpLq(2, 1), LpLq(3, 1.5)], ids=repr)
def test_lplq_floor(space):
    for t in (0.0, 0.2, 0.4):
        b = C.example_bounds(space, t)["lplq_bound"]
        assert C.czi(space, t).value >= b - 1e-6


def test_example_bounds_families():
    assert C.example_bounds(hexagon(), 0.1) == {"lp_bound": None, "lplq_bound": None}
    assert C.example_bounds(LINF, 0.1)["lp_bound"] == pytest.approx(0.81)
    assert C.example_bounds(E2, 0.0)["lp_bound"] == pytest.approx(0.5)
    # q = p reduces the l_p-l_q floor to the l_p one
    lp = C.example_bounds(Lp(2, 3), 0.3)["lp_bound"]
    assert C.example_bounds(LpLq(3, 3), 0.3)["lplq_bound"] == pytest.approx(lp)


def test_czi_argument_checks():
    with pytest.raises(ValueError):
        C.czi(E2, 0.6)
    with pytest.raises(ValueError):
        C.czi(E2, 0.1, method="guess")
    with pytest.raises(ValueError):
        C.z_profile(E2, 1.5)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1))
def test_z_profile_remark_bounds(t):
    z = C.z_profile(E2, t, C.OptConfig(grid_resolution=64, top_cells=4, extra_starts=2)).value
    assert (1 - t * t) / 2 - 1e-6 <= z <= (1 + t) ** 2 / 2 + 1e-6
    assert z == pytest.approx((1 + t * t) / 2, abs=1e-9)


@pytest.mark.parametrize("space, expected", [(E2, 1.0), (L1, 2.0), (LINF, 2.0), (hexagon(), 1.25)],
                         ids=repr)
def test_zbaganu(space, expected):
    assert C.zbaganu(space, "direct").value == pytest.approx(expected, abs=1e-6)
    assert C.zbaganu(space, "profile_corrected").value == pytest.approx(expected, abs=1e-6)
    assert C.zbaganu(space, "profile_paper").value == pytest.approx(expected / 2, abs=1e-6)


@pytest.mark.parametrize("space, expected", [
    (E2, math.sqrt(2)), (L1, 2.0), (LINF, 2.0), (hexagon(), 1.5), (Lp(2, 3), 2 ** (2 / 3)),
], ids=repr)
def test_james(space, expected):
    mf = C.james(space, "minform").value
    iso = C.james(space, "isoform").value
    assert mf == pytest.approx(expected, abs=1e-8)
    assert abs(mf - iso) <= 1e-5


def test_james_isoform_needs_plane():
    with pytest.raises(C.SpaceSpecError):
        C.james(Euclidean(3), "isoform")
    assert C.james(GridSup(4)).value == pytest.approx(2)


def test_nj_and_h_tilde():
    assert C.nj_constant(E2).value == pytest.approx(1, abs=1e-9)
    assert C.nj_constant(L1).value == pytest.approx(2, abs=1e-9)
    assert C.nj_constant(E2, "modified").value == pytest.approx(1, abs=1e-9)
    assert C.h_tilde(E2).value == pytest.approx(math.sqrt(2), abs=1e-9)
    assert C.h_tilde(L1).value == pytest.approx(2, abs=1e-9)


@pytest.mark.parametrize("eps", [0.0, 0.5, 1.0, 1.5, 2.0])
def test_modulus_convexity_hilbert(eps):
    # at eps = 2 the distance has a quadratic maximum, so the partner is only
    # located to about sqrt(machine epsilon)
    tol = 1e-7 if eps == 2.0 else 1e-8
    assert C.modulus_convexity(E2, eps).value == pytest.approx(1 - math.sqrt(1 - eps * eps / 4), abs=tol)


def test_modulus_convexity_l1_is_flat():
    assert C.modulus_convexity(L1, 1.0).value == pytest.approx(0, abs=1e-9)
    with pytest.raises(ValueError):
        C.modulus_convexity(E2, 2.5)


@pytest.mark.parametrize("t", [0.0, 0.25, 1.0])
def test_modulus_smoothness(t):
    assert C.modulus_smoothness(E2, t).value == pytest.approx(math.sqrt(1 + t * t) - 1, abs=1e-9)
    assert C.modulus_smoothness(L1, t).value == pytest.approx(t, abs=1e-9)


@pytest.mark.parametrize("space", PLANAR, ids=repr)
def test_rho_at_most_t(space, coarse):
    for t in (0.1, 0.5):
        assert C.modulus_smoothness(space, t, coarse).value <= t + 1e-12


def test_smoothness_slope_examples():
    assert C.smoothness_slope(E2, [0.01])[0] == pytest.approx(0.005, abs=1e-8)
    assert C.smoothness_slope(L1, [0.01])[0] == pytest.approx(1.005, abs=1e-8)
    assert C.smoothness_slope(hexagon(), [0.05])[0] >= 0
    with pytest.raises(ValueError):
        C.smoothness_slope(E2, [0.0])


@pytest.mark.parametrize("space, flag, james", [
    (L1, True, 2.0), (E2, False, math.sqrt(2)), (GridSup(2), True, 2.0),
], ids=repr)
def test_nonsquare_diagnostic(space, flag, james):
    d = C.nonsquare_diagnostic(space)
    assert d.flag is flag
    assert d.james_value == pytest.approx(james, abs=1e-6)
    assert d.consistent


def test_orthogonality_gap():
    assert C.orthogonality_gap(E2, 1000).value <= 1e-8
    assert C.orthogonality_gap(L1, 1000).value >= 0.5
    assert C.orthogonality_gap(Euclidean(3), 500).value <= 1e-8
    assert C.orthogonality_gap(E2, 0).samples == 0


def test_curves_carry_bounds(coarse):
    pts = C.czi_curve(L1, [0.0, 0.5], cfg=coarse)
    assert [p.lower_bound for p in pts] == [0.0, 0.25]
    assert [p.upper_bound for p in pts] == [1.0, 0.25]
    z = C.z_curve(E2, [1.0], coarse)[0]
    assert (z.lower_bound, z.upper_bound) == (0.0, 2.0)
