import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddqubit.bath import (
    BathSpec,
    gamma0,
    gamma0_asymptote,
    gamma0_oracle,
    rate0,
    spectral_density,
    tbar,
)

ORACLE_S_VALUES = (0.5, 1.0, 1.5, 2.0, 3.0, 4.0)
ORACLE_T_GRID = np.geomspace(0.1, 20.0, 21)


def test_bathspec_validation():
    with pytest.raises(ValueError):
        BathSpec(0.0)
    with pytest.raises(ValueError):
        BathSpec(-1.0)
    with pytest.raises(ValueError):
        BathSpec(1.0, alpha=0.0)
    spec = BathSpec(3.0)
    assert spec.is_free_nonmarkovian
    assert spec.has_coherence_trapping
    assert not BathSpec(2.0).is_free_nonmarkovian
    assert not BathSpec(1.0).has_coherence_trapping


def test_spectral_density_values():
    spec = BathSpec(1.0)
    assert spectral_density(spec, 0.0) == 0.0
    assert spectral_density(spec, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert spectral_density(BathSpec(2.0), 200.0) < 1e-70
    with pytest.raises(ValueError):
        spectral_density(spec, -0.5)
    w = np.array([0.0, 1.0, 2.0])
    out = spectral_density(BathSpec(2.0, alpha=3.0), w)
    np.testing.assert_allclose(out, 3.0 * w**2 * np.exp(-w), rtol=1e-15)


def test_gamma0_ohmic_closed_form():
    spec = BathSpec(1.0)
    assert gamma0(spec, 1.0) == pytest.approx(0.5 * math.log(2.0), rel=1e-14)
    ts = np.linspace(0.0, 10.0, 7)
    np.testing.assert_allclose(gamma0(spec, ts), 0.5 * np.log1p(ts**2), rtol=1e-15)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.7])
def test_gamma0_zero_at_origin(s):
    assert gamma0(BathSpec(s), 0.0) == 0.0


def test_gamma0_superohmic_asymptote():
    # s=3 saturates at alpha * G(2) = 1
    assert gamma0(BathSpec(3.0), 1e8) == pytest.approx(1.0, rel=1e-16, abs=1e-12)


def test_gamma0_near_one_guard_window():
    # inside the dispatch window the logarithmic branch is used exactly
    spec = BathSpec(1.0 + 1e-10)
    assert gamma0(spec, 2.0) == gamma0(BathSpec(1.0), 2.0)


def test_gamma0_continuity_across_ohmic_point():
    ts = np.linspace(0.0, 10.0, 41)
    base = gamma0(BathSpec(1.0), ts)
    for s in (1.0 - 1e-6, 1.0 + 1e-6):
        assert np.max(np.abs(gamma0(BathSpec(s), ts) - base)) <= 1e-4


@settings(max_examples=150, deadline=None)
@given(
    s=st.floats(0.05, 6.0),
    alpha=st.floats(0.01, 10.0),
    t=st.floats(0.0, 50.0),
)
def test_gamma0_alpha_linearity_and_nonnegative(s, alpha, t):
    base = gamma0(BathSpec(s, 1.0), t)
    scaled = gamma0(BathSpec(s, alpha), t)
    assert scaled == pytest.approx(alpha * base, rel=1e-12, abs=1e-300)
    assert base >= 0.0


def test_gamma0_negative_time_rejected():
    with pytest.raises(ValueError):
        gamma0(BathSpec(1.0), -0.1)


def test_oracle_matches_closed_form_on_grid():
    for s in ORACLE_S_VALUES:
        spec = BathSpec(s)
        for t in ORACLE_T_GRID:
            ref = gamma0_oracle(spec, float(t), tol=1e-9)
            err = abs(gamma0(spec, float(t)) - ref) / max(ref, 1e-12)
            assert err <= 1e-6, (s, t, err)


def test_oracle_trivial_and_tolerance():
    assert gamma0_oracle(BathSpec(0.5), 0.0) == 0.0
    val = gamma0_oracle(BathSpec(1.0), 1.0, tol=1e-8)
    assert val == pytest.approx(0.5 * math.log(2.0), abs=1e-8)
    # oracle self-consistency against the closed form away from the grid
    spec = BathSpec(4.0)
    assert gamma0_oracle(spec, 2.0, tol=1e-9) == pytest.approx(gamma0(spec, 2.0), rel=1e-6)


def test_rate0_values_and_finite_differences():
    assert rate0(BathSpec(2.7), 0.0) == 0.0
    assert abs(rate0(BathSpec(4.0), 1.0)) < 1e-12  # first back-flow onset
    h = 1e-5
    for s in ORACLE_S_VALUES:
        spec = BathSpec(s)
        for t in ORACLE_T_GRID:
            fd = (gamma0(spec, t + h) - gamma0(spec, max(t - h, 0.0))) / (
                2 * h if t >= h else h
            )
            r = rate0(spec, float(t))
            assert abs(r - fd) <= 1e-5 * max(1.0, abs(r)), (s, t)


def test_rate0_positive_in_markovian_regime_example():
    r = rate0(BathSpec(2.0), 5.0)
    assert r > 0.0
    h = 1e-5
    fd = (gamma0(BathSpec(2.0), 5.0 + h) - gamma0(BathSpec(2.0), 5.0 - h)) / (2 * h)
    assert r == pytest.approx(fd, rel=1e-5)


@settings(max_examples=150, deadline=None)
@given(s=st.floats(0.05, 2.0), t=st.floats(0.0, 100.0))
def test_rate0_nonnegative_without_backflow(s, t):
    assert rate0(BathSpec(s), t) >= 0.0


def test_tbar_location_and_absence():
    assert tbar(BathSpec(4.0)) == pytest.approx(1.0, abs=1e-6)
    assert tbar(BathSpec(2.5)) == pytest.approx(math.tan(math.pi / 2.5), abs=1e-6)
    assert tbar(BathSpec(1.0)) is None
    assert tbar(BathSpec(2.0)) is None


def test_tbar_beyond_initial_scan_window():
    # the onset escapes to infinity as s -> 2+; s=2.01 sits past t=50
    val = tbar(BathSpec(2.01))
    assert val == pytest.approx(math.tan(math.pi / 2.01), rel=1e-9)


@pytest.mark.parametrize("s", [2.2, 3.0, 4.5, 6.0])
def test_tbar_matches_rate_zero(s):
    t0 = tbar(BathSpec(s))
    assert t0 is not None
    assert abs(rate0(BathSpec(s), t0)) < 1e-9
    assert t0 == pytest.approx(math.tan(math.pi / s), abs=1e-8)


def test_gamma0_asymptote_values():
    assert gamma0_asymptote(BathSpec(2.0)) == pytest.approx(1.0, rel=1e-15)
    assert gamma0_asymptote(BathSpec(3.0, alpha=2.0)) == pytest.approx(2.0, rel=1e-15)
    assert gamma0_asymptote(BathSpec(1.0)) == math.inf
    assert gamma0_asymptote(BathSpec(0.5)) == math.inf
