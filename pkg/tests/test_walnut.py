from fractions import Fraction as F

import numpy as np
import pytest

from gaborcert.core import CERTIFIED, GaborSystem, PiecewiseFn, crat
from gaborcert.oracle import rayleigh_samples
from gaborcert.walnut import (
    correlations,
    cross_correlations,
    cross_term_sum,
    frame_energy_exact,
    identity_check,
    sup_abs,
    sup_norms,
    walnut_bounds,
)
from gaborcert.windows import builtin_window


def random_window(rng, denom=8, span=5):
    cells = []
    grid = F(1, 4)
    for j in range(span * 4):
        lo = grid * j
        re = int(rng.integers(-denom, denom + 1))
        im = int(rng.integers(-denom, denom + 1))
        if re or im:
            cells.append((lo, lo + grid, (crat(F(re, denom), F(im, denom)),)))
    if not cells:
        cells.append((F(0), grid, (crat(1),)))
    return PiecewiseFn.from_cells(cells)


def test_orthonormal_basis_correlations():
    """The unit indicator at a = b = 1 has G_0 = 1 and no other terms."""
    sys = GaborSystem(PiecewiseFn.indicator(0, 1), 1, 1)
    series = correlations(sys)
    assert series.k_support == 0
    g0 = series.term(0)
    assert g0.equal_ae(PiecewiseFn.indicator(0, 1))
    bounds = walnut_bounds(sys)
    assert bounds.lower == 1 and bounds.upper == 1
    assert bounds.kind == CERTIFIED


def test_correlation_k_range_respects_support():
    g = builtin_window("double_indicator")  # diameter 2, so |k| <= 2b
    series = correlations(GaborSystem(g, 1, 1))
    assert series.k_support <= 2
    assert series.term(5).is_zero


def test_hermitian_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(12):
        g = random_window(rng)
        series = correlations(GaborSystem(g, F(1, 2), F(1, 2)))
        for k in series.ks():
            assert series.term(-k).equal_ae(series.hermitian_partner(k))


def test_g0_is_real_and_nonnegative():
    rng = np.random.default_rng(4)
    for _ in range(8):
        g = random_window(rng)
        series = correlations(GaborSystem(g, 1, F(1, 2)))
        g0 = series.term(0)
        mids = [F(1, 8) + F(j, 4) for j in range(4)]
        for t in mids:
            val = g0.eval_exact(t)
            assert val.im == 0 and val.re >= 0


def test_stepped_window_exact_bounds():
    """Two-step window: lower bound eps^2, upper (2 - eps)^2 at a = b = 1."""
    for eps in (F(1, 4), F(1, 2), F(3, 4)):
        g = builtin_window("stepped_indicator", eps=eps)
        bounds = walnut_bounds(GaborSystem(g, 1, 1))
        assert bounds.lower == eps * eps
        assert bounds.upper == (2 - eps) ** 2


def test_double_indicator_degenerate_lower():
    bounds = walnut_bounds(GaborSystem(builtin_window("double_indicator"), 1, 1))
    assert bounds.lower == 0
    assert bounds.upper == 4


def test_hat_quarter_density():
    """The triangle window on [0, 2] at a = 1, b = 1/4 gives exactly [2, 4]."""
    bounds = walnut_bounds(GaborSystem(builtin_window("hat"), 1, F(1, 4)))
    assert bounds.lower == 2
    assert bounds.upper == 4


def test_walnut_sandwiches_oracle():
    """Sampled quotients never escape the certified interval.

    The truncated energy undershoots the true one, so the lower check
    gets the per-sample tail as slack; the upper check needs none."""
    systems = [
        GaborSystem(builtin_window("hat"), 1, F(1, 4)),
        GaborSystem(builtin_window("stepped_indicator", eps=F(1, 2)), 1, 1),
        GaborSystem(PiecewiseFn.indicator(0, 1), F(1, 2), 1),
    ]
    for sys in systems:
        bounds = walnut_bounds(sys)
        rhos, tails = rayleigh_samples(sys, 40, m_max=512)
        for rho, tail in zip(rhos, tails):
            assert float(bounds.lower) - tail - 1e-9 <= rho
            assert rho <= float(bounds.upper) + 1e-9


def test_sup_abs_enclosure():
    g = builtin_window("hat")
    enc = sup_abs(g, 0, 2)
    assert enc.lo <= 1 <= enc.hi
    assert float(enc.hi) - float(enc.lo) <= 1e-6


def test_sup_norms_and_cross_sum_consistency():
    g = builtin_window("stepped_indicator", eps=F(1, 4))
    series = correlations(GaborSystem(g, 1, 1))
    norms = sup_norms(series)
    total = cross_term_sum(series)
    # the sup of the sum is at most the sum of sups
    assert float(total.hi) <= float(sum(e.hi for e in norms.values())) + 1e-9


def test_cross_terms_of_difference_window():
    """Lowering the second step of the double indicator by eps leaves a
    difference of height eps on [1, 2), whose correlation sum collapses
    to the single exact point eps^2."""
    eps = F(1, 4)
    g = builtin_window("double_indicator")
    h = builtin_window("stepped_indicator", eps=eps)
    diff = h - g
    series = cross_correlations(diff, diff, 1, 1)
    enc = cross_term_sum(series)
    assert enc.lo == enc.hi == eps * eps


def test_parseval_energy():
    sys = GaborSystem(PiecewiseFn.indicator(0, 1), 1, 1)
    f = PiecewiseFn.indicator(0, 1)
    assert frame_energy_exact(f, sys) == 1


def test_energy_scales_quadratically():
    sys = GaborSystem(builtin_window("hat"), 1, F(1, 2))
    f = PiecewiseFn.indicator(F(1, 4), F(3, 2))
    assert frame_energy_exact(f.scale(3), sys) == 9 * frame_energy_exact(f, sys)


def test_identity_check_converges():
    sys = GaborSystem(builtin_window("hat"), 1, F(1, 4))
    f = PiecewiseFn.indicator(F(1, 8), F(5, 4))
    r1 = identity_check(f, sys, 64)
    r2 = identity_check(f, sys, 128)
    assert r1.passed and r2.passed
    # truncated sums only grow, and the guaranteed tail halves with m_max
    assert r1.lhs_truncated <= r2.lhs_truncated <= float(r2.rhs_exact)
    assert r2.tail_bound == pytest.approx(r1.tail_bound / 2)
    assert 0 <= r2.gap <= r2.tail_bound


def test_identity_check_rejects_bad_m():
    sys = GaborSystem(PiecewiseFn.indicator(0, 1), 1, 1)
    with pytest.raises(ValueError):
        identity_check(PiecewiseFn.indicator(0, 1), sys, 0)
