from fractions import Fraction as F

import numpy as np
import pytest

from gaborcert.core import GaborSystem, PiecewiseFn
from gaborcert.oracle import (
    ProbeGrid,
    alternating_norm_sq,
    alternating_sum,
    default_grid,
    empirical_bounds,
    rayleigh,
    rayleigh_samples,
    truncated_frame_energy,
)
from gaborcert.windows import builtin_window


def test_orthonormal_basis_energy():
    """For the unit indicator at a = b = 1 every quotient approaches 1
    from below as the modulation cutoff grows."""
    sys = GaborSystem(PiecewiseFn.indicator(0, 1), 1, 1)
    f = PiecewiseFn.indicator(F(1, 4), F(3, 4))
    values = [rayleigh(f, sys, m) for m in (16, 64, 256, 1024)]
    for lo, hi in zip(values, values[1:]):
        assert lo <= hi + 1e-15
    assert values[-1] <= 1 + 1e-12
    assert values[-1] > 0.999


def test_energy_monotone_in_cutoff():
    sys = GaborSystem(builtin_window("hat"), 1, F(1, 2))
    f = PiecewiseFn.indicator(F(1, 8), F(9, 8))
    e = [truncated_frame_energy(f, sys, m) for m in (8, 32, 128, 512)]
    assert all(a <= b + 1e-15 for a, b in zip(e, e[1:]))


def test_rayleigh_scale_invariance():
    sys = GaborSystem(builtin_window("hat"), 1, F(1, 4))
    f = PiecewiseFn.indicator(F(1, 4), F(7, 4))
    r1 = rayleigh(f, sys, 128)
    r2 = rayleigh(f.scale(F(7, 3)), sys, 128)
    assert r1 == pytest.approx(r2, abs=1e-12)


def test_report_reproducible():
    """Same seed, same report, field for field."""
    sys = GaborSystem(builtin_window("stepped_indicator", eps=F(1, 2)), 1, 1)
    r1 = empirical_bounds(sys, budget=25, seed=9, m_max=256)
    r2 = empirical_bounds(sys, budget=25, seed=9, m_max=256)
    assert r1 == r2
    r3 = empirical_bounds(sys, budget=25, seed=10, m_max=256)
    assert r3.rho_min != r1.rho_min or r3.rho_max != r1.rho_max


def test_near_kernel_found_for_double_indicator():
    """chi_[0,2) at the unit lattice is no frame; the search should push
    the quotient well below any honest lower bound."""
    sys = GaborSystem(builtin_window("double_indicator"), 1, 1)
    report = empirical_bounds(sys, budget=120, m_max=1024)
    assert report.rho_min < 0.05
    assert report.rho_max <= 4 + 1e-9


def test_ascent_beats_raw_sampling():
    sys = GaborSystem(builtin_window("hat"), 1, F(1, 4))
    report = empirical_bounds(sys, budget=60, m_max=512)
    rhos, _ = rayleigh_samples(sys, 60, m_max=512)
    assert report.rho_min <= min(rhos) + 1e-12
    assert report.rho_max >= max(rhos) - 1e-12
    kinds = {k for k, _ in report.trace}
    assert "ascent_min" in kinds and "ascent_max" in kinds


def test_grid_assemble_round_trip():
    grid = ProbeGrid(F(0), F(1, 4), 8)
    rng = np.random.default_rng(2)
    vals = rng.standard_normal(8)
    f = grid.assemble(vals)
    for i, v in enumerate(vals):
        u, w = grid.cell(i)
        mid = (u + w) / 2
        assert f.eval_float(mid) == pytest.approx(v)


def test_default_grid_covers_window():
    sys = GaborSystem(builtin_window("hat"), 1, F(1, 4))
    grid = default_grid(sys)
    lo, hi = grid.span()
    assert hi - lo >= 2  # at least the support diameter
    assert grid.cell_width == F(1, 2)


def test_grid_validation():
    with pytest.raises(ValueError):
        ProbeGrid(F(0), F(0), 8)
    with pytest.raises(ValueError):
        ProbeGrid(F(0), F(1, 4), 0)


def test_rayleigh_rejects_zero_vector():
    sys = GaborSystem(PiecewiseFn.indicator(0, 1), 1, 1)
    with pytest.raises(ValueError):
        rayleigh(PiecewiseFn.zero(), sys, 64)


def test_alternating_sums_telescope():
    """Translates of chi_[0,2) with alternating signs collapse to two
    cells no matter how many terms participate."""
    g = builtin_window("double_indicator")
    for n in range(1, 6):
        assert alternating_norm_sq(g, n) == 2
        s = alternating_sum(g, n)
        lo, hi = s.support()
        assert hi - lo == 2 * n + 1


def test_alternating_sum_small_cases():
    assert alternating_norm_sq(PiecewiseFn.indicator(0, 1), 1) == 2
    assert alternating_norm_sq(PiecewiseFn.zero(), 3) == 0
    with pytest.raises(ValueError):
        alternating_norm_sq(PiecewiseFn.indicator(0, 1), 0)
