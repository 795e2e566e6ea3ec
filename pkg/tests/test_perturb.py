from fractions import Fraction as F

import numpy as np
import pytest

from gaborcert.core import FrameBounds, GaborSystem, PiecewiseFn, crat
from gaborcert.perturb import (
    Certificate,
    certify_amalgam,
    certify_correlation,
    certify_shift,
    certify_truncation,
    certify_unit_lattice,
    divergence_diagnostic,
    perturbed_frame_bounds,
    shift_bounds_at,
)
from gaborcert.walnut import walnut_bounds
from gaborcert.windows import builtin_window


# ---------------------------------------------------------------------------
# Bound combination
# ---------------------------------------------------------------------------


def test_combined_bounds_exact_values():
    assert perturbed_frame_bounds(1, 1, F(1, 4)) == FrameBounds(F(1, 4), F(9, 4))
    assert perturbed_frame_bounds(1, 1, F(1, 16)) == FrameBounds(F(9, 16), F(25, 16))


def test_combined_bounds_monotone_in_r():
    rng = np.random.default_rng(13)
    for _ in range(30):
        a_val = F(int(rng.integers(1, 40)), int(rng.integers(1, 10)))
        b_val = a_val + F(int(rng.integers(0, 20)), 7)
        r1 = a_val * F(int(rng.integers(1, 99)), 100)
        r2 = r1 * F(int(rng.integers(1, 99)), 100)
        lo, hi = sorted((r1, r2))
        small = perturbed_frame_bounds(a_val, b_val, lo)
        big = perturbed_frame_bounds(a_val, b_val, hi)
        assert float(big.lower) <= float(small.lower) + 1e-12
        assert float(small.upper) <= float(big.upper) + 1e-12
        assert small.lower > 0


def test_combined_bounds_refuse_large_r():
    with pytest.raises(ValueError, match="R must be"):
        perturbed_frame_bounds(1, 2, 1)
    with pytest.raises(ValueError):
        perturbed_frame_bounds(1, 2, F(3, 2))


# ---------------------------------------------------------------------------
# Correlation criterion
# ---------------------------------------------------------------------------


def test_correlation_boundary_case_fails():
    """Dropping the second step of chi_[0,2) by eps produces exactly
    R = eps^2 = A: not strictly below, so no certificate."""
    eps = F(1, 4)
    g = builtin_window("stepped_indicator", eps=eps)
    h = builtin_window("double_indicator")
    A = walnut_bounds(GaborSystem(g, 1, 1)).lower
    assert A == eps * eps
    cert = certify_correlation(g, h, 1, 1, A, (2 - eps) ** 2)
    assert not cert.passed
    assert cert.conclusive
    assert cert.hypothesis_values["R"] - A == 0
    assert cert.new_bounds is None


def test_correlation_small_perturbation_passes():
    eps = F(1, 4)
    g = builtin_window("double_indicator")
    h = builtin_window("stepped_indicator", eps=eps)
    # the unperturbed system is certified separately; feed its true bounds
    cert = certify_correlation(h, g, 1, 1, eps * eps, (2 - eps) ** 2)
    # going the other way (restoring the full height) costs R = eps^2 = A
    assert not cert.passed
    tiny = builtin_window("stepped_indicator", eps=F(1, 8))
    cert2 = certify_correlation(h, tiny, 1, 1, eps * eps, (2 - eps) ** 2)
    assert cert2.passed
    assert cert2.new_bounds.lower > 0
    assert cert2.riesz_preserved


def test_correlation_identical_windows():
    g = builtin_window("hat")
    cert = certify_correlation(g, g, 1, F(1, 4), 2, 4)
    assert cert.passed
    assert cert.hypothesis_values["R"] == 0
    assert cert.new_bounds == FrameBounds(2, 4)


def test_correlation_inconclusive_with_wide_tolerance():
    """A quadratic correlation sum evaluated loosely straddles A: the
    certifier must refuse to conclude either way."""
    g = builtin_window("hat")
    h = g + g.scale(F(1, 2))  # difference hat/2, correlation sum in [1/4, 3/8]
    cert = certify_correlation(g, h, 1, 1, F(5, 16), F(4), tol=10.0)
    assert not cert.passed
    assert not cert.conclusive
    assert "inconclusive" in cert.failure_reason


# ---------------------------------------------------------------------------
# Amalgam criterion
# ---------------------------------------------------------------------------


def test_amalgam_weaker_than_correlation():
    """Whenever the amalgam route certifies, the correlation route does
    too, and with a smaller perturbation measure."""
    rng = np.random.default_rng(21)
    passes = 0
    for _ in range(40):
        eps = F(int(rng.integers(1, 5)), 64)
        g = builtin_window("hat")
        bump = PiecewiseFn.indicator(F(1, 2), F(3, 2), eps)
        h = g + bump
        am = certify_amalgam(g, h, 1, F(1, 4), 2, 4)
        co = certify_correlation(g, h, 1, F(1, 4), 2, 4)
        if am.passed:
            passes += 1
            assert co.passed
            r_am = float(am.hypothesis_values["R"])
            r_co = float(co.hypothesis_values["R"])
            assert r_co <= r_am + 1e-12
            assert float(co.new_bounds.lower) >= float(am.new_bounds.lower) - 1e-12
    assert passes >= 5


def test_amalgam_inconclusive_on_irrational_norm():
    g = PiecewiseFn.indicator(0, 1)
    ramp = PiecewiseFn.from_cells([(F(0), F(1), (crat(0), crat(1, 1)))])  # (1+i)t
    cert = certify_amalgam(g, g + ramp, 1, 1, 1, 1)
    assert not cert.passed
    assert not cert.conclusive


def test_amalgam_exact_failure_is_conclusive():
    g = PiecewiseFn.indicator(0, 1)
    h = PiecewiseFn.indicator(0, 1, 3)
    cert = certify_amalgam(g, h, 1, 1, 1, 1)
    assert not cert.passed
    assert cert.conclusive


# ---------------------------------------------------------------------------
# Unit-lattice criterion
# ---------------------------------------------------------------------------


def test_unit_lattice_half_height():
    """Halving chi_[0,1) gives column sum 1/2 and bounds (1/4, 9/4)."""
    g = PiecewiseFn.indicator(0, 1)
    h = PiecewiseFn.indicator(0, 1, F(1, 2))
    cert = certify_unit_lattice(g, h, 1, 1)
    assert cert.passed
    assert cert.hypothesis_values["s"] == F(1, 2)
    assert cert.new_bounds == FrameBounds(F(1, 4), F(9, 4))


def test_unit_lattice_boundary_fails():
    """Removing the window entirely gives s = 1 = sqrt(A): refused."""
    g = PiecewiseFn.indicator(0, 1)
    cert = certify_unit_lattice(g, PiecewiseFn.zero(), 1, 1)
    assert not cert.passed
    assert cert.conclusive
    assert cert.hypothesis_values["s"] == 1


def test_unit_lattice_spread_difference():
    """The column sum adds |differences| across integer translates."""
    g = PiecewiseFn.indicator(0, 1)
    h = g + PiecewiseFn.indicator(3, 4, F(1, 4)) + PiecewiseFn.indicator(5, 6, F(1, 4))
    cert = certify_unit_lattice(g, h, 1, 1)
    assert cert.passed
    assert cert.hypothesis_values["s"] == F(1, 2)


# ---------------------------------------------------------------------------
# Truncation criterion
# ---------------------------------------------------------------------------


def test_truncation_already_compact():
    """A window already inside [-Na, Na] truncates to itself."""
    cert = certify_truncation(builtin_window("hat"), 1, F(1, 4), 2, 4)
    assert cert.passed
    assert cert.hypothesis_values["N"] == 2
    assert cert.hypothesis_values["tail"] == 0
    assert cert.new_bounds == FrameBounds(2, 4)


def test_truncation_drops_small_outlier():
    """A far-away bump of height 1/100 is cut at N = 1 with R = 4 w^2 / b."""
    g = PiecewiseFn.indicator(0, 1) + PiecewiseFn.indicator(3, 4, F(1, 100))
    A = walnut_bounds(GaborSystem(g, 1, 1)).lower
    assert A > 0
    cert = certify_truncation(g, 1, 1, A, walnut_bounds(GaborSystem(g, 1, 1)).upper)
    assert cert.passed
    assert cert.hypothesis_values["N"] == 1
    assert cert.hypothesis_values["tail"] == F(1, 100)
    assert cert.hypothesis_values["R"] == 4 * F(1, 100) ** 2
    assert cert.new_bounds.lower > 0


def test_truncation_needs_positive_lower_bound():
    with pytest.raises(ValueError):
        certify_truncation(builtin_window("hat"), 1, F(1, 4), 0, 4)


# ---------------------------------------------------------------------------
# Lattice-step criterion
# ---------------------------------------------------------------------------


def test_shift_report_mode_hat():
    """The reference computation: triangle window, a = 1, b = 1/4, with a
    perturbation budget of 10^-4."""
    cert = certify_shift(
        builtin_window("hat"), 1, F(1, 4), 2, 4,
        R=F(1, 10**4), mode="report_epsilon",
    )
    assert cert.passed
    v = cert.hypothesis_values
    assert v["eps"] == F(3, 400)
    assert v["delta"] == F(4809, 10**4)
    assert v["N"] == 2
    assert v["b0"] == F(1, 8)
    bounds = shift_bounds_at(cert, F(1, 8))
    assert 0 < float(bounds.lower) < float(bounds.upper)


def test_shift_given_aprime_too_far():
    """|a - a'| = 1/100 exceeds eps = 3/400, so the certificate reports
    failure while still carrying every derived quantity."""
    cert = certify_shift(
        builtin_window("hat"), 1, F(1, 4), 2, 4,
        a_prime=F(101, 100), mode="given_aprime",
    )
    assert not cert.passed
    v = cert.hypothesis_values
    assert v["D"] == F(1, 10**4)
    assert v["eps"] == F(3, 400)
    assert v["N"] == 2
    assert v["b0"] == F(1, 8)
    # the derived ladder is still usable

    bounds = shift_bounds_at(cert, F(1, 16))
    assert float(bounds.lower) > 0


def test_shift_same_step_passes():
    cert = certify_shift(
        builtin_window("hat"), 1, F(1, 4), 2, 4, a_prime=1, mode="given_aprime"
    )
    assert cert.passed
    assert cert.hypothesis_values["D"] == 0


def test_shift_close_step_passes():
    """a' within eps of a and defect within budget: certified."""
    eps_scale = F(1, 1000)
    cert = certify_shift(
        builtin_window("hat"), 1, F(1, 4), 2, 4,
        a_prime=1 + eps_scale, mode="given_aprime",
    )
    assert cert.passed
    assert cert.new_bounds.lower > 0


def test_shift_indicator_defect_too_big():
    """The sharp-edged window has defect 1 at any shifted step: that is
    the whole lower bound budget, so the call refuses."""
    with pytest.raises(ValueError, match="R must be < bA"):
        certify_shift(
            PiecewiseFn.indicator(0, 1), 1, 1, 1, 1,
            a_prime=F(101, 100), mode="given_aprime",
        )


def test_shift_argument_validation():
    g = builtin_window("hat")
    with pytest.raises(ValueError):
        certify_shift(g, 1, F(1, 4), 2, 4, mode="sideways")
    with pytest.raises(ValueError):
        certify_shift(g, 1, F(1, 4), 2, 4, mode="given_aprime")  # no a_prime
    with pytest.raises(ValueError):
        certify_shift(g, 1, F(1, 4), 2, 4, a_prime=-1, mode="given_aprime")
    with pytest.raises(ValueError):
        certify_shift(g, 1, F(1, 4), 2, 4, R=F(1, 2), mode="report_epsilon")  # R >= bA


def test_shift_bounds_at_validation():
    cert = certify_shift(builtin_window("hat"), 1, F(1, 4), 2, 4, mode="report_epsilon")
    b0 = cert.hypothesis_values["b0"]
    with pytest.raises(ValueError):
        shift_bounds_at(cert, b0 * 2)
    with pytest.raises(ValueError):
        shift_bounds_at(cert, 0)
    # smaller b' stretches the sandwich but keeps it positive
    at_b0 = shift_bounds_at(cert, b0)
    at_half = shift_bounds_at(cert, b0 / 2)
    assert float(at_half.lower) >= float(at_b0.lower)
    assert float(at_half.upper) >= float(at_b0.upper)


# ---------------------------------------------------------------------------
# Density-divergence diagnostic
# ---------------------------------------------------------------------------


def test_divergence_unit_density():
    g = builtin_window("double_indicator")
    h = builtin_window("stepped_indicator", eps=F(1, 4))
    report = divergence_diagnostic(g, h, 1, 1, search_box=100)
    assert report.divergent
    assert report.resonance_count == 201
    assert report.lattice_ratio == 1


def test_divergence_rational_density():
    g = builtin_window("double_indicator")
    h = builtin_window("stepped_indicator", eps=F(1, 4))
    report = divergence_diagnostic(g, h, F(3, 2), 1, search_box=100)
    assert report.divergent
    assert report.lattice_ratio == F(3, 2)
    assert report.resonance_count == 2 * 50 + 1


def test_divergence_null_difference():
    g = builtin_window("hat")
    report = divergence_diagnostic(g, g, 1, 1)
    assert not report.divergent
    assert report.resonance_count == 0


# ---------------------------------------------------------------------------
# Certificate invariants
# ---------------------------------------------------------------------------


def test_certificate_validation():
    with pytest.raises(ValueError):
        Certificate("x", True, {"A": F(1)})  # passed without bounds
    with pytest.raises(ValueError):
        Certificate(
            "x", True, {"A": F(1)},
            new_bounds=FrameBounds(0, 1),  # lower must be positive
        )
    with pytest.raises(ValueError):
        Certificate("x", False, {"R": F(-1)}, failure_reason="r")
    with pytest.raises(ValueError):
        Certificate(
            "x", False, {"A": F(1)},
            new_bounds=FrameBounds(1, 2),
            failure_reason="contradiction",
        )
