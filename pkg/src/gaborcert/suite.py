"""Executable counterexample scenarios.

Each scenario builds a concrete window family, evaluates a list of
claims by calling the analysis modules, and records expected versus
observed values.  Claims marked exact are decided in rational
arithmetic; the others carry an explicit tolerance.  A failing claim is
a build failure, so the scenarios double as end-to-end regression tests
of everything the package computes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import GaborSystem, PiecewiseFn, periodize
from .oracle import alternating_norm_sq, empirical_bounds
from .perturb import certify_correlation, certify_unit_lattice
from .walnut import correlations, cross_term_sum, walnut_bounds
from .windows import builtin_window, cantor_like_intervals
from .zak import zak_frame_bounds


@dataclass(frozen=True)
class Claim:
    """One checkable assertion: what was expected, what was observed,
    and whether the comparison was exact or tolerance-based."""

    name: str
    expected: object
    observed: object
    passed: bool
    exact: bool
    source: str

    @staticmethod
    def exact_eq(name: str, expected, observed, source: str) -> "Claim":
        return Claim(name, expected, observed, expected == observed, True, source)

    @staticmethod
    def below(name: str, threshold, observed, source: str) -> "Claim":
        return Claim(name, f"< {threshold}", observed, observed < threshold, False, source)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    claims: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def failures(self) -> list[Claim]:
        return [c for c in self.claims if not c.passed]


def scenario_step_boundary(eps=Fraction(1, 4)) -> Scenario:
    """Two-level step window g whose lower frame bound is exactly eps^2,
    perturbed to the flat window h = chi_[0,2).

    The perturbation size R lands exactly on the boundary R = A, the
    combined-bound certificate rightly refuses, and h generates a system
    whose alternating translate sums stay bounded while their coefficient
    norms grow, so the perturbed family is not even Riesz-basic."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    g = builtin_window("stepped_indicator", eps=eps)
    h = builtin_window("double_indicator")
    sys_g = GaborSystem(g, Fraction(1), Fraction(1))
    claims = []

    zb = zak_frame_bounds(sys_g)
    wb = walnut_bounds(sys_g)
    claims.append(Claim.exact_eq("zak lower bound is eps^2", eps**2, zb.lower, "certified bound"))
    claims.append(Claim.exact_eq("walnut lower bound is eps^2", eps**2, wb.lower, "certified bound"))

    diff_sum = cross_term_sum(correlations(GaborSystem(h - g, Fraction(1), Fraction(1))))
    claims.append(
        Claim.exact_eq("correlation sum of h - g is eps^2", eps**2, diff_sum.hi, "exact enclosure")
    )

    cert = certify_correlation(g, h, 1, 1, eps**2, wb.upper)
    claims.append(
        Claim.exact_eq("boundary certificate refuses with R = A", (False, Fraction(0)),
                       (cert.passed, cert.hypothesis_values["R"] - eps**2), "certificate")
    )

    for n in range(1, 6):
        claims.append(
            Claim.exact_eq(f"alternating sum of h over 2n = {2 * n} translates has norm^2 = 2",
                           Fraction(2), alternating_norm_sq(h, n), "exact arithmetic")
        )
    coeff_norm_sq = 2 * 5
    claims.append(
        Claim(
            "bounded sums with growing coefficients defeat the Riesz-basic property",
            "norm^2 stays 2 while coefficient norm^2 reaches 10",
            (alternating_norm_sq(h, 5), coeff_norm_sq),
            alternating_norm_sq(h, 5) == 2 and coeff_norm_sq == 10,
            True,
            "exact arithmetic",
        )
    )
    return Scenario(
        "step-boundary",
        f"step window with eps = {eps}: sharp lower bound eps^2 and a perturbation "
        "that lands exactly on the allowed boundary",
        tuple(claims),
    )


def scenario_half_height() -> Scenario:
    """g = chi_[0,1) against h at half height on twice the support.

    The squared column sum of the difference is identically 1/2, below
    the lower bound 1 of the unperturbed system; if the column-sum
    criterion held with squares, h would generate a frame.  It does not:
    its Zak transform vanishes, so the l2 variant of the criterion is
    false and only the absolute-sum version survives."""
    g = builtin_window("indicator")
    h = builtin_window("double_indicator").scale(Fraction(1, 2))
    claims = []

    rep = periodize((g - h).abs_sq(), Fraction(1))
    claims.append(
        Claim.exact_eq(
            "squared column sum of g - h is identically 1/2",
            True,
            rep.equal_ae(PiecewiseFn.indicator(0, 1, Fraction(1, 2))),
            "exact arithmetic",
        )
    )

    zb = zak_frame_bounds(GaborSystem(h, Fraction(1), Fraction(1)))
    claims.append(Claim.exact_eq("perturbed system has lower bound 0", Fraction(0), zb.lower,
                                 "certified bound"))

    report = empirical_bounds(GaborSystem(h, Fraction(1), Fraction(1)),
                              budget=500, seed=42, m_max=2048)
    claims.append(Claim.below("search drives the Rayleigh quotient below 0.05",
                              0.05, report.rho_min, "oracle search"))
    claims.append(
        Claim(
            "l2 column-sum hypothesis holds yet the conclusion fails",
            "sum = 1/2 < A = 1 while lower bound is 0",
            (Fraction(1, 2), zb.lower),
            Fraction(1, 2) < 1 and zb.lower == 0,
            True,
            "exact arithmetic",
        )
    )
    return Scenario(
        "half-height",
        "half-height double-width perturbation of the unit indicator: the squared "
        "column-sum criterion fails",
        tuple(claims),
    )


def scenario_unit_sum_boundary() -> Scenario:
    """g = chi_[0,1) against h = chi_[0,2): the column sum of the
    difference equals 1 exactly, so the unit-lattice criterion sits on
    its lambda = 1 boundary, and indeed h generates no frame."""
    g = builtin_window("indicator")
    h = builtin_window("double_indicator")
    cert = certify_unit_lattice(g, h, Fraction(1), Fraction(1))
    claims = [
        Claim.exact_eq("column sum of g - h is exactly 1", Fraction(1),
                       cert.hypothesis_values["s"], "exact enclosure"),
        Claim.exact_eq("unit-lattice certificate refuses at lambda = 1", False,
                       cert.passed, "certificate"),
    ]
    report = empirical_bounds(GaborSystem(h, Fraction(1), Fraction(1)),
                              budget=300, seed=42, m_max=512)
    claims.append(Claim.below("perturbed system Rayleigh quotient falls below 0.05",
                              0.05, report.rho_min, "oracle search"))
    return Scenario(
        "unit-sum-boundary",
        "doubling the indicator support: lambda = 1 is sharp and cannot be allowed",
        tuple(claims),
    )


def scenario_shrunk_indicator(eps_values=(Fraction(1, 8), Fraction(1, 4))) -> Scenario:
    """Indicators of [0, 1 - eps) on the unit lattice: the translates
    leave gaps of measure eps per period, the diagonal correlation
    vanishes there, and no frame bound survives."""
    claims = []
    for eps in eps_values:
        eps = Fraction(eps)
        g = builtin_window("shrunk_indicator", eps=eps)
        sys_g = GaborSystem(g, Fraction(1), Fraction(1))
        rep = periodize(g.abs_sq(), Fraction(1))
        covered = sum((hi - lo for lo, hi, p in rep.cells() if p), Fraction(0))
        claims.append(
            Claim.exact_eq(f"eps = {eps}: translate gaps have measure eps per period",
                           eps, 1 - covered, "exact arithmetic")
        )
        wb = walnut_bounds(sys_g)
        claims.append(
            Claim.exact_eq(f"eps = {eps}: walnut lower bound is 0", Fraction(0), wb.lower,
                           "certified bound")
        )
        report = empirical_bounds(sys_g, budget=200, seed=42, m_max=512,
                                  cell_width=eps / 2)
        claims.append(
            Claim.below(f"eps = {eps}: Rayleigh quotient vanishes on the gap",
                        1e-9, report.rho_min, "oracle search")
        )
    return Scenario(
        "shrunk-indicator",
        "indicators shorter than the translation step never form a frame",
        tuple(claims),
    )


def scenario_cantor_like(n_max: int = 6) -> Scenario:
    """Dyadic union window: an indicator of finitely many intervals that
    tiles the unit cell ever more finely.

    On the unit lattice the truncated construction behaves as an
    orthonormal system away from an unresolved tail of measure
    4^{-(n_max+1)}.  Yet an arbitrarily small shrink of the translation
    step to a' inside a construction gap leaves a set of positive
    measure covered by no translate, so (g, a', b) admits no frame bound
    for any b: frame existence is not stable under perturbing a."""
    if not 2 <= n_max <= 20:
        raise ValueError("n_max must lie in [2, 20]")
    g = builtin_window("cantor_like", n_max=n_max)
    claims = []

    tail = Fraction(1, 4 ** (n_max + 1))
    expected_first = Fraction(15, 16) + Fraction(1, 6) * (Fraction(1, 4) - Fraction(1, 4**n_max))
    expected_second = Fraction(1, 12) * (Fraction(1, 4) - Fraction(1, 4**n_max))
    measured_first = Fraction(0)
    measured_second = Fraction(0)
    for lo, hi in cantor_like_intervals(n_max):
        if lo < 1:
            measured_first += hi - lo
        else:
            measured_second += hi - lo
    claims.append(Claim.exact_eq("measure on [0,1) telescopes", expected_first,
                                 measured_first, "exact arithmetic"))
    claims.append(Claim.exact_eq("measure on [1,2) telescopes", expected_second,
                                 measured_second, "exact arithmetic"))

    rep = periodize(g.abs_sq(), Fraction(1))
    claims.append(
        Claim.exact_eq(
            "diagonal correlation is 1 off the unresolved tail",
            True,
            rep.equal_ae(PiecewiseFn.indicator(0, 1 - tail, 1)),
            "exact arithmetic",
        )
    )
    claims.append(Claim.exact_eq("unresolved tail is within bookkeeping bound", True,
                                 tail <= 2 * Fraction(1, 4**n_max), "exact arithmetic"))

    # Shrink the step into the gap after construction level n = 2.
    level = 2
    a_prime = Fraction(125, 128)
    gap_lo = 1 - Fraction(1, 2 ** (2 * level + 1))
    gap_hi = 1 - Fraction(1, 2 ** (2 * (level + 1)))
    claims.append(Claim.exact_eq("shrunk step sits inside the construction gap", True,
                                 gap_lo < a_prime < gap_hi, "exact arithmetic"))

    shifted = periodize(g.abs_sq(), a_prime)
    covered = sum((hi - lo for lo, hi, p in shifted.cells() if p), Fraction(0))
    zero_measure = a_prime - covered
    claims.append(
        Claim(
            "uncovered set has positive measure at least a' - (1 - 2^-5)",
            f">= {a_prime - gap_lo}",
            zero_measure,
            zero_measure >= a_prime - gap_lo > 0,
            True,
            "exact arithmetic",
        )
    )
    for b in (Fraction(1), Fraction(1, 2)):
        wb = walnut_bounds(GaborSystem(g, a_prime, b))
        claims.append(
            Claim.exact_eq(f"no lower frame bound survives at b = {b}", Fraction(0),
                           wb.lower, "certified bound")
        )
    return Scenario(
        "cantor-like",
        f"dyadic union window at level {n_max}: orthonormal behavior on the unit "
        "lattice, no frame at all after an arbitrarily small step shrink",
        tuple(claims),
    )


ALL_SCENARIOS = {
    "step-boundary": scenario_step_boundary,
    "half-height": scenario_half_height,
    "unit-sum-boundary": scenario_unit_sum_boundary,
    "shrunk-indicator": scenario_shrunk_indicator,
    "cantor-like": scenario_cantor_like,
}


def run_scenarios(names=None) -> list[Scenario]:
    """Evaluate the named scenarios (all by default), in a stable order."""
    if names is None:
        names = list(ALL_SCENARIOS)
    missing = [n for n in names if n not in ALL_SCENARIOS]
    if missing:
        raise KeyError(f"unknown scenario(s): {', '.join(missing)}")
    return [ALL_SCENARIOS[n]() for n in names]
