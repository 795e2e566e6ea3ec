"""Certificates for window and lattice perturbations of Gabor frames.

Each certifier takes a system (g, a, b) together with caller-supplied
frame bounds A, B (the theorems consume bounds as hypotheses; computing
them is the job of the walnut/zak modules, and keeping the two steps
separate shows which one failed).  A certificate records the measured
hypothesis quantities, a verdict, and, on success, explicit bounds for
the perturbed system.

Verdicts are three-valued.  ``passed`` means the hypothesis inequalities
were verified, with exact rational comparisons whenever the inputs allow
it.  A failed certificate carries the measured value that broke the
hypothesis.  When an enclosure is too wide to decide either way the
certificate is marked inconclusive instead of being coerced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .amalgam import amalgam_norm, amalgam_tail
from .core import (
    CERTIFIED,
    Enclosure,
    FrameBounds,
    GaborSystem,
    Number,
    PiecewiseFn,
    as_rat,
    ess_range,
    sqrt_or_float,
)
from .walnut import correlations, cross_term_sum

CORRELATION = "correlation-difference"
AMALGAM = "amalgam-difference"
UNIT_LATTICE = "unit-column-sum"
TRUNCATION = "support-truncation"
SHIFT = "translation-step"
DIVERGENCE = "rational-density-divergence"

_NONNEGATIVE_KEYS = ("R", "lambda", "eps", "delta", "N", "b0", "w", "s", "D")


def _validated_steps(a, b) -> tuple[Fraction, Fraction]:
    a, b = as_rat(a), as_rat(b)
    if a <= 0 or b <= 0:
        raise ValueError("lattice steps a and b must be positive")
    return a, b


@dataclass
class Certificate:
    """Machine-checked verdict on a perturbation theorem's hypotheses.

    hypothesis_values holds every named quantity of the statement (exact
    rationals preserved), populated even on failure so that boundary
    cases can be inspected.  new_bounds is present exactly when passed.
    riesz_preserved marks statements that also carry the Riesz-basis
    preservation clause; it is informational, not separately verified.
    """

    theorem: str
    passed: bool
    hypothesis_values: dict
    new_bounds: FrameBounds | None = None
    failure_reason: str | None = None
    conclusive: bool = True
    riesz_preserved: bool | None = None

    def __post_init__(self):
        if self.passed:
            if self.new_bounds is None:
                raise ValueError("passing certificate must carry new bounds")
            if not self.new_bounds.lower > 0:
                raise ValueError("passing certificate must have positive lower bound")
            if self.failure_reason is not None:
                raise ValueError("passing certificate cannot carry a failure reason")
        else:
            if self.new_bounds is not None:
                raise ValueError("failing certificate cannot carry new bounds")
            if self.failure_reason is None:
                raise ValueError("failing certificate needs a failure reason")
        for key in _NONNEGATIVE_KEYS:
            if key in self.hypothesis_values and self.hypothesis_values[key] < 0:
                raise ValueError(f"hypothesis value {key} must be nonnegative")


def perturbed_frame_bounds(A: Number, B: Number, R: Number) -> FrameBounds:
    """Bounds A(1 - sqrt(R/A))^2, B(1 + sqrt(R/B))^2 for a perturbation of
    size R of a frame with bounds A, B.

    Expanded to A + R - 2 sqrt(AR) and B + R + 2 sqrt(BR) so the result
    stays an exact rational whenever the products are perfect squares."""
    if not 0 < A <= B:
        raise ValueError("need 0 < A <= B")
    if R < 0:
        raise ValueError("R must be nonnegative")
    if R >= A:
        raise ValueError("R must be < A")
    lower = A + R - 2 * sqrt_or_float(A * R)
    upper = B + R + 2 * sqrt_or_float(B * R)
    return FrameBounds(lower, upper, CERTIFIED)


def _base_values(a, b, A, B) -> dict:
    return {"a": a, "b": b, "A": A, "B": B}


def certify_correlation(
    g: PiecewiseFn,
    h: PiecewiseFn,
    a,
    b,
    A: Number,
    B: Number,
    tol: float = 1e-9,
) -> Certificate:
    """Window perturbation controlled by the correlation functions of the
    difference: if ess sup sum_k |G_k[h - g]| <= b R with R < A, the
    perturbed system is a frame with the combined bounds.

    The sharpest of the three window certifiers; the amalgam version is
    derived from this one by bounding the correlation sum."""
    a, b = _validated_steps(a, b)
    diff = h - g
    values = _base_values(a, b, A, B)
    if diff.is_zero:
        values["R"] = Fraction(0)
        return Certificate(
            CORRELATION,
            True,
            values,
            new_bounds=FrameBounds(A, B, CERTIFIED),
            riesz_preserved=True,
        )
    enclosure = cross_term_sum(correlations(GaborSystem(diff, a, b)), tol)
    r_certified = enclosure.hi / b
    r_witness = enclosure.lo / b
    values["R"] = r_certified
    values["R_witness"] = r_witness
    if r_certified < A:
        return Certificate(
            CORRELATION,
            True,
            values,
            new_bounds=perturbed_frame_bounds(A, B, r_certified),
            riesz_preserved=True,
        )
    if r_witness >= A:
        return Certificate(
            CORRELATION,
            False,
            values,
            failure_reason=f"R = {r_certified} is not below A = {A}",
        )
    return Certificate(
        CORRELATION,
        False,
        values,
        failure_reason=(
            f"inconclusive: correlation sum enclosure [{float(r_witness):.6g}, "
            f"{float(r_certified):.6g}] straddles A = {float(A):.6g}"
        ),
        conclusive=False,
    )


def certify_amalgam(
    g: PiecewiseFn,
    h: PiecewiseFn,
    a,
    b,
    A: Number,
    B: Number,
) -> Certificate:
    """Window perturbation controlled by the amalgam norm of the
    difference: w = ||g - h||_{W,a} below sqrt(bA)/2 certifies the frame
    property with R = 4 w^2 / b."""
    a, b = _validated_steps(a, b)
    norm = amalgam_norm(h - g, a)
    r_value = 4 * norm.value * norm.value / b
    values = _base_values(a, b, A, B)
    values["w"] = norm.value
    values["R"] = r_value
    if r_value < A:
        return Certificate(
            AMALGAM,
            True,
            values,
            new_bounds=perturbed_frame_bounds(A, B, r_value),
            riesz_preserved=True,
        )
    if norm.exact:
        return Certificate(
            AMALGAM,
            False,
            values,
            failure_reason=f"R = 4 w^2 / b = {r_value} is not below A = {A}",
        )
    return Certificate(
        AMALGAM,
        False,
        values,
        failure_reason=(
            "inconclusive: amalgam norm is an inexact upper estimate "
            f"({float(norm.value):.6g}) and R >= A under it"
        ),
        conclusive=False,
    )


def _column_sum_enclosure(u: PiecewiseFn) -> Enclosure:
    """Enclosure of ess sup_x sum_n |u(x + n)| over x in [0, 1)."""
    fracs = {Fraction(0), Fraction(1)}
    for bp in u.breakpoints:
        fracs.add(bp - math.floor(bp))
    breaks = sorted(fracs)
    u0, u1 = u.support()
    lo_best: Number = Fraction(0)
    hi_best: Number = Fraction(0)
    for lo, hi in zip(breaks, breaks[1:]):
        mid = (lo + hi) / 2
        cell_hi: Number = Fraction(0)
        cell_lo = 0.0
        for n in range(math.floor(u0 - hi), math.ceil(u1 - lo) + 1):
            if not u.piece_at(mid + n):
                continue
            enc = ess_range(u, (lo + n, hi + n), mode="abs")
            cell_hi = cell_hi + enc.hi
            cell_lo += abs(u.eval_float(float(mid) + n))
        if cell_hi > hi_best:
            hi_best = cell_hi
        if cell_lo > float(lo_best):
            lo_best = cell_lo
    return Enclosure(min(lo_best, hi_best), hi_best)


def certify_unit_lattice(
    g: PiecewiseFn,
    h: PiecewiseFn,
    A: Number,
    B: Number,
) -> Certificate:
    """Unit-lattice (a = b = 1) perturbation via the column sum
    s(x) = sum_n |(g - h)(x + n)|: lambda = ess sup s / sqrt(A) < 1
    certifies bounds ((1 - lambda)^2 A, (1 + lambda)^2 B).

    lambda < 1 is decided as s^2 < A, exactly when s is rational."""
    values = _base_values(Fraction(1), Fraction(1), A, B)
    diff = g - h
    if diff.is_zero:
        values["s"] = Fraction(0)
        values["lambda"] = Fraction(0)
        return Certificate(
            UNIT_LATTICE,
            True,
            values,
            new_bounds=FrameBounds(A, B, CERTIFIED),
            riesz_preserved=True,
        )
    enc = _column_sum_enclosure(diff)
    s = enc.hi
    sqrt_a = sqrt_or_float(A)
    lam = s / sqrt_a
    values["s"] = s
    values["lambda"] = lam
    if s * s < A:
        lower = (1 - lam) * (1 - lam) * A
        upper = (1 + lam) * (1 + lam) * B
        return Certificate(
            UNIT_LATTICE,
            True,
            values,
            new_bounds=FrameBounds(lower, upper, CERTIFIED),
            riesz_preserved=True,
        )
    if enc.lo * enc.lo >= A:
        return Certificate(
            UNIT_LATTICE,
            False,
            values,
            failure_reason=f"lambda = {float(lam):.6g} is not below 1",
        )
    return Certificate(
        UNIT_LATTICE,
        False,
        values,
        failure_reason=(
            f"inconclusive: column sum enclosure [{float(enc.lo):.6g}, "
            f"{float(enc.hi):.6g}] straddles sqrt(A)"
        ),
        conclusive=False,
    )


def certify_truncation(g: PiecewiseFn, a, b, A: Number, B: Number) -> Certificate:
    """Smallest N with ||g - g restricted to [-Na, Na]||_{W,a} below
    sqrt(bA)/2, re-certified through the amalgam criterion.

    Compact support guarantees the tail reaches zero, so N always
    exists.  The tail comparison 2 tail < sqrt(bA) is squared to stay in
    rational arithmetic."""
    a, b = _validated_steps(a, b)
    if not A > 0:
        raise ValueError("need a positive lower frame bound")
    g0, g1 = g.support()
    n_cap = math.ceil(max(abs(g0), abs(g1)) / a) + 1
    chosen = None
    tail_value: Number = Fraction(0)
    for n in range(1, n_cap + 1):
        tail_value = amalgam_tail(g, a, n).value
        if 4 * tail_value * tail_value < b * A:
            chosen = n
            break
    if chosen is None:  # unreachable for compactly supported windows
        raise RuntimeError("truncation tail never fell below the threshold")
    truncated = g.restrict(-chosen * a, chosen * a)
    inner = certify_amalgam(g, truncated, a, b, A, B)
    values = dict(inner.hypothesis_values)
    values["N"] = chosen
    values["tail"] = tail_value
    return Certificate(
        TRUNCATION,
        inner.passed,
        values,
        new_bounds=inner.new_bounds,
        failure_reason=inner.failure_reason,
        conclusive=inner.conclusive,
        riesz_preserved=inner.riesz_preserved,
    )


def _shift_defect(g: PiecewiseFn, a: Fraction, a_prime: Fraction) -> Number:
    """ess sup over one period [0, a') of sum_n |g(t - na) - g(t - na')|^2.

    The defect sum is not periodic for mixed lattices; following the way
    it enters the shift theorem's proof we measure it over a fundamental
    domain of the target lattice, where only finitely many n contribute."""
    g0, g1 = g.support()
    step = min(a, a_prime)
    n_lo = math.floor(-g1 / step) - 1
    n_hi = math.ceil((a_prime - g0) / step) + 1
    total = PiecewiseFn.zero()
    for n in range(n_lo, n_hi + 1):
        term = g.translate(n * a) - g.translate(n * a_prime)
        if term.is_zero:
            continue
        total = total + term.abs_sq().restrict(-a_prime, 2 * a_prime)
    if total.restrict(0, a_prime).is_zero:
        return Fraction(0)
    return ess_range(total, (0, a_prime), mode="real").hi


def _delta_below_target(delta, bA, R) -> bool:
    """delta < (sqrt(bA) - sqrt(R))^2, decided without square roots:
    with y = bA + R - delta this is y > 0 and y^2 > 4 bA R."""
    y = bA + R - delta
    return y > 0 and y * y > 4 * bA * R


def certify_shift(
    g: PiecewiseFn,
    a,
    b,
    A: Number,
    B: Number,
    a_prime=None,
    R: Number | None = None,
    mode: str = "given_aprime",
    grid_denominator: int = 10**4,
) -> Certificate:
    """Lattice-step perturbation a -> a' at a rate b' <= b0.

    Measured quantities, all recorded in hypothesis_values:

    * D, the defect ess sup_t sum_n |g(t - na) - g(t - na')|^2 over one
      a'-period, which must not exceed the perturbation budget R
      (default: R = D, or a tiny fraction of bA when D = 0);
    * eps, the largest rational on the 1/grid_denominator grid, at most
      a/2, with delta = 32 eps ||g||_{W,a} + 16 eps^2 strictly below
      (sqrt(bA) - sqrt(R))^2 (compared exactly);
    * N, the smallest integer whose amalgam tail falls below eps, and
      b0 = 1/(4aN);
    * the b'-scaled bound coefficients (sqrt(bA) -+ sqrt(R))^2 -+ delta,
      valid for every 0 < b' <= b0 (see shift_bounds_at).

    mode "given_aprime" additionally checks |a - a'| < eps and D <= R;
    mode "report_epsilon" only constructs eps/N/b0, matching the
    statement's order of quantifiers (eps exists before a' is picked)."""
    a, b = _validated_steps(a, b)
    if mode not in ("given_aprime", "report_epsilon"):
        raise ValueError(f"unknown certify_shift mode {mode!r}")
    if mode == "given_aprime" and a_prime is None:
        raise ValueError("mode 'given_aprime' requires a_prime")
    if a_prime is not None:
        a_prime = as_rat(a_prime)
        if a_prime <= 0:
            raise ValueError("a_prime must be positive")
    values = _base_values(a, b, A, B)

    defect: Number | None = None
    if a_prime is not None:
        defect = Fraction(0) if a_prime == a else _shift_defect(g, a, a_prime)
        values["a_prime"] = a_prime
        values["D"] = defect
    if R is None:
        if defect is not None and defect > 0:
            R = defect
        else:
            R = b * A / 2**20
    values["R"] = R
    if R >= b * A:
        raise ValueError("R must be < bA")
    if R <= 0:
        raise ValueError("R must be positive")

    norm = amalgam_norm(g, a)
    values["amalgam_norm"] = norm.value
    w = norm.value
    bA = b * A

    def delta_of(eps):
        return 32 * eps * w + 16 * eps * eps

    def admissible(eps) -> bool:
        return 0 < eps <= a / 2 and _delta_below_target(delta_of(eps), bA, R)

    # Seed the grid search with the float root of 16 e^2 + 32 w e = target,
    # then correct on the exact grid.
    target_float = (math.sqrt(float(bA)) - math.sqrt(float(R))) ** 2
    seed = (-32 * float(w) + math.sqrt((32 * float(w)) ** 2 + 64 * target_float)) / 32
    j = max(0, math.floor(min(seed, float(a) / 2) * grid_denominator))
    while j > 0 and not admissible(Fraction(j, grid_denominator)):
        j -= 1
    while admissible(Fraction(j + 1, grid_denominator)):
        j += 1
    if j == 0:
        return Certificate(
            SHIFT,
            False,
            values,
            failure_reason=(
                f"no admissible step radius on the 1/{grid_denominator} grid: "
                "32 eps ||g||_W + 16 eps^2 cannot fit below (sqrt(bA) - sqrt(R))^2"
            ),
        )
    eps = Fraction(j, grid_denominator)
    delta = delta_of(eps)
    values["eps"] = eps
    values["delta"] = delta

    big_n = 1
    while not amalgam_tail(g, a, big_n).value < eps:
        big_n += 1
    b0 = 1 / (4 * a * big_n)
    values["N"] = big_n
    values["b0"] = b0
    root = sqrt_or_float(bA * R)
    lower_coef = bA + R - 2 * root - delta
    upper_coef = bA + R + 2 * root + delta
    values["lower_coefficient"] = lower_coef
    values["upper_coefficient"] = upper_coef

    if mode == "given_aprime":
        if defect > R:
            return Certificate(
                SHIFT,
                False,
                values,
                failure_reason=f"defect D = {float(defect):.6g} exceeds R = {float(R):.6g}",
            )
        gap = abs(a - a_prime)
        if gap >= eps:
            return Certificate(
                SHIFT,
                False,
                values,
                failure_reason=(
                    f"|a - a'| = {float(gap):.6g} is not below the admissible "
                    f"step radius eps = {float(eps):.6g}"
                ),
            )
    return Certificate(
        SHIFT,
        True,
        values,
        new_bounds=FrameBounds(lower_coef / b0, upper_coef / b0, CERTIFIED),
        riesz_preserved=None,
    )


def shift_bounds_at(cert: Certificate, b_prime) -> FrameBounds:
    """Frame bounds a shift certificate asserts for the system
    (g, a', b'); requires 0 < b' <= b0 and a certificate that computed
    the bound coefficients."""
    if cert.theorem != SHIFT:
        raise ValueError("shift_bounds_at needs a translation-step certificate")
    if "lower_coefficient" not in cert.hypothesis_values:
        raise ValueError("certificate carries no bound coefficients")
    b_prime = as_rat(b_prime)
    b0 = cert.hypothesis_values["b0"]
    if not 0 < b_prime <= b0:
        raise ValueError(f"b' must lie in (0, {b0}]")
    return FrameBounds(
        cert.hypothesis_values["lower_coefficient"] / b_prime,
        cert.hypothesis_values["upper_coefficient"] / b_prime,
        CERTIFIED,
    )


@dataclass(frozen=True)
class DivergenceReport:
    """Outcome of the rational-density divergence diagnostic."""

    divergent: bool
    witness_cell: tuple | None
    resonance_count: int
    search_box: int
    lattice_ratio: Fraction


def divergence_diagnostic(
    g: PiecewiseFn,
    h: PiecewiseFn,
    a,
    b,
    search_box: int = 100,
) -> DivergenceReport:
    """For rational a b, the double sum sum_{k,n} |(g-h)(x - na - k/b)|^2
    repeats each value infinitely often along the resonances
    n a + k / b = 0, hence diverges unless g = h almost everywhere.

    Reports a cell where the difference is nonzero and the number of
    resonant (n, k) pairs with |n| <= search_box; the count grows without
    bound as the box does, which is the quantitative form of divergence."""
    a, b = _validated_steps(a, b)
    if search_box < 1:
        raise ValueError("search_box must be positive")
    diff = g - h
    ratio = a * b
    if diff.is_zero:
        return DivergenceReport(False, None, 0, search_box, ratio)
    q = ratio.denominator
    count = 2 * (search_box // q) + 1
    lo, hi, _ = next(iter(diff.cells()))
    return DivergenceReport(True, (lo, hi), count, search_box, ratio)
