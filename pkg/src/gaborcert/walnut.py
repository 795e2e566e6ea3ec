"""Correlation functions of a Gabor system and the bounds built from them.

For a system (g, a, b) the correlation functions are

    G_k(t) = sum_n g(t - n a) conj(g(t - n a - k/b)),

each a-periodic and stored as its exact representative on [0, a).  They
satisfy G_{-k}(t) = conj(G_k(t + k/b)) and vanish for |k| > diam(supp g) * b.

Two consequences are implemented here:

* certified frame bounds from the diagonal term and the sup norms of the
  off-diagonal terms (lower may degrade to 0, never over-claims), and
* the quadratic-form identity
      sum_{n,m} |<f, E_{mb} T_{na} g>|^2
        = (1/b) sum_k  integral conj(f(t)) f(t - k/b) G_k(t) dt,
  checked numerically on the left (m-truncated) against the exact rational
  right-hand side, with a rigorous truncation tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import (
    CERTIFIED,
    Enclosure,
    FrameBounds,
    GaborSystem,
    Number,
    PiecewiseFn,
    _abs_cell_range,
    _subcells,
    as_rat,
    ess_range,
    integral_exact,
    periodize,
    poly_eval,
    poly_is_real,
    sqrt_or_float,
    total_variation_bound,
    unfold,
)

SUBDIV_TOL = 1e-12
SUBDIV_CAP = 400


@dataclass(frozen=True)
class CorrelationSeries:
    """Exact correlation terms of a window pair under a lattice (a, b).

    ``terms`` maps k to the [0, a) representative of G_k; k outside
    [-k_support, k_support] is identically zero."""

    a: Fraction
    b: Fraction
    terms: dict
    k_support: int

    def term(self, k: int) -> PiecewiseFn:
        return self.terms.get(k, PiecewiseFn.zero())

    def ks(self) -> Iterator[int]:
        return iter(sorted(self.terms))

    def hermitian_partner(self, k: int) -> PiecewiseFn:
        """Representative of t -> conj(G_k(t + k/b)) on [0, a); equals the
        G_{-k} representative when the series comes from a single window."""
        shift = (k / self.b) % self.a
        rep = self.term(k)
        moved = unfold(rep, self.a, shift, shift + self.a).translate(-shift)
        return moved.restrict(0, self.a).conj()


def cross_correlations(u: PiecewiseFn, v: PiecewiseFn, a, b) -> CorrelationSeries:
    """Correlation series sum_n u(t - na) conj(v(t - na - k/b)) for a
    window pair.  Used directly for difference windows and amalgam
    estimates; ``correlations`` is the single-window case."""
    a, b = as_rat(a), as_rat(b)
    if a <= 0 or b <= 0:
        raise ValueError("lattice steps must be positive")
    if u.is_zero or v.is_zero:
        return CorrelationSeries(a, b, {}, 0)
    u0, u1 = u.support()
    v0, v1 = v.support()
    k_lo = math.ceil(b * (u0 - v1))
    k_hi = math.floor(b * (u1 - v0))
    terms = {}
    for k in range(k_lo, k_hi + 1):
        q_k = u.multiply(v.translate(k / b).conj())
        rep = periodize(q_k, a)
        if not rep.is_zero:
            terms[k] = rep
    k_support = max((abs(k) for k in terms), default=0)
    return CorrelationSeries(a, b, terms, k_support)


def correlations(sys: GaborSystem) -> CorrelationSeries:
    return cross_correlations(sys.window, sys.window, sys.a, sys.b)


# ---------------------------------------------------------------------------
# Sup norms with enclosures
# ---------------------------------------------------------------------------


def _cell_sup_data(p, u: Fraction, v: Fraction):
    """(sup lower bound, sup upper bound, tight) for |p| on one cell.

    Real pieces and complex pieces of degree <= 1 give the exact modulus
    range, so the supremum is pinned (tight).  Complex quadratics get a
    rectangle bound plus a midpoint evaluation as the lower witness."""
    lo_rng, hi_rng = _abs_cell_range(p, u, v)
    tight = poly_is_real(p) or len(p) <= 2
    if tight:
        return hi_rng, hi_rng, True
    mid = (u + v) / 2
    witness = sqrt_or_float(poly_eval(p, mid).abs2())
    return max(lo_rng, witness), hi_rng, False


def sup_abs(f: PiecewiseFn, lo, hi, tol: float = SUBDIV_TOL) -> Enclosure:
    """Enclosure of ess sup |f| over [lo, hi], subdividing non-tight cells
    until the enclosure is narrower than tol (or a cap is hit)."""
    lo, hi = as_rat(lo), as_rat(hi)
    work = [(u, v, p) for u, v, p in _subcells(f, lo, hi)]
    for _ in range(SUBDIV_CAP):
        best_lo: Number = Fraction(0)
        best_hi: Number = Fraction(0)
        worst = None
        for idx, (u, v, p) in enumerate(work):
            w_lo, w_hi, tight = _cell_sup_data(p, u, v)
            if w_lo > best_lo:
                best_lo = w_lo
            if w_hi > best_hi:
                best_hi = w_hi
            if not tight and (worst is None or w_hi > worst[1]):
                worst = (idx, w_hi)
        if worst is None or float(best_hi) - float(best_lo) <= tol:
            return Enclosure(min(best_lo, best_hi), best_hi)
        idx = worst[0]
        u, v, p = work.pop(idx)
        mid = (u + v) / 2
        work.extend([(u, mid, p), (mid, v, p)])
    return Enclosure(min(best_lo, best_hi), best_hi)


def sup_norms(series: CorrelationSeries, tol: float = SUBDIV_TOL) -> dict:
    """k -> enclosure of the sup norm of G_k over one period."""
    return {k: sup_abs(series.term(k), 0, series.a, tol) for k in series.ks()}


def cross_term_sum(series: CorrelationSeries, tol: float = SUBDIV_TOL) -> Enclosure:
    """Enclosure of ess sup over one period of sum_k |G_k(t)|.

    On every cell of the common refinement each |G_k| gets its closed-form
    range; the cellwise interval sum bounds the function and the midpoint
    evaluation is the attained lower witness.  Piecewise-constant input
    collapses to an exact point enclosure.  Cells are bisected until the
    global enclosure is narrower than tol."""
    a = series.a
    pts = {Fraction(0), a}
    for k in series.ks():
        pts.update(b for b in series.term(k).breakpoints if 0 <= b <= a)
    grid = sorted(pts)
    polys = {k: series.term(k) for k in series.ks()}

    def cell_data(u: Fraction, v: Fraction):
        hi_sum: Number = Fraction(0)
        mid = (u + v) / 2
        witness: Number = Fraction(0)
        tight = True
        for k, fn in polys.items():
            p = fn.piece_at(mid)
            _, w_hi, w_tight = _cell_sup_data(p, u, v)
            hi_sum = hi_sum + w_hi
            witness = witness + sqrt_or_float(poly_eval(p, mid).abs2())
            if len(p) > 1:
                tight = False  # non-constant pieces: sum of sups overestimates
        if tight:
            witness = hi_sum  # constants: the cell sum is attained everywhere
        return witness, hi_sum

    work = list(zip(grid, grid[1:]))
    for _ in range(SUBDIV_CAP):
        best_lo: Number = Fraction(0)
        best_hi: Number = Fraction(0)
        worst = None
        for idx, (u, v) in enumerate(work):
            w_lo, w_hi = cell_data(u, v)
            if w_lo > best_lo:
                best_lo = w_lo
            if w_hi > best_hi:
                best_hi = w_hi
            if w_hi != w_lo and (worst is None or w_hi > worst[1]):
                worst = (idx, w_hi)
        if worst is None or float(best_hi) - float(best_lo) <= tol:
            return Enclosure(min(best_lo, best_hi), best_hi)
        u, v = work.pop(worst[0])
        mid = (u + v) / 2
        work.extend([(u, mid), (mid, v)])
    return Enclosure(min(best_lo, best_hi), best_hi)


# ---------------------------------------------------------------------------
# Frame bounds
# ---------------------------------------------------------------------------


def walnut_bounds(sys: GaborSystem, tol: float = SUBDIV_TOL) -> FrameBounds:
    """Certified frame bounds

        lower = (1/b) max(0, ess inf G_0 - sum_{k != 0} ||G_k||_inf)
        upper = (1/b) (ess sup G_0 + sum_{k != 0} ||G_k||_inf)

    G_0 is real with exact rational extrema; the off-diagonal sup norms
    use their enclosure upper ends, so both bounds are sound."""
    series = correlations(sys)
    g0 = series.term(0)
    rng = ess_range(g0, (Fraction(0), series.a), mode="real")
    off: Number = Fraction(0)
    for k in series.ks():
        if k == 0:
            continue
        off = off + sup_abs(series.term(k), 0, series.a, tol).hi
    inv_b = Fraction(1) / series.b
    lower = inv_b * max(Fraction(0), rng.lo - off)
    upper = inv_b * (rng.hi + off)
    return FrameBounds(lower, upper, CERTIFIED)


# ---------------------------------------------------------------------------
# Quadratic-form identity check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    """Truncated brute-force energy vs exact correlation form."""

    lhs_truncated: float
    rhs_exact: Number
    tail_bound: float
    m_max: int
    passed: bool

    @property
    def gap(self) -> float:
        return float(self.rhs_exact) - self.lhs_truncated


def frame_energy_exact(f: PiecewiseFn, sys: GaborSystem) -> Fraction:
    """Exact value of sum_{n,m} |<f, E_{mb} T_{na} g>|^2 via the
    correlation form (1/b) sum_k integral conj(f) T_{k/b}f G_k."""
    series = correlations(sys)
    b = series.b
    if f.is_zero:
        return Fraction(0)
    f0, f1 = f.support()
    k_cap = math.floor(b * (f1 - f0))
    acc_re = Fraction(0)
    acc_im = Fraction(0)
    for k in range(-min(k_cap, series.k_support), min(k_cap, series.k_support) + 1):
        prod = f.conj().multiply(f.translate(k / b))
        if prod.is_zero:
            continue
        lo, hi = prod.support()
        gk = unfold(series.term(k), series.a, lo, hi)
        total = integral_exact(prod.multiply(gk))
        acc_re += total.re
        acc_im += total.im
    if acc_im != 0:
        raise AssertionError("correlation form produced a non-real energy")
    return acc_re / b


def identity_check(f: PiecewiseFn, sys: GaborSystem, m_max: int) -> IdentityReport:
    """Compare the m-truncated modulation sum against the exact form.

    The truncation error is the discarded nonnegative mass
    sum_{|m| > m_max} |<f, E_{mb} T_{na} g>|^2, bounded by integration by
    parts:  |<f, E_{mb} T_{na} g>| <= TV(f conj(T_{na} g)) / (2 pi |m| b),
    so the tail is at most sum_n TV_n^2 / (2 pi b)^2 * 2 / m_max."""
    if m_max <= 0:
        raise ValueError("m_max must be positive")
    from .oracle import truncated_frame_energy

    lhs = truncated_frame_energy(f, sys, m_max)
    rhs = frame_energy_exact(f, sys)
    tail = frame_energy_tail_bound(f, sys, m_max)
    slack = 1e-9 * max(1.0, abs(float(rhs)))
    passed = abs(lhs - float(rhs)) <= tail + slack
    return IdentityReport(lhs, rhs, tail, m_max, passed)


def frame_energy_tail_bound(f: PiecewiseFn, sys: GaborSystem, m_max: int) -> float:
    """Rigorous bound on the modulation tail sum_{|m| > m_max} |...|^2."""
    if f.is_zero:
        return 0.0
    a, b = sys.a, sys.b
    g = sys.window
    f0, f1 = f.support()
    g0, g1 = g.support()
    n_lo = math.floor((f0 - g1) / a)
    n_hi = math.ceil((f1 - g0) / a)
    tv_sq = 0.0
    for n in range(n_lo, n_hi + 1):
        prod = f.multiply(g.translate(n * a).conj())
        if prod.is_zero:
            continue
        tv = total_variation_bound(prod)
        tv_sq += tv * tv
    # sum_{|m| > M} 1/m^2 < 2/M
    return tv_sq / (2.0 * math.pi * float(b)) ** 2 * 2.0 / m_max
