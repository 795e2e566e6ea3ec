"""Zak-transform analysis for the integer lattice a = b = 1.

For a window g, the transform Z g(x, y) = sum_n g(x + n) e^{2 pi i n y}
is quasi-periodic, and on the critical lattice the optimal frame bounds
are the essential infimum and supremum of |Z g|^2 over the unit square.
This gives a second, structurally different route to bounds for the same
systems the correlation machinery handles, which is exactly what makes
it useful as a cross-check.

Compactly supported piecewise windows make the sum over n finite.  Two
evaluation paths are provided:

* a closed form when, on each x-cell, at most two constant coefficients
  survive (then |Z|^2 sweeps [(|c| - |d|)^2, (|c| + |d|)^2] in y, and the
  resulting bounds are exact rationals whenever the moduli are);
* a midpoint grid scan with Lipschitz slack in both variables otherwise,
  reported as an estimate rather than a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    CERTIFIED,
    ESTIMATED,
    FrameBounds,
    GaborSystem,
    PiecewiseFn,
    ess_range,
    poly_derivative,
    poly_shift,
    sqrt_or_float,
)

CoefficientCell = tuple[Fraction, Fraction, list]


def zak_value(g: PiecewiseFn, x: float, y: float) -> complex:
    """Z g(x, y) as a finite sum; breakpoint values follow the right-cell
    convention of the underlying pieces."""
    g0, g1 = g.support()
    total = 0j
    for n in range(math.floor(float(g0) - x), math.ceil(float(g1) - x) + 1):
        val = g.eval_float(x + n)
        if val != 0:
            total += val * complex(math.cos(2 * math.pi * n * y), math.sin(2 * math.pi * n * y))
    return total


def coefficient_cells(g: PiecewiseFn) -> list[CoefficientCell]:
    """Partition [0, 1) so that on each cell (u, v) the nonzero
    coefficients c_n(x) = g(x + n) are single polynomials in x.

    Returns (u, v, terms) with terms = [(n, poly), ...]; cells where the
    window contributes nothing carry an empty list."""
    fracs = {Fraction(0), Fraction(1)}
    for bp in g.breakpoints:
        fracs.add(bp - math.floor(bp))
    breaks = sorted(fracs)
    g0, g1 = g.support()
    out: list[CoefficientCell] = []
    for u, v in zip(breaks, breaks[1:]):
        mid = (u + v) / 2
        terms = []
        for n in range(math.floor(g0 - v), math.ceil(g1 - u) + 1):
            p = g.piece_at(mid + n)
            if p:
                terms.append((n, poly_shift(p, Fraction(-n))))
        out.append((u, v, terms))
    return out


def _cell_sup_abs(poly, u: Fraction, v: Fraction) -> float:
    """Rigorous upper bound for sup |poly| on (u, v)."""
    if not poly:
        return 0.0
    one_cell = PiecewiseFn.from_cells([(u, v, poly)])
    enc = ess_range(one_cell, (u, v), mode="abs")
    return float(enc.hi)


def zak_frame_bounds(sys: GaborSystem, resolution: int = 256) -> FrameBounds:
    """Frame bounds of (g, 1, 1) as the essential range of |Z g|^2.

    Certified exactly through the two-coefficient closed form when it
    applies; otherwise estimated from a slack-corrected grid scan."""
    if sys.a != 1 or sys.b != 1:
        raise ValueError("Zak-transform bounds require the unit lattice a = b = 1")
    cells = coefficient_cells(sys.window)
    closed_form = all(
        len(terms) <= 2 and all(len(p) == 1 for _, p in terms) for _, _, terms in cells
    )
    if closed_form:
        return _two_term_bounds(cells)
    return _grid_bounds(cells, resolution)


def _two_term_bounds(cells: list[CoefficientCell]) -> FrameBounds:
    los = []
    his = []
    for _, _, terms in cells:
        if not terms:
            los.append(Fraction(0))
            his.append(Fraction(0))
        elif len(terms) == 1:
            m = terms[0][1][0].abs2()
            los.append(m)
            his.append(m)
        else:
            a1 = terms[0][1][0].abs2()
            a2 = terms[1][1][0].abs2()
            cross = sqrt_or_float(a1 * a2)
            if isinstance(cross, Fraction):
                los.append(a1 + a2 - 2 * cross)
                his.append(a1 + a2 + 2 * cross)
            else:
                # |c1 c2| is irrational; fall back to outward-rounded floats.
                lo = float(a1) + float(a2) - 2 * cross
                los.append(lo * (1 - 1e-12) if lo > 0 else lo - 1e-300)
                his.append((float(a1) + float(a2) + 2 * cross) * (1 + 1e-12))
    return FrameBounds(min(los), max(his), CERTIFIED)


def _grid_bounds(cells: list[CoefficientCell], resolution: int) -> FrameBounds:
    ny = max(resolution, 8)
    ys = (np.arange(ny) + 0.5) / ny
    vmin = math.inf
    vmax = 0.0
    sup_sum_max = 0.0
    lip_y_max = 0.0
    lip_x_max = 0.0
    hx_max = 0.0
    for u, v, terms in cells:
        sups = {n: _cell_sup_abs(p, u, v) for n, p in terms}
        sup_sum = sum(sups.values())
        sup_sum_max = max(sup_sum_max, sup_sum)
        lip_y_max = max(lip_y_max, 2 * math.pi * sum(abs(n) * s for n, s in sups.items()))
        lip_x = sum(_cell_sup_abs(poly_derivative(p), u, v) for _, p in terms)
        lip_x_max = max(lip_x_max, lip_x)
        if not terms:
            vmin = 0.0
            continue
        nx = max(1, math.ceil(float(v - u) * resolution))
        if lip_x > 0:
            hx_max = max(hx_max, float(v - u) / nx)
        for j in range(nx):
            x = float(u) + float(v - u) * (j + 0.5) / nx
            z = np.zeros(ny, dtype=complex)
            for n, p in terms:
                z += poly_eval_float(p, x) * np.exp(2j * math.pi * n * ys)
            m2 = np.abs(z) ** 2
            vmin = min(vmin, float(m2.min()))
            vmax = max(vmax, float(m2.max()))
    # |Z|^2 is Lipschitz with constant 2 sup|Z| * (Lipschitz of Z); the
    # farthest point from a midpoint sample is half a grid step away.
    slack = 2 * sup_sum_max * (lip_y_max * 0.5 / ny + lip_x_max * hx_max / 2)
    return FrameBounds(max(0.0, vmin - slack), vmax + slack, ESTIMATED)


def poly_eval_float(p, x: float) -> complex:
    acc = 0j
    for c in reversed(p):
        acc = acc * x + c.to_complex()
    return acc


@dataclass
class ZakGrid:
    """Sampled Zak transform on midpoints of an nx-by-ny grid over the
    unit square; values[i, j] = Z g(xs[i], ys[j])."""

    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray

    def modulus_sq(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def zak_samples(g: PiecewiseFn, nx: int = 64, ny: int = 64) -> ZakGrid:
    """Midpoint samples of Z g; midpoints avoid breakpoint ambiguity."""
    if nx < 1 or ny < 1:
        raise ValueError("grid must have at least one cell per axis")
    xs = (np.arange(nx) + 0.5) / nx
    ys = (np.arange(ny) + 0.5) / ny
    values = np.zeros((nx, ny), dtype=complex)
    g0, g1 = g.support()
    phases = {
        n: np.exp(2j * math.pi * n * ys)
        for n in range(math.floor(float(g0)) - 1, math.ceil(float(g1)) + 1)
    }
    for i, x in enumerate(xs):
        row = np.zeros(ny, dtype=complex)
        for n, phase in phases.items():
            val = g.eval_float(x + n)
            if val != 0:
                row += val * phase
        values[i] = row
    return ZakGrid(xs=xs, ys=ys, values=values)
