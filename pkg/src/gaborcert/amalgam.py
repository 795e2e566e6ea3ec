"""Wiener amalgam norm over a lattice of cells.

For step a > 0 the norm is  sum_n sup{|g(t)| : t in [na, (n+1)a)}.
Windows here are compactly supported, so the sum is finite.  Cell suprema
are exact rationals whenever the pieces are real or constant; the record
carries an ``exact`` flag saying whether the whole sum stayed rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Number, PiecewiseFn, _abs_cell_range, _subcells, as_rat


@dataclass(frozen=True)
class AmalgamNorm:
    """Value of the amalgam norm at step a.  ``exact`` is True when every
    cell supremum was computed in rational arithmetic."""

    value: Number
    a: Fraction
    exact: bool


def amalgam_norm(g: PiecewiseFn, a) -> AmalgamNorm:
    """sum_n sup_{[na,(n+1)a)} |g|, cell suprema taken in closed form."""
    a = as_rat(a)
    if a <= 0:
        raise ValueError("amalgam step a must be positive")
    if g.is_zero:
        return AmalgamNorm(Fraction(0), a, True)
    lo, hi = g.support()
    n_min = math.floor(lo / a)
    n_max = math.ceil(hi / a)
    total: Number = Fraction(0)
    exact = True
    for n in range(n_min, n_max):
        cell_lo, cell_hi = n * a, (n + 1) * a
        sup: Number = Fraction(0)
        for u, v, p in _subcells(g, cell_lo, cell_hi):
            _, cell_sup = _abs_cell_range(p, u, v)
            if cell_sup > sup:
                sup = cell_sup
        if not isinstance(sup, Fraction):
            exact = False
        total = total + sup
    return AmalgamNorm(total, a, exact)


def amalgam_tail(g: PiecewiseFn, a, n_cells: int) -> AmalgamNorm:
    """Amalgam norm of the part of g outside [-a*N, a*N].

    This is the quantity that must fall below a threshold before a
    truncation of the window can inherit a frame certificate.  N = 0
    gives the full norm (the kept interval is empty)."""
    a = as_rat(a)
    if n_cells < 0:
        raise ValueError("tail index N must be >= 0")
    if n_cells == 0:
        return amalgam_norm(g, a)
    kept = g.restrict(-a * n_cells, a * n_cells)
    return amalgam_norm(g - kept, a)
