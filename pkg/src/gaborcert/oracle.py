"""Brute-force Rayleigh quotients of the truncated Gabor quadratic form.

Everything here sums |<f, E_{mb} T_{na} g>|^2 directly over the lattice,
truncated at |m| <= m_max, with no use of the correlation identities; it
is the independent check against which the certified bounds are compared.
Truncation only discards nonnegative mass, so reported quotients are
lower-biased by at most the rigorous tail bound.

The search for extremal quotients uses real piecewise-constant test
functions on a uniform grid spanning several lattice periods (a single
period cannot witness the near-kernel of a non-frame system; directions
like long alternating indicator sums need room).  Sampling is seeded and
reproducible; refinement is coordinate ascent over cell values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import (
    GaborSystem,
    PiecewiseFn,
    Number,
    as_rat,
    crat,
    integral_exact,
    l2_norm_sq,
    sqrt_or_float,
    total_variation_bound,
)


def _cell_mod_integrals(p, u: float, v: float, s: np.ndarray) -> np.ndarray:
    """Vectorized integral of p(t) e^{st} over [u, v] for an array of
    purely imaginary s, via the antiderivative
    e^{st} sum_j (-1)^j p^(j)(t) / s^{j+1}."""
    derivs = [[c.to_complex() for c in p]]
    while len(derivs[-1]) > 1:
        derivs.append([c * (k + 1) for k, c in enumerate(derivs[-1][1:])])

    def horner(coeffs, t: float) -> complex:
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * t + c
        return acc

    series_u = np.zeros_like(s)
    series_v = np.zeros_like(s)
    spow = s.copy()
    sign = 1.0
    for d in derivs:
        series_u += sign * horner(d, u) / spow
        series_v += sign * horner(d, v) / spow
        spow = spow * s
        sign = -sign
    return np.exp(s * v) * series_v - np.exp(s * u) * series_u


def modulation_coefficients(prod: PiecewiseFn, b: Fraction, m_max: int) -> np.ndarray:
    """Array of integral prod(t) e^{-2 pi i m b t} dt for m = -m_max..m_max.

    The m = 0 entry is an exact rational integral; the others use the
    stable closed form (|e^{st}| = 1)."""
    ms = np.arange(-m_max, m_max + 1)
    out = np.zeros(len(ms), dtype=complex)
    if prod.is_zero:
        return out
    nz = ms != 0
    s = -2j * math.pi * float(b) * ms[nz]
    acc = np.zeros_like(s)
    for u, v, p in prod.cells():
        if not p:
            continue
        acc += _cell_mod_integrals(p, float(u), float(v), s)
    out[nz] = acc
    out[m_max] = integral_exact(prod).to_complex()
    return out


def _translate_range(f: PiecewiseFn, g: PiecewiseFn, a: Fraction) -> range:
    """Integers n for which supp(f) meets supp(g(. - n a))."""
    f0, f1 = f.support()
    g0, g1 = g.support()
    return range(math.floor((f0 - g1) / a), math.ceil((f1 - g0) / a) + 1)


def truncated_frame_energy(f: PiecewiseFn, sys: GaborSystem, m_max: int) -> float:
    """sum over n and |m| <= m_max of |<f, E_{mb} T_{na} g>|^2."""
    if m_max <= 0:
        raise ValueError("m_max must be positive")
    if f.is_zero:
        return 0.0
    total = 0.0
    for n in _translate_range(f, sys.window, sys.a):
        prod = f.multiply(sys.window.translate(n * sys.a).conj())
        if prod.is_zero:
            continue
        coeffs = modulation_coefficients(prod, sys.b, m_max)
        total += float(np.sum(np.abs(coeffs) ** 2))
    return total


def rayleigh(f: PiecewiseFn, sys: GaborSystem, m_max: int) -> float:
    """Truncated quadratic form divided by ||f||^2 (lower-biased by the
    modulation tail, never above the true quotient)."""
    norm_sq = l2_norm_sq(f)
    if norm_sq == 0:
        raise ValueError("rayleigh requires a nonzero test function")
    return truncated_frame_energy(f, sys, m_max) / float(norm_sq)


# ---------------------------------------------------------------------------
# Seeded extremal search on a piecewise-constant grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeGrid:
    """Uniform grid of indicator cells for test functions."""

    origin: Fraction
    cell_width: Fraction
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("need at least two grid cells")
        if self.cell_width <= 0:
            raise ValueError("cell width must be positive")

    def cell(self, i: int) -> tuple[Fraction, Fraction]:
        lo = self.origin + i * self.cell_width
        return lo, lo + self.cell_width

    def span(self) -> tuple[Fraction, Fraction]:
        return self.origin, self.origin + self.n_cells * self.cell_width

    def assemble(self, values: Sequence[float]) -> PiecewiseFn:
        """Piecewise-constant function with the given real cell values."""
        cells = []
        for i, val in enumerate(values):
            if val == 0:
                continue
            lo, hi = self.cell(i)
            cells.append((lo, hi, (crat(as_rat(val)),)))
        if not cells:
            raise ValueError("all cell values are zero")
        return PiecewiseFn.from_cells(cells)


def default_grid(sys: GaborSystem, n_cells: int = 32, cell_width=None) -> ProbeGrid:
    """Grid of n_cells cells of width a/2 (by default), centered near the
    window support so translated copies of the window stay in view."""
    w = as_rat(cell_width) if cell_width is not None else sys.a / 2
    g0, g1 = sys.window.support()
    mid = (g0 + g1) / 2
    k = math.floor(mid / w - Fraction(n_cells, 2) + Fraction(1, 2))
    return ProbeGrid(k * w, w, n_cells)


class _FormSampler:
    """Quadratic form of a system restricted to a ProbeGrid basis.

    Builds the (Hermitian, PSD) matrix Q with entries
    Q_ij = sum_{n, |m| <= M} <e_i, u_{nm}> conj(<e_j, u_{nm}>) once, after
    which every Rayleigh quotient on the grid is a cheap matrix quotient
    identical to calling ``rayleigh`` on the assembled function."""

    def __init__(self, sys: GaborSystem, grid: ProbeGrid, m_max: int):
        if m_max <= 0:
            raise ValueError("m_max must be positive")
        self.sys = sys
        self.grid = grid
        self.m_max = m_max
        n = grid.n_cells
        self.cell_norm = float(grid.cell_width)
        q = np.zeros((n, n), dtype=complex)
        g = sys.window
        a = sys.a
        span_lo, span_hi = grid.span()
        g0, g1 = g.support()
        n_lo = math.floor((span_lo - g1) / a)
        n_hi = math.ceil((span_hi - g0) / a)
        tau_rows = []
        self.n_range = (n_lo, n_hi)
        for shift in range(n_lo, n_hi + 1):
            gt = g.translate(shift * a).conj()
            cols = []
            mats = []
            taus = np.zeros(n)
            for i in range(n):
                lo, hi = grid.cell(i)
                prod = gt.restrict(lo, hi)
                if prod.is_zero:
                    continue
                cols.append(i)
                mats.append(modulation_coefficients(prod, sys.b, m_max))
                taus[i] = total_variation_bound(prod)
            if not cols:
                continue
            tau_rows.append(taus)
            c_sub = np.stack(mats, axis=1)  # (2M+1, k)
            idx = np.ix_(cols, cols)
            q[idx] += c_sub.conj().T @ c_sub
        self.q_real = np.ascontiguousarray(q.real)
        # Hermitian symmetrization guards against roundoff drift.
        self.q_real = (self.q_real + self.q_real.T) / 2.0
        self.tau = np.stack(tau_rows, axis=0) if tau_rows else np.zeros((0, n))
        self._tail_scale = (1.0 / (2.0 * math.pi * float(sys.b))) ** 2 * 2.0 / m_max

    def rho(self, x: np.ndarray) -> float:
        denom = self.cell_norm * float(x @ x)
        if denom == 0:
            raise ValueError("zero test vector")
        return float(x @ (self.q_real @ x)) / denom

    def tail_bound(self, x: np.ndarray) -> float:
        """Tail bound for the assembled function, normalized by ||f||^2.

        TV is subadditive, so TV(f conj(T g)) <= sum_i |x_i| tau_{n,i}."""
        if self.tau.size == 0:
            return 0.0
        per_n = self.tau @ np.abs(x)
        denom = self.cell_norm * float(x @ x)
        return float(np.sum(per_n**2)) * self._tail_scale / denom

    def coordinate_ascent(self, x0: np.ndarray, minimize: bool, sweeps: int = 60) -> tuple[np.ndarray, float]:
        """Cyclic exact line search in each coordinate.  The restriction of
        the quotient to one coordinate is a ratio of two quadratics, so the
        stationary values solve a scalar quadratic."""
        a_mat = self.q_real
        x = x0.astype(float).copy()
        nrm = math.sqrt(float(x @ x))
        if nrm == 0:
            raise ValueError("zero start vector")
        x /= nrm
        best = self.rho(x)
        sign = 1.0 if minimize else -1.0
        for _ in range(sweeps):
            improved = False
            for i in range(len(x)):
                qx = a_mat @ x
                num = float(x @ qx)
                aii = float(a_mat[i, i])
                bi = float(qx[i]) - aii * x[i]
                c0 = num - 2 * x[i] * bi - aii * x[i] * x[i]
                r = float(x @ x) - x[i] * x[i]
                if r <= 0:
                    continue
                cands = [0.0]
                if abs(bi) > 1e-300:
                    disc = (aii * r - c0) ** 2 + 4 * bi * bi * r
                    root = math.sqrt(max(disc, 0.0))
                    cands += [((aii * r - c0) + root) / (2 * bi), ((aii * r - c0) - root) / (2 * bi)]
                best_s, best_val = x[i], sign * self.rho(x)
                for s in cands:
                    val = (aii * s * s + 2 * bi * s + c0) / (self.cell_norm * (s * s + r))
                    if sign * val < best_val - 1e-15:
                        best_s, best_val = s, sign * val
                if best_s != x[i]:
                    x[i] = best_s
                    improved = True
            nrm = math.sqrt(float(x @ x))
            if nrm > 0:
                x /= nrm
            new = self.rho(x)
            if abs(new - best) < 1e-13 and not improved:
                break
            best = new
        return x, self.rho(x)


@dataclass(frozen=True)
class OracleReport:
    """Extremal truncated Rayleigh quotients found by seeded search."""

    rho_min: float
    rho_max: float
    samples: int
    m_max: int
    seed: int
    n_range: tuple
    grid: ProbeGrid
    trace: tuple = field(default_factory=tuple)


def empirical_bounds(
    sys: GaborSystem,
    budget: int = 200,
    seed: int = 42,
    m_max: int = 1024,
    n_cells: int = 32,
    cell_width=None,
    grid: ProbeGrid | None = None,
) -> OracleReport:
    """Sample ``budget`` random grid functions, then refine the best few by
    coordinate ascent (3 restarts per direction).  Deterministic for a
    fixed seed.  rho values are quotients of the m-truncated form, hence
    lower-biased; rho_max is a certified lower witness for the upper frame
    bound, while rho_min only upper-bounds the lower frame bound."""
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if grid is None:
        grid = default_grid(sys, n_cells=n_cells, cell_width=cell_width)
    sampler = _FormSampler(sys, grid, m_max)
    rng = np.random.default_rng(seed)
    xs = rng.standard_normal((budget, grid.n_cells))
    rhos = np.array([sampler.rho(x) for x in xs])
    order = np.argsort(rhos)
    trace = [("sample_min", float(rhos.min())), ("sample_max", float(rhos.max()))]
    rho_min = float(rhos.min())
    rho_max = float(rhos.max())
    restarts = 3
    for minimize in (True, False):
        picks = order[:restarts] if minimize else order[::-1][:restarts]
        for idx in picks:
            _, val = sampler.coordinate_ascent(xs[idx], minimize=minimize)
            trace.append(("ascent_min" if minimize else "ascent_max", val))
            rho_min = min(rho_min, val)
            rho_max = max(rho_max, val)
    return OracleReport(
        rho_min=rho_min,
        rho_max=rho_max,
        samples=budget,
        m_max=m_max,
        seed=seed,
        n_range=sampler.n_range,
        grid=grid,
        trace=tuple(trace),
    )


def rayleigh_samples(
    sys: GaborSystem,
    count: int,
    seed: int = 42,
    m_max: int = 512,
    grid: ProbeGrid | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(rho, tail_bound) arrays for ``count`` random grid functions; the
    true (untruncated) quotient of sample j lies in
    [rho[j], rho[j] + tail[j]]."""
    if grid is None:
        grid = default_grid(sys)
    sampler = _FormSampler(sys, grid, m_max)
    rng = np.random.default_rng(seed)
    rhos = np.empty(count)
    tails = np.empty(count)
    for j in range(count):
        x = rng.standard_normal(grid.n_cells)
        rhos[j] = sampler.rho(x)
        tails[j] = sampler.tail_bound(x)
    return rhos, tails


# ---------------------------------------------------------------------------
# Alternating translate sums
# ---------------------------------------------------------------------------


def alternating_sum(h: PiecewiseFn, n: int) -> PiecewiseFn:
    """sum_{k=0}^{2n-1} (-1)^k h(t - k), built exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    acc = PiecewiseFn.zero()
    for k in range(2 * n):
        term = h.translate(k)
        acc = acc + (term if k % 2 == 0 else -term)
    return acc


def alternating_norm_sq(h: PiecewiseFn, n: int) -> Fraction:
    """Exact squared L2 norm of the alternating translate sum."""
    return l2_norm_sq(alternating_sum(h, n))


def alternating_norm(h: PiecewiseFn, n: int) -> Number:
    """L2 norm of the alternating translate sum; exact Fraction when the
    squared norm is a perfect square."""
    return sqrt_or_float(alternating_norm_sq(h, n))
