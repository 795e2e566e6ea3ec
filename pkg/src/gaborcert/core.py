"""Exact piecewise-polynomial windows and the basic operators on them.

Windows are functions on the real line that vanish outside a bounded
interval and are polynomial (degree <= 2) on each cell of a rational
breakpoint grid.  Breakpoints and coefficients are stored as
``fractions.Fraction``, so translation, products, L2 norms and cell
extrema are computed without rounding.  Floating point enters only where
a quantity is genuinely transcendental: modulated integrals (complex
exponentials) and square roots of non-square rationals.

Values AT breakpoints are deliberately undefined; every operation is
understood almost everywhere, and refining a cell (splitting it at an
interior point) never changes any result.

Window constructors enforce degree <= 1.  Internal products (for
correlation functions and squared moduli) may carry degree-2 cells.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rat = Fraction
Number = Union[Fraction, float]

TWO_PI = 2.0 * math.pi


def as_rat(x) -> Fraction:
    """Coerce ints, strings like "3/4", floats and Fractions to Fraction.

    Floats convert exactly (binary expansion), so a caller passing 0.25
    gets 1/4 while 0.1 gets the full 52-bit fraction; prefer strings or
    Fractions for human-entered values.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r} as a rational")
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def sqrt_or_float(q: Number) -> Number:
    """Square root, exact when q is a rational with square numerator and
    denominator, float otherwise."""
    if isinstance(q, Fraction):
        if q < 0:
            raise ValueError("sqrt of negative value")
        rn = math.isqrt(q.numerator)
        rd = math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd)
        return math.sqrt(q)
    if q < 0:
        raise ValueError("sqrt of negative value")
    return math.sqrt(q)


@dataclass(frozen=True)
class CRat:
    """Complex scalar with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other: "CRat") -> "CRat":
        return CRat(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CRat") -> "CRat":
        return CRat(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "CRat":
        return CRat(-self.re, -self.im)

    def __mul__(self, other) -> "CRat":
        if isinstance(other, CRat):
            return CRat(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        k = as_rat(other)
        return CRat(self.re * k, self.im * k)

    __rmul__ = __mul__

    def conj(self) -> "CRat":
        return CRat(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, always an exact rational."""
        return self.re * self.re + self.im * self.im

    def modulus(self) -> Number:
        """|z|; exact Fraction when |z|^2 is a perfect square."""
        return sqrt_or_float(self.abs2())

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


CR_ZERO = CRat()
CR_ONE = CRat(Fraction(1))


def crat(re, im=0) -> CRat:
    return CRat(as_rat(re), as_rat(im))


# ---------------------------------------------------------------------------
# Polynomials: tuples of CRat coefficients, index = power of t.
# ---------------------------------------------------------------------------

Poly = tuple  # tuple[CRat, ...]


def poly_trim(p: Sequence[CRat]) -> Poly:
    coeffs = list(p)
    while coeffs and coeffs[-1].is_zero:
        coeffs.pop()
    return tuple(coeffs)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else CR_ZERO
        b = q[i] if i < len(q) else CR_ZERO
        out.append(a + b)
    return poly_trim(out)


def poly_neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [CR_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_scale(p: Poly, c: CRat) -> Poly:
    return poly_trim(tuple(c * a for a in p))


def poly_conj(p: Poly) -> Poly:
    return tuple(a.conj() for a in p)


def poly_shift(p: Poly, s: Fraction) -> Poly:
    """Coefficients of t -> p(t - s), expanded exactly via the binomial
    theorem."""
    if s == 0 or not p:
        return tuple(p)
    out = [CR_ZERO] * len(p)
    for k, c in enumerate(p):
        if c.is_zero:
            continue
        for j in range(k + 1):
            out[j] = out[j] + c * (math.comb(k, j) * (-s) ** (k - j))
    return poly_trim(out)


def poly_eval(p: Poly, t: Fraction) -> CRat:
    acc = CR_ZERO
    for c in reversed(p):
        acc = acc * t + c
    return acc


def poly_derivative(p: Poly) -> Poly:
    return poly_trim(tuple(c * Fraction(k) for k, c in enumerate(p) if k >= 1))


def poly_antiderivative(p: Poly) -> Poly:
    return (CR_ZERO,) + tuple(c * Fraction(1, k + 1) for k, c in enumerate(p))


def poly_integral(p: Poly, lo: Fraction, hi: Fraction) -> CRat:
    anti = poly_antiderivative(p)
    return poly_eval(anti, hi) - poly_eval(anti, lo)


def poly_is_real(p: Poly) -> bool:
    return all(c.is_real for c in p)


def _real_quadratic_range(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact min/max of a real polynomial of degree <= 2 on [lo, hi].

    Candidates are the endpoints and the interior vertex (rational, since
    the coefficients are rational)."""
    coeffs = [c.re for c in p] + [Fraction(0)] * (3 - len(p))
    c0, c1, c2 = coeffs[0], coeffs[1], coeffs[2]
    vals = [c0 + c1 * lo + c2 * lo * lo, c0 + c1 * hi + c2 * hi * hi]
    if c2 != 0:
        vertex = -c1 / (2 * c2)
        if lo < vertex < hi:
            vals.append(c0 + c1 * vertex + c2 * vertex * vertex)
    return min(vals), max(vals)


def _abs_from_range(m: Fraction, M: Fraction) -> tuple[Fraction, Fraction]:
    """Range of |x| given x ranging over [m, M]."""
    if m >= 0:
        return m, M
    if M <= 0:
        return -M, -m
    return Fraction(0), max(-m, M)


# ---------------------------------------------------------------------------
# Enclosures and frame-bound records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] guaranteed to contain a real quantity.

    Endpoints are Fractions when the computation stayed in exact
    arithmetic, floats when a square root or subdivision limit was
    involved.  An enclosure with ``lo == hi`` pins the value."""

    lo: Number
    hi: Number

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Number:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def exact(self) -> bool:
        """True when the enclosure pins its value in rational arithmetic."""
        return self.is_point and isinstance(self.lo, Fraction) and isinstance(self.hi, Fraction)


CERTIFIED = "certified"
ESTIMATED = "estimated"


@dataclass(frozen=True)
class FrameBounds:
    """A pair 0 <= lower <= upper with a provenance kind.

    kind "certified" means both numbers are sound bounds produced by
    exact arithmetic or directed rounding; "estimated" means a sampled
    quantity that may err in the unsafe direction."""

    lower: Number
    upper: Number
    kind: str = CERTIFIED

    def __post_init__(self):
        if self.kind not in (CERTIFIED, ESTIMATED):
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.lower < 0:
            raise ValueError("lower frame bound must be >= 0")
        if self.lower > self.upper:
            raise ValueError("frame bounds must satisfy lower <= upper")


# ---------------------------------------------------------------------------
# PiecewiseFn
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseFn:
    """Compactly supported piecewise polynomial with rational data.

    ``breakpoints`` is a strictly increasing tuple of Fractions and
    ``pieces[i]`` holds the coefficient tuple on the open cell
    (breakpoints[i], breakpoints[i+1]).  The function is zero outside
    [breakpoints[0], breakpoints[-1]].  The zero function is the empty
    tuple pair."""

    breakpoints: tuple = ()
    pieces: tuple = ()

    def __post_init__(self):
        if len(self.breakpoints) != (len(self.pieces) + 1 if self.pieces else 0):
            raise ValueError("breakpoint/piece count mismatch")
        for u, v in zip(self.breakpoints, self.breakpoints[1:]):
            if not u < v:
                raise ValueError("breakpoints must be strictly increasing")

    # -- construction -----------------------------------------------------

    @staticmethod
    def _make(bps: Sequence[Fraction], pieces: Sequence[Poly]) -> "PiecewiseFn":
        """Normalize: trim zero cells at both ends, merge adjacent cells
        carrying the identical polynomial."""
        bps = list(bps)
        pieces = [poly_trim(p) for p in pieces]
        while pieces and not pieces[0]:
            pieces.pop(0)
            bps.pop(0)
        while pieces and not pieces[-1]:
            pieces.pop()
            bps.pop()
        if not pieces:
            return PiecewiseFn((), ())
        m_bps = [bps[0]]
        m_pieces: list[Poly] = []
        for i, p in enumerate(pieces):
            if m_pieces and m_pieces[-1] == p:
                m_bps[-1] = bps[i + 1]
            else:
                m_pieces.append(p)
                m_bps.append(bps[i + 1])
        return PiecewiseFn(tuple(m_bps), tuple(m_pieces))

    @staticmethod
    def zero() -> "PiecewiseFn":
        return PiecewiseFn((), ())

    @staticmethod
    def from_cells(cells: Iterable[tuple]) -> "PiecewiseFn":
        """Build from (lo, hi, poly) triples.

        Cells must not overlap; gaps are filled with zero.  ``poly`` is a
        sequence of CRat coefficients."""
        items = sorted(((as_rat(lo), as_rat(hi), tuple(p)) for lo, hi, p in cells), key=lambda c: c[0])
        bps: list[Fraction] = []
        pieces: list[Poly] = []
        for lo, hi, p in items:
            if lo >= hi:
                raise ValueError("cell must have positive length")
            if bps and lo < bps[-1]:
                raise ValueError("cells overlap")
            if not bps:
                bps.append(lo)
            elif lo > bps[-1]:
                pieces.append(())
                bps.append(lo)
            pieces.append(tuple(p))
            bps.append(hi)
        return PiecewiseFn._make(bps, pieces)

    @staticmethod
    def indicator(lo, hi, height=1) -> "PiecewiseFn":
        """height * characteristic function of [lo, hi)."""
        lo, hi = as_rat(lo), as_rat(hi)
        if lo >= hi:
            raise ValueError("indicator interval must have positive length")
        h = height if isinstance(height, CRat) else crat(height)
        return PiecewiseFn._make((lo, hi), ((h,),))

    @staticmethod
    def linear_on(lo, hi, c0, c1) -> "PiecewiseFn":
        """The function c0 + c1*t on [lo, hi), zero elsewhere."""
        lo, hi = as_rat(lo), as_rat(hi)
        a0 = c0 if isinstance(c0, CRat) else crat(c0)
        a1 = c1 if isinstance(c1, CRat) else crat(c1)
        return PiecewiseFn._make((lo, hi), ((a0, a1),))

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    def support(self) -> tuple[Fraction, Fraction] | None:
        """Smallest closed interval outside which the function vanishes,
        or None for the zero function."""
        if self.is_zero:
            return None
        return self.breakpoints[0], self.breakpoints[-1]

    def degree(self) -> int:
        return max((len(p) - 1 for p in self.pieces if p), default=-1)

    def cells(self) -> Iterator[tuple[Fraction, Fraction, Poly]]:
        for i, p in enumerate(self.pieces):
            yield self.breakpoints[i], self.breakpoints[i + 1], p

    def piece_at(self, t: Fraction) -> Poly:
        """Polynomial on the cell containing t; at a breakpoint the cell to
        the right is used (a.e. semantics, the choice is immaterial)."""
        if self.is_zero or t < self.breakpoints[0] or t >= self.breakpoints[-1]:
            return ()
        i = bisect_right(self.breakpoints, t) - 1
        return self.pieces[i]

    def eval_exact(self, t) -> CRat:
        return poly_eval(self.piece_at(as_rat(t)), as_rat(t))

    def eval_float(self, t: float) -> complex:
        return self.eval_exact(as_rat(t)).to_complex()

    def is_real(self) -> bool:
        return all(poly_is_real(p) for p in self.pieces)

    # -- algebra -----------------------------------------------------------

    def _merged_grid(self, other: "PiecewiseFn") -> list[Fraction]:
        pts = set(self.breakpoints) | set(other.breakpoints)
        return sorted(pts)

    def _poly_on(self, u: Fraction) -> Poly:
        """Piece on the cell whose left endpoint is u (u taken from a grid
        refining this function's breakpoints)."""
        return self.piece_at(u)

    def __add__(self, other: "PiecewiseFn") -> "PiecewiseFn":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        grid = self._merged_grid(other)
        pieces = [poly_add(self._poly_on(u), other._poly_on(u)) for u in grid[:-1]]
        return PiecewiseFn._make(grid, pieces)

    def __sub__(self, other: "PiecewiseFn") -> "PiecewiseFn":
        return self + (-other)

    def __neg__(self) -> "PiecewiseFn":
        return PiecewiseFn(self.breakpoints, tuple(poly_neg(p) for p in self.pieces))

    def scale(self, c) -> "PiecewiseFn":
        cc = c if isinstance(c, CRat) else crat(c)
        if cc.is_zero:
            return PiecewiseFn.zero()
        return PiecewiseFn(self.breakpoints, tuple(poly_scale(p, cc) for p in self.pieces))

    def multiply(self, other: "PiecewiseFn") -> "PiecewiseFn":
        if self.is_zero or other.is_zero:
            return PiecewiseFn.zero()
        lo = max(self.breakpoints[0], other.breakpoints[0])
        hi = min(self.breakpoints[-1], other.breakpoints[-1])
        if lo >= hi:
            return PiecewiseFn.zero()
        grid = [t for t in self._merged_grid(other) if lo <= t <= hi]
        pieces = [poly_mul(self._poly_on(u), other._poly_on(u)) for u in grid[:-1]]
        return PiecewiseFn._make(grid, pieces)

    def conj(self) -> "PiecewiseFn":
        return PiecewiseFn(self.breakpoints, tuple(poly_conj(p) for p in self.pieces))

    def abs_sq(self) -> "PiecewiseFn":
        """|f|^2 as a real piecewise polynomial (degree doubles)."""
        return self.multiply(self.conj())

    def translate(self, s) -> "PiecewiseFn":
        s = as_rat(s)
        if self.is_zero or s == 0:
            return self
        return PiecewiseFn(
            tuple(b + s for b in self.breakpoints),
            tuple(poly_shift(p, s) for p in self.pieces),
        )

    def restrict(self, lo, hi) -> "PiecewiseFn":
        """Multiply by the indicator of [lo, hi]."""
        lo, hi = as_rat(lo), as_rat(hi)
        if lo >= hi or self.is_zero:
            return PiecewiseFn.zero()
        clo = max(lo, self.breakpoints[0])
        chi = min(hi, self.breakpoints[-1])
        if clo >= chi:
            return PiecewiseFn.zero()
        grid = sorted({clo, chi} | {b for b in self.breakpoints if clo < b < chi})
        pieces = [self._poly_on(u) for u in grid[:-1]]
        return PiecewiseFn._make(grid, pieces)

    def abs_real(self) -> "PiecewiseFn":
        """|f| for a real-valued function of degree <= 1.

        Cells are split at sign changes, so the result is again piecewise
        linear and exact.  Raises for complex values or degree >= 2 (the
        absolute value would leave the polynomial class)."""
        if self.is_zero:
            return self
        if not self.is_real():
            raise ValueError("abs_real requires a real-valued function")
        if self.degree() > 1:
            raise ValueError("abs_real requires degree <= 1")
        bps: list[Fraction] = []
        pieces: list[Poly] = []
        for u, v, p in self.cells():
            cuts = [u, v]
            if len(p) == 2 and p[1].re != 0:
                root = -p[0].re / p[1].re
                if u < root < v:
                    cuts = [u, root, v]
            for w0, w1 in zip(cuts, cuts[1:]):
                mid = (w0 + w1) / 2
                val = poly_eval(p, mid).re
                q = p if val >= 0 else poly_neg(p)
                if not bps:
                    bps = [w0]
                elif w0 > bps[-1]:
                    pieces.append(())
                    bps.append(w0)
                pieces.append(q)
                bps.append(w1)
        return PiecewiseFn._make(bps, pieces)

    def refine(self, extra_points: Iterable) -> "PiecewiseFn":
        """Insert breakpoints without changing the function (testing aid)."""
        if self.is_zero:
            return self
        lo, hi = self.breakpoints[0], self.breakpoints[-1]
        pts = sorted(set(self.breakpoints) | {as_rat(t) for t in extra_points if lo < as_rat(t) < hi})
        pieces = [self._poly_on(u) for u in pts[:-1]]
        return PiecewiseFn(tuple(pts), tuple(pieces))

    def equal_ae(self, other: "PiecewiseFn") -> bool:
        """Equality almost everywhere, checked cell by cell on the merged
        grid with exact coefficient comparison."""
        diff = self - other
        return diff.is_zero


# ---------------------------------------------------------------------------
# Gabor systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaborSystem:
    """Window g with time step a and frequency step b, generating the
    family e^{2 pi i m b t} g(t - n a) over integer m, n."""

    window: PiecewiseFn
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_rat(self.a))
        object.__setattr__(self, "b", as_rat(self.b))
        if self.a <= 0 or self.b <= 0:
            raise ValueError("lattice steps a and b must be positive")
        if self.window.is_zero:
            raise ValueError("window must be nonzero")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def translate(f: PiecewiseFn, s) -> PiecewiseFn:
    """(T_s f)(t) = f(t - s)."""
    return f.translate(s)


def l2_norm_sq(f: PiecewiseFn) -> Fraction:
    """Exact squared L2 norm: integral of |f|^2."""
    total = Fraction(0)
    for u, v, p in f.abs_sq().cells():
        total += poly_integral(p, u, v).re
    return total


def integral_exact(f: PiecewiseFn) -> CRat:
    """Exact integral of f over the line."""
    acc = CR_ZERO
    for u, v, p in f.cells():
        acc = acc + poly_integral(p, u, v)
    return acc


def inner_product_modulated(f: PiecewiseFn, g: PiecewiseFn, m: int, b, n: int, a) -> complex:
    """<f, E_{mb} T_{na} g> = integral of f(t) conj(g(t - n a)) e^{-2 pi i m b t}.

    For m = 0 this is a rational polynomial integral evaluated exactly and
    returned as a complex float.  For m != 0 the per-cell antiderivative of
    p(t) e^{st} is used, accurate to machine epsilon per cell."""
    a, b = as_rat(a), as_rat(b)
    prod = f.multiply(g.translate(n * a).conj())
    if prod.is_zero:
        return 0j
    if m == 0:
        return integral_exact(prod).to_complex()
    s = -1j * TWO_PI * m * float(b)
    total = 0j
    for u, v, p in prod.cells():
        total += _poly_exp_integral(p, float(u), float(v), s)
    return total


def _poly_exp_integral(p: Poly, u: float, v: float, s: complex) -> complex:
    """Integral of p(t) e^{st} over [u, v] for purely imaginary s != 0,
    via the closed-form antiderivative e^{st} sum_j (-1)^j p^(j)(t)/s^{j+1}.

    |e^{st}| = 1 for imaginary s, so the evaluation is stable."""
    coeffs = [c.to_complex() for c in p]

    def series_at(t: float) -> complex:
        acc = 0j
        deriv = coeffs
        sign = 1.0
        spow = s
        while deriv:
            val = 0j
            for c in reversed(deriv):
                val = val * t + c
            acc += sign * val / spow
            deriv = [c * (k + 1) for k, c in enumerate(deriv[1:])]
            sign = -sign
            spow *= s
        return acc

    return series_at(v) * _cis(s.imag * v) - series_at(u) * _cis(s.imag * u)


def _cis(x: float) -> complex:
    return complex(math.cos(x), math.sin(x))


def _subcells(f: PiecewiseFn, lo: Fraction, hi: Fraction) -> Iterator[tuple[Fraction, Fraction, Poly]]:
    """Cells of f clipped to [lo, hi], with explicit zero cells for the
    uncovered parts, so the union covers [lo, hi] exactly."""
    cursor = lo
    for u, v, p in f.cells():
        a0, b0 = max(u, lo), min(v, hi)
        if a0 >= b0:
            continue
        if a0 > cursor:
            yield cursor, a0, ()
        yield a0, b0, p
        cursor = b0
    if cursor < hi:
        yield cursor, hi, ()


def ess_range(f: PiecewiseFn, interval: tuple, mode: str = "real") -> Enclosure:
    """Enclosure of the essential range {ess inf, ess sup} on an interval.

    mode "real" bounds the real part; mode "abs" bounds |f|.  For pieces
    of degree <= 2 the real-part extrema are exact rationals.  For |f| the
    extrema come from the exact range of |f|^2 when the piece is degree
    <= 1 or real, so piecewise-constant input yields a point enclosure."""
    lo, hi = as_rat(interval[0]), as_rat(interval[1])
    if lo >= hi:
        raise ValueError("interval must have positive length")
    if mode not in ("real", "abs"):
        raise ValueError(f"unknown ess_range mode {mode!r}")
    los: list[Number] = []
    his: list[Number] = []
    for u, v, p in _subcells(f, lo, hi):
        if mode == "real":
            rp = poly_trim(tuple(CRat(c.re) for c in p))
            if len(rp) > 3:
                raise ValueError("ess_range supports degree <= 2")
            m, M = _real_quadratic_range(rp, u, v) if rp else (Fraction(0), Fraction(0))
            los.append(m)
            his.append(M)
        else:
            m, M = _abs_cell_range(p, u, v)
            los.append(m)
            his.append(M)
    return Enclosure(min(los), max(his))


def _abs_cell_range(p: Poly, u: Fraction, v: Fraction) -> tuple[Number, Number]:
    """Range of |p| on the cell [u, v].

    Exact (up to a final square root) for real pieces of degree <= 2 and
    complex pieces of degree <= 1, via the closed-form range of |p|^2; a
    rectangular over-estimate from the real/imaginary ranges otherwise."""
    if not p:
        return Fraction(0), Fraction(0)
    if poly_is_real(p):
        if len(p) > 3:
            raise ValueError("abs range supports degree <= 2")
        m, M = _real_quadratic_range(p, u, v)
        am, aM = _abs_from_range(m, M)
        return am, aM
    if len(p) <= 2:
        sq = poly_mul(p, poly_conj(p))  # real, degree <= 2
        m2, M2 = _real_quadratic_range(sq, u, v)
        return sqrt_or_float(max(m2, Fraction(0))), sqrt_or_float(M2)
    # complex degree 2: box bound from the coordinate ranges
    re_m, re_M = _real_quadratic_range(poly_trim(tuple(CRat(c.re) for c in p)) or (CR_ZERO,), u, v)
    im_m, im_M = _real_quadratic_range(poly_trim(tuple(CRat(c.im) for c in p)) or (CR_ZERO,), u, v)
    dlo_r, dhi_r = _abs_from_range(re_m, re_M)
    dlo_i, dhi_i = _abs_from_range(im_m, im_M)
    return sqrt_or_float(dlo_r * dlo_r + dlo_i * dlo_i), sqrt_or_float(dhi_r * dhi_r + dhi_i * dhi_i)


def periodize(f: PiecewiseFn, period) -> PiecewiseFn:
    """Representative on [0, period) of sum_n f(t - n*period).

    The input must be compactly supported, so the sum is finite on every
    cell; the output is exact."""
    period = as_rat(period)
    if period <= 0:
        raise ValueError("period must be positive")
    if f.is_zero:
        return f
    lo, hi = f.support()
    n_min = math.floor(lo / period)
    n_max = math.ceil(hi / period)
    acc = PiecewiseFn.zero()
    for n in range(n_min, n_max + 1):
        piece = f.translate(-n * period).restrict(0, period)
        acc = acc + piece
    return acc


def unfold(rep: PiecewiseFn, period, lo, hi) -> PiecewiseFn:
    """Extend a [0, period) representative periodically onto [lo, hi]."""
    period, lo, hi = as_rat(period), as_rat(lo), as_rat(hi)
    if lo >= hi:
        return PiecewiseFn.zero()
    j0 = math.floor(lo / period)
    j1 = math.ceil(hi / period)
    acc = PiecewiseFn.zero()
    for j in range(j0, j1 + 1):
        acc = acc + rep.translate(j * period).restrict(lo, hi)
    return acc


def total_variation_bound(f: PiecewiseFn) -> float:
    """Upper bound on the total variation of f (including the jumps at
    breakpoints and at the support boundary).

    Used for tail estimates of modulated integrals: |integral of
    f e^{-i w t}| <= TV(f)/|w|."""
    if f.is_zero:
        return 0.0
    tv = 0.0
    prev_limit = 0j
    for u, v, p in f.cells():
        left = poly_eval(p, u).to_complex() if p else 0j
        tv += abs(left - prev_limit)
        if p:
            d = poly_derivative(p)
            if len(d) > 2:
                raise ValueError("total_variation_bound supports degree <= 2")
            if d:
                # |p'| is convex on the cell (modulus of an affine function),
                # so its sup sits at an endpoint.
                sup_d = max(abs(poly_eval(d, u).to_complex()), abs(poly_eval(d, v).to_complex()))
                tv += float(v - u) * sup_d
            prev_limit = poly_eval(p, v).to_complex()
        else:
            prev_limit = 0j
    tv += abs(prev_limit)
    return tv
