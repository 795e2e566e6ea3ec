"""Builtin window catalog and the JSON wire format for windows.

A window serializes as::

    {"breakpoints": ["0", "1", "2"],
     "pieces": [{"c0re": "1", "c0im": "0", "c1re": "0", "c1im": "0"}, ...]}

with every rational written as a "p/q" string so round trips are exact.
Named builtins expand to the same form; parameters are rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .core import CRat, PiecewiseFn, as_rat, crat


def rat_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def encode_number(x):
    """Fractions become "p/q" strings, floats and ints pass through."""
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    raise TypeError(f"cannot encode {type(x).__name__} in a report")


def decode_number(x):
    if isinstance(x, str):
        return Fraction(x)
    return x


def window_to_json(f: PiecewiseFn) -> dict:
    """Serialize a window of degree <= 1.  Higher-degree internal objects
    (correlation terms) have no wire format and raise."""
    if f.degree() > 1:
        raise ValueError("only windows of degree <= 1 serialize")
    pieces = []
    for p in f.pieces:
        c0 = p[0] if len(p) > 0 else CRat()
        c1 = p[1] if len(p) > 1 else CRat()
        pieces.append(
            {
                "c0re": rat_str(c0.re),
                "c0im": rat_str(c0.im),
                "c1re": rat_str(c1.re),
                "c1im": rat_str(c1.im),
            }
        )
    return {"breakpoints": [rat_str(b) for b in f.breakpoints], "pieces": pieces}


def window_from_json(obj: dict) -> PiecewiseFn:
    """Parse the wire format; also accepts {"builtin": name, "params": {...}}."""
    if "builtin" in obj:
        params = {}
        for key, raw in obj.get("params", {}).items():
            value = as_rat(raw)
            # integral parameters (truncation levels, counts) stay ints
            params[key] = int(value) if value.denominator == 1 else value
        return builtin_window(obj["builtin"], **params)
    bps = [as_rat(b) for b in obj["breakpoints"]]
    pieces = []
    for p in obj["pieces"]:
        c0 = crat(as_rat(p.get("c0re", 0)), as_rat(p.get("c0im", 0)))
        c1 = crat(as_rat(p.get("c1re", 0)), as_rat(p.get("c1im", 0)))
        pieces.append((c0, c1))
    if len(bps) != len(pieces) + 1:
        raise ValueError("window JSON: need exactly one more breakpoint than pieces")
    return PiecewiseFn._make(tuple(bps), tuple(pieces))


# ---------------------------------------------------------------------------
# Builtins
# ---------------------------------------------------------------------------


def _w_indicator() -> PiecewiseFn:
    return PiecewiseFn.indicator(0, 1)


def _w_double_indicator() -> PiecewiseFn:
    return PiecewiseFn.indicator(0, 2)


def _w_box(lo=Fraction(0), hi=Fraction(1), height=Fraction(1)) -> PiecewiseFn:
    return PiecewiseFn.indicator(lo, hi, height)


def _w_stepped_indicator(eps=Fraction(1, 4)) -> PiecewiseFn:
    """1 on [0,1), 1-eps on [1,2): a two-step window whose lower frame
    bound at the unit lattice is exactly eps^2."""
    eps = as_rat(eps)
    if not 0 < eps < 1:
        raise ValueError("stepped_indicator needs eps in (0, 1)")
    return PiecewiseFn.indicator(0, 1) + PiecewiseFn.indicator(1, 2, 1 - eps)


def _w_scaled_double_indicator(scale=Fraction(1, 2)) -> PiecewiseFn:
    scale = as_rat(scale)
    if scale == 0:
        raise ValueError("scaled_double_indicator needs a nonzero scale")
    return PiecewiseFn.indicator(0, 2, scale)


def _w_shrunk_indicator(eps=Fraction(1, 4)) -> PiecewiseFn:
    """Indicator of [0, 1-eps): leaves a gap of measure eps per unit period."""
    eps = as_rat(eps)
    if not 0 < eps < 1:
        raise ValueError("shrunk_indicator needs eps in (0, 1)")
    return PiecewiseFn.indicator(0, 1 - eps)


def _w_hat() -> PiecewiseFn:
    """Continuous tent: t on [0,1], 2-t on [1,2]."""
    return PiecewiseFn.from_cells(
        [(0, 1, (crat(0), crat(1))), (1, 2, (crat(2), crat(-1)))]
    )


def cantor_like_intervals(n_max: int) -> list[tuple[Fraction, Fraction]]:
    """Dyadic interval family on [0, 2) whose indicator, translated by the
    integers, tiles [0, 1) up to a tail of measure 2*4^{-(n_max+1)}.

    The family is the union of [0, 15/16), the bands
    [1 - 4^{-n}, 1 - 4^{-n}/2) for n = 2..n_max, and the bands
    [2 - 4^{-n}/2, 2 - 4^{-n}/4) for n = 2..n_max."""
    if n_max < 2:
        raise ValueError("cantor_like needs n_max >= 2")
    out = [(Fraction(0), Fraction(15, 16))]
    for n in range(2, n_max + 1):
        q = Fraction(1, 4**n)
        out.append((1 - q, 1 - q / 2))
    for n in range(2, n_max + 1):
        q = Fraction(1, 4**n)
        out.append((2 - q / 2, 2 - q / 4))
    return out


def _w_cantor_like(n_max=Fraction(6)) -> PiecewiseFn:
    n = int(n_max)
    if n != n_max:
        raise ValueError("n_max must be an integer")
    cells = [(lo, hi, (crat(1),)) for lo, hi in cantor_like_intervals(n)]
    return PiecewiseFn.from_cells(cells)


BUILTIN_WINDOWS = {
    "indicator": _w_indicator,
    "double_indicator": _w_double_indicator,
    "box": _w_box,
    "stepped_indicator": _w_stepped_indicator,
    "scaled_double_indicator": _w_scaled_double_indicator,
    "shrunk_indicator": _w_shrunk_indicator,
    "hat": _w_hat,
    "cantor_like": _w_cantor_like,
}


def builtin_window(name: str, **params) -> PiecewiseFn:
    try:
        factory = BUILTIN_WINDOWS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_WINDOWS))
        raise ValueError(f"unknown builtin window {name!r} (known: {known})") from None
    return factory(**params)
