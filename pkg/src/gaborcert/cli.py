"""Command-line front end.

Subcommands map one-to-one onto the analysis modules: analyze, perturb,
shift, truncate, zak, oracle, counterexamples, identity-check.  Reports
are JSON on stdout (rationals as "p/q" strings so nothing is corrupted
by float round-trips), diagnostics go to stderr, and optional CSV grids
feed external plotters.

Exit codes are a stable contract:
    0  analysis passed / certificate holds
    1  usage or configuration error
    2  a hypothesis check failed
    3  the verdict was inconclusive (enclosure too wide to decide)

Options resolve in three layers: built-in defaults, then a TOML config
file (--config or the GABORCERT_CONFIG environment variable), then
command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import is_dataclass, fields as dataclass_fields
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .amalgam import amalgam_norm
from .core import Enclosure, FrameBounds, GaborSystem, PiecewiseFn
from .oracle import empirical_bounds, rayleigh_samples
from .perturb import (
    Certificate,
    certify_amalgam,
    certify_correlation,
    certify_shift,
    certify_truncation,
    certify_unit_lattice,
    divergence_diagnostic,
    shift_bounds_at,
)
from .suite import ALL_SCENARIOS, run_scenarios
from .walnut import correlations, identity_check, sup_norms, walnut_bounds
from .windows import (
    builtin_window,
    decode_number,
    encode_number,
    window_from_json,
    window_to_json,
)
from .zak import zak_frame_bounds, zak_samples

ENV_CONFIG = "GABORCERT_CONFIG"
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
EXIT_INCONCLUSIVE = 3

DEFAULTS = {
    "a": Fraction(1),
    "b": Fraction(1),
    "m_max": 1024,
    "budget": 200,
    "seed": 42,
    "tolerance": 1e-9,
}


class UsageError(Exception):
    """Configuration or input problem, reported on stderr with exit 1."""


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage, which collides with the
    hypothesis-failed code; route usage errors to exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonify(obj):
    """Recursively convert report objects to JSON-safe structures.
    Fractions become 'p/q' strings; dataclasses become field dicts."""
    if isinstance(obj, Fraction):
        return encode_number(obj)
    if isinstance(obj, PiecewiseFn):
        return window_to_json(obj)
    if isinstance(obj, Enclosure):
        return {"lo": _jsonify(obj.lo), "hi": _jsonify(obj.hi), "exact": obj.exact}
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonify(getattr(obj, f.name)) for f in dataclass_fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy scalars and arrays
        return _jsonify(obj.tolist())
    return obj


def _decode_param(value: str):
    number = decode_number(value)
    if isinstance(number, Fraction) and number.denominator == 1:
        return int(number)
    return number


def _load_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"config file {path}: {exc}")


def _window_from_spec(spec, params: dict) -> PiecewiseFn:
    """Window from a builtin name, inline JSON, an @file reference, or a
    config-table dict."""
    if isinstance(spec, dict):
        return window_from_json(spec)
    if not isinstance(spec, str) or not spec:
        raise UsageError("window specification must be a name, JSON, or @file")
    if spec.startswith("@"):
        try:
            with open(spec[1:], "r", encoding="utf-8") as fh:
                return window_from_json(json.load(fh))
        except FileNotFoundError:
            raise UsageError(f"window file not found: {spec[1:]}")
        except (json.JSONDecodeError, ValueError) as exc:
            raise UsageError(f"window file {spec[1:]}: {exc}")
    if spec.lstrip().startswith("{"):
        try:
            return window_from_json(json.loads(spec))
        except (json.JSONDecodeError, ValueError) as exc:
            raise UsageError(f"inline window JSON: {exc}")
    try:
        return builtin_window(spec, **params)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"window {spec!r}: {exc}")


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs or ():
        if "=" not in pair:
            raise UsageError(f"--param expects key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        try:
            params[key.strip()] = _decode_param(raw.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--param {key}: {exc}")
    return params


class Settings:
    """Resolved run configuration: defaults, then config file, then flags."""

    def __init__(self, args):
        config = {}
        path = args.config or os.environ.get(ENV_CONFIG)
        if path:
            config = _load_toml(path)
        options = config.get("options", {})

        def pick(flag_value, key, default, convert=None):
            if flag_value is not None:
                return flag_value
            if key in options:
                raw = options[key]
                return convert(raw) if convert else raw
            return default

        self.a = pick(_opt_rat(args, "a"), "a", DEFAULTS["a"], decode_number)
        self.b = pick(_opt_rat(args, "b"), "b", DEFAULTS["b"], decode_number)
        self.m_max = pick(getattr(args, "m_max", None), "m_max", DEFAULTS["m_max"], int)
        self.budget = pick(getattr(args, "budget", None), "budget", DEFAULTS["budget"], int)
        self.seed = pick(getattr(args, "seed", None), "seed", DEFAULTS["seed"], int)
        self.tolerance = pick(
            getattr(args, "tolerance", None), "tolerance", DEFAULTS["tolerance"], float
        )
        if self.a <= 0 or self.b <= 0:
            raise UsageError("lattice steps a and b must be positive")
        if self.m_max < 1 or self.budget < 1:
            raise UsageError("m_max and budget must be positive")

        self._window_table = config.get("window")
        self._args = args

    def window(self, flag="window", params_flag="params", required=True) -> PiecewiseFn | None:
        spec = getattr(self._args, flag, None)
        params = _parse_params(getattr(self._args, params_flag, None))
        if spec is None:
            if self._window_table is not None and flag == "window":
                table = dict(self._window_table)
                if "builtin" in table:
                    raw = {
                        k: _decode_param(str(v)) for k, v in table.get("params", {}).items()
                    }
                    return _window_from_spec(table["builtin"], raw)
                return _window_from_spec(table, {})
            if required:
                raise UsageError(f"--{flag.replace('_', '-')} is required")
            return None
        return _window_from_spec(spec, params)

    def system(self) -> GaborSystem:
        return GaborSystem(self.window(), self.a, self.b)


def _opt_rat(args, name):
    raw = getattr(args, name, None)
    if raw is None:
        return None
    try:
        return decode_number(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--{name}: {exc}")


def _frame_bounds_for(settings, args, sys_) -> tuple:
    """Caller-supplied (A, B) from flags, else certified walnut bounds.
    Returns (A, B, source)."""
    lower = _opt_rat(args, "lower")
    upper = _opt_rat(args, "upper")
    if (lower is None) != (upper is None):
        raise UsageError("--lower and --upper must be given together")
    if lower is not None:
        if not 0 < lower <= upper:
            raise UsageError("need 0 < lower <= upper")
        return lower, upper, "user"
    wb = walnut_bounds(sys_, tol=settings.tolerance)
    if wb.lower == 0:
        raise UsageError(
            "the certified lower bound of the unperturbed system is 0; "
            "supply known bounds with --lower/--upper"
        )
    return wb.lower, wb.upper, "walnut"


def _emit(report: dict, args) -> None:
    text = json.dumps(_jsonify(report), indent=2)
    output = getattr(args, "output", None)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"report written to {output}", file=sys.stderr)
    else:
        print(text)


def _write_csv(path: str, header: list, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"csv written to {path}", file=sys.stderr)


def _certificate_exit(cert: Certificate) -> int:
    if cert.passed:
        return EXIT_OK
    return EXIT_FAILED if cert.conclusive else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(settings: Settings, args) -> int:
    sys_ = settings.system()
    norm = amalgam_norm(sys_.window, sys_.a)
    series = correlations(sys_)
    norms = sup_norms(series, tol=settings.tolerance)
    wb = walnut_bounds(sys_, tol=settings.tolerance)
    zb = zak_frame_bounds(sys_) if sys_.a == 1 and sys_.b == 1 else None

    rhos, tails = rayleigh_samples(
        sys_, count=settings.budget, seed=settings.seed, m_max=settings.m_max
    )
    report_extremes = empirical_bounds(
        sys_,
        budget=settings.budget,
        seed=settings.seed,
        m_max=settings.m_max,
    )

    lower, upper = wb.lower, wb.upper
    if zb is not None and zb.kind == "certified":
        lower, upper = max(lower, zb.lower), min(upper, zb.upper)
    tol = settings.tolerance
    violations = sum(
        1
        for rho, tail in zip(rhos, tails)
        if rho < float(lower) - tol - tail or rho > float(upper) + tol
    )
    sandwich = {
        "holds": violations == 0,
        "violations": violations,
        "samples": len(rhos),
        "certified_lower": lower,
        "certified_upper": upper,
    }
    if lower == 0:
        sandwich["note"] = (
            "no frame certificate: certified lower bound is 0; "
            f"oracle rho_min = {report_extremes.rho_min:.3g}"
        )
    report = {
        "tool": {"name": "gaborcert", "version": __version__, "command": "analyze"},
        "window": sys_.window,
        "lattice": {"a": sys_.a, "b": sys_.b},
        "amalgam_norm": {"value": norm.value, "exact": norm.exact},
        "correlation_summary": {
            "k_values": list(series.ks()),
            "sup_norms": {str(k): enc for k, enc in norms.items()},
        },
        "walnut_bounds": wb,
        "oracle": report_extremes,
        "sandwich": sandwich,
    }
    if zb is not None:
        report["zak_bounds"] = zb
    _emit(report, args)
    if args.csv:
        _write_csv(
            args.csv,
            ["k", "sup_norm_lo", "sup_norm_hi"],
            [[k, float(enc.lo), float(enc.hi)] for k, enc in sorted(norms.items())],
        )
    return EXIT_OK if sandwich["holds"] else EXIT_FAILED


def cmd_perturb(settings: Settings, args) -> int:
    g = settings.window()
    h = settings.window(flag="perturbed", params_flag="perturbed_params")
    sys_ = GaborSystem(g, settings.a, settings.b)
    if args.criterion == "divergence":
        diag = divergence_diagnostic(g, h, settings.a, settings.b, search_box=args.search_box)
        _emit({"criterion": "divergence", "report": diag}, args)
        return EXIT_OK
    lower, upper, source = _frame_bounds_for(settings, args, sys_)
    if args.criterion == "correlation":
        cert = certify_correlation(
            g, h, settings.a, settings.b, lower, upper, tol=settings.tolerance
        )
    elif args.criterion == "amalgam":
        cert = certify_amalgam(g, h, settings.a, settings.b, lower, upper)
    else:
        if settings.a != 1 or settings.b != 1:
            raise UsageError("criterion 'unit-lattice' requires a = b = 1")
        cert = certify_unit_lattice(g, h, lower, upper)
    _emit({"criterion": args.criterion, "bounds_source": source, "certificate": cert}, args)
    return _certificate_exit(cert)


def cmd_shift(settings: Settings, args) -> int:
    g = settings.window()
    sys_ = GaborSystem(g, settings.a, settings.b)
    lower, upper, source = _frame_bounds_for(settings, args, sys_)
    mode = "given_aprime" if args.mode == "given" else "report_epsilon"
    a_prime = _opt_rat(args, "a_prime")
    if mode == "given_aprime" and a_prime is None:
        raise UsageError("--a-prime is required unless --mode report is used")
    try:
        cert = certify_shift(
            g,
            settings.a,
            settings.b,
            lower,
            upper,
            a_prime=a_prime,
            R=_opt_rat(args, "radius"),
            mode=mode,
            grid_denominator=args.grid_denominator,
        )
    except ValueError as exc:
        raise UsageError(str(exc))
    report = {"bounds_source": source, "certificate": cert}
    evaluated = {}
    for raw in args.b_prime or ():
        b_prime = decode_number(raw)
        try:
            evaluated[raw] = shift_bounds_at(cert, b_prime)
        except ValueError as exc:
            evaluated[raw] = {"error": str(exc)}
    if evaluated:
        report["bounds_at_b_prime"] = evaluated
    _emit(report, args)
    return _certificate_exit(cert)


def cmd_truncate(settings: Settings, args) -> int:
    g = settings.window()
    sys_ = GaborSystem(g, settings.a, settings.b)
    lower, upper, source = _frame_bounds_for(settings, args, sys_)
    try:
        cert = certify_truncation(g, settings.a, settings.b, lower, upper)
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit({"bounds_source": source, "certificate": cert}, args)
    return _certificate_exit(cert)


def cmd_zak(settings: Settings, args) -> int:
    g = settings.window()
    if settings.a != 1 or settings.b != 1:
        raise UsageError("the zak command analyzes the unit lattice; set a = b = 1")
    bounds = zak_frame_bounds(GaborSystem(g, Fraction(1), Fraction(1)), resolution=args.resolution)
    report = {"zak_bounds": bounds, "resolution": args.resolution}
    _emit(report, args)
    if args.csv:
        grid = zak_samples(g, nx=args.resolution, ny=args.resolution)
        rows = []
        for i, x in enumerate(grid.xs):
            for j, y in enumerate(grid.ys):
                val = grid.values[i, j]
                rows.append([x, y, val.real, val.imag, abs(val) ** 2])
        _write_csv(args.csv, ["x", "y", "re", "im", "modulus_sq"], rows)
    return EXIT_OK


def cmd_oracle(settings: Settings, args) -> int:
    sys_ = settings.system()
    report = empirical_bounds(
        sys_,
        budget=settings.budget,
        seed=settings.seed,
        m_max=settings.m_max,
        n_cells=args.n_cells,
        cell_width=decode_number(args.cell_width) if args.cell_width else None,
    )
    _emit({"oracle": report}, args)
    if args.csv:
        _write_csv(
            args.csv,
            ["step", "stage", "rho"],
            [[i, stage, value] for i, (stage, value) in enumerate(report.trace)],
        )
    return EXIT_OK


def cmd_counterexamples(settings: Settings, args) -> int:
    names = args.scenario or None
    try:
        scenarios = run_scenarios(names)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]}; known: {', '.join(ALL_SCENARIOS)}")
    report = {
        "scenarios": [
            {
                "name": sc.name,
                "description": sc.description,
                "passed": sc.passed,
                "claims": sc.claims,
            }
            for sc in scenarios
        ],
        "all_passed": all(sc.passed for sc in scenarios),
    }
    _emit(report, args)
    return EXIT_OK if report["all_passed"] else EXIT_FAILED


def cmd_identity_check(settings: Settings, args) -> int:
    sys_ = settings.system()
    f = settings.window(flag="test_window", params_flag="test_params", required=False)
    if f is None:
        f = builtin_window("hat")
    report = identity_check(f, sys_, m_max=settings.m_max)
    _emit({"identity": report, "test_window": f}, args)
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML config file (or set $GABORCERT_CONFIG)")
    common.add_argument("--window", help="builtin name, inline JSON, or @file.json")
    common.add_argument(
        "--param",
        dest="params",
        action="append",
        metavar="KEY=VALUE",
        help="builtin window parameter (rationals as p/q); repeatable",
    )
    common.add_argument("--a", help="time step a as p/q")
    common.add_argument("--b", help="frequency step b as p/q")
    common.add_argument("--m-max", dest="m_max", type=int, help="modulation truncation")
    common.add_argument("--budget", type=int, help="oracle sample budget")
    common.add_argument("--seed", type=int, help="oracle RNG seed")
    common.add_argument("--tolerance", type=float, help="numeric tolerance")
    common.add_argument("--output", help="write the JSON report here instead of stdout")

    parser = _Parser(prog="gaborcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gaborcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="full bound analysis + oracle sandwich")
    p.add_argument("--csv", help="write correlation sup norms as CSV")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("perturb", parents=[common], help="window perturbation certificates")
    p.add_argument("--perturbed", required=True, help="perturbed window spec")
    p.add_argument(
        "--perturbed-param",
        dest="perturbed_params",
        action="append",
        metavar="KEY=VALUE",
        help="parameter for the perturbed builtin window; repeatable",
    )
    p.add_argument(
        "--criterion",
        choices=["correlation", "amalgam", "unit-lattice", "divergence"],
        default="correlation",
    )
    p.add_argument("--lower", help="lower frame bound A of the unperturbed system (p/q)")
    p.add_argument("--upper", help="upper frame bound B (p/q)")
    p.add_argument("--search-box", dest="search_box", type=int, default=100,
                   help="resonance search box for the divergence diagnostic")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("shift", parents=[common], help="translation-step certificate")
    p.add_argument("--a-prime", dest="a_prime", help="perturbed time step a' as p/q")
    p.add_argument("--radius", help="perturbation budget R (default: measured defect)")
    p.add_argument("--mode", choices=["given", "report"], default="given",
                   help="check a given a', or only report the admissible radius")
    p.add_argument("--grid-denominator", dest="grid_denominator", type=int, default=10**4)
    p.add_argument("--b-prime", dest="b_prime", action="append", metavar="P/Q",
                   help="also evaluate the emitted bounds at this b'; repeatable")
    p.add_argument("--lower", help="lower frame bound A (p/q)")
    p.add_argument("--upper", help="upper frame bound B (p/q)")
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("truncate", parents=[common], help="support truncation certificate")
    p.add_argument("--lower", help="lower frame bound A (p/q)")
    p.add_argument("--upper", help="upper frame bound B (p/q)")
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("zak", parents=[common], help="unit-lattice Zak bounds and grid")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--csv", help="write the sampled transform as CSV")
    p.set_defaults(func=cmd_zak)

    p = sub.add_parser("oracle", parents=[common], help="empirical Rayleigh extremes")
    p.add_argument("--n-cells", dest="n_cells", type=int, default=32)
    p.add_argument("--cell-width", dest="cell_width", help="grid cell width as p/q")
    p.add_argument("--csv", help="write the search trace as CSV")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("counterexamples", parents=[common], help="run counterexample scenarios")
    p.add_argument("--scenario", action="append", help="scenario name; repeatable (default all)")
    p.set_defaults(func=cmd_counterexamples)

    p = sub.add_parser("identity-check", parents=[common],
                       help="frame-energy identity: truncated sum vs exact value")
    p.add_argument("--test-window", dest="test_window",
                   help="test function f (window spec; default: hat)")
    p.add_argument(
        "--test-param",
        dest="test_params",
        action="append",
        metavar="KEY=VALUE",
        help="parameter for the test-function builtin; repeatable",
    )
    p.set_defaults(func=cmd_identity_check)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings(args)
        return args.func(settings, args)
    except UsageError as exc:
        print(f"gaborcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"gaborcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())
