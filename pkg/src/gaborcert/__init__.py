"""Certified frame bounds and perturbation certificates for compactly
supported Gabor systems on rational lattices.

Windows are exact piecewise polynomials; bound computations are carried
out in rational arithmetic wherever the mathematics allows, labeled as
certified or estimated, and every certificate is cross-checked against a
brute-force quadratic-form oracle that shares no code path with the
certified routes.
"""

__version__ = "0.1.0"

from .amalgam import AmalgamNorm, amalgam_norm, amalgam_tail
from .core import (
    CERTIFIED,
    CRat,
    ESTIMATED,
    Enclosure,
    FrameBounds,
    GaborSystem,
    PiecewiseFn,
    crat,
    ess_range,
    integral_exact,
    l2_norm_sq,
    periodize,
    sqrt_or_float,
)
from .oracle import (
    OracleReport,
    ProbeGrid,
    alternating_norm,
    alternating_norm_sq,
    alternating_sum,
    default_grid,
    empirical_bounds,
    rayleigh,
    rayleigh_samples,
    truncated_frame_energy,
)
from .perturb import (
    Certificate,
    DivergenceReport,
    certify_amalgam,
    certify_correlation,
    certify_shift,
    certify_truncation,
    certify_unit_lattice,
    divergence_diagnostic,
    perturbed_frame_bounds,
    shift_bounds_at,
)
from .suite import (
    ALL_SCENARIOS,
    Claim,
    Scenario,
    run_scenarios,
    scenario_cantor_like,
    scenario_half_height,
    scenario_shrunk_indicator,
    scenario_step_boundary,
    scenario_unit_sum_boundary,
)
from .walnut import (
    CorrelationSeries,
    IdentityReport,
    correlations,
    cross_correlations,
    cross_term_sum,
    frame_energy_exact,
    identity_check,
    sup_norms,
    walnut_bounds,
)
from .windows import (
    BUILTIN_WINDOWS,
    builtin_window,
    decode_number,
    encode_number,
    window_from_json,
    window_to_json,
)
from .zak import ZakGrid, zak_frame_bounds, zak_samples, zak_value

__all__ = [
    "AmalgamNorm",
    "amalgam_norm",
    "amalgam_tail",
    "CERTIFIED",
    "CRat",
    "ESTIMATED",
    "Enclosure",
    "FrameBounds",
    "GaborSystem",
    "PiecewiseFn",
    "crat",
    "ess_range",
    "integral_exact",
    "l2_norm_sq",
    "periodize",
    "sqrt_or_float",
    "OracleReport",
    "ProbeGrid",
    "alternating_norm",
    "alternating_norm_sq",
    "alternating_sum",
    "default_grid",
    "empirical_bounds",
    "rayleigh",
    "rayleigh_samples",
    "truncated_frame_energy",
    "Certificate",
    "DivergenceReport",
    "certify_amalgam",
    "certify_correlation",
    "certify_shift",
    "certify_truncation",
    "certify_unit_lattice",
    "divergence_diagnostic",
    "perturbed_frame_bounds",
    "shift_bounds_at",
    "ALL_SCENARIOS",
    "Claim",
    "Scenario",
    "run_scenarios",
    "scenario_cantor_like",
    "scenario_half_height",
    "scenario_shrunk_indicator",
    "scenario_step_boundary",
    "scenario_unit_sum_boundary",
    "CorrelationSeries",
    "IdentityReport",
    "correlations",
    "cross_correlations",
    "cross_term_sum",
    "frame_energy_exact",
    "identity_check",
    "sup_norms",
    "walnut_bounds",
    "BUILTIN_WINDOWS",
    "builtin_window",
    "decode_number",
    "encode_number",
    "window_from_json",
    "window_to_json",
    "ZakGrid",
    "zak_frame_bounds",
    "zak_samples",
    "zak_value",
    "__version__",
]
