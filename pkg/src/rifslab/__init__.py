"""Orbit statistics for expanding affine systems on the rationals.

Enumerates forward orbits exactly, fits the usual growth exponents
(mass, Beurling, discrete Hausdorff, attractor box, p-adic box), and
evaluates central densities and the renewal-style density constant.
"""

from .config import RunConfig, apply_overrides, load_config, parse_config
from .dimension import (
    BoxCounts,
    CoverCost,
    DensityReport,
    DimensionFit,
    DiscreteHausdorffReport,
    RenewalEstimate,
    SimilaritySolution,
    attractor_box_counts,
    density_profile,
    digit_measure_cdf,
    dual_attractor_hull,
    estimate_beurling_dimension,
    estimate_box_dimension,
    estimate_discrete_hausdorff,
    estimate_mass_dimension,
    integerize,
    min_cover_cost,
    renewal_constant,
    solve_similarity_dimension,
    window_density_sup,
)
from .errors import BudgetExceededError, ConfigError, DomainError
from .orbit import (
    HAVE_KERNEL,
    CountingProfile,
    OrbitSample,
    OverlapMatrix,
    counting_profile,
    enumerate_orbit,
    min_gap,
    overlap_probe,
    residual_points,
    truncated_orbit,
    window_max_count,
    write_orbit_dump,
)
from .padic import (
    BallClustering,
    MassBoxComparison,
    PAdicAttractorSample,
    PAdicBoxReport,
    PAdicSystem,
    attractor_sample,
    ball_count,
    compare_mass_and_box,
    make_padic_system,
    mass_box_sandwich,
    padic_box_dimension,
    padic_distance,
)
from .rational import (
    PAdicValue,
    check_prime,
    format_rational,
    is_prime,
    make_rational,
    padic_valuation,
    parse_rational,
    to_float,
)
from .systems import (
    AffineMap,
    Rifs,
    SystemProfile,
    affine_map,
    common_fixed_point,
    compose,
    find_exact_overlaps,
    fixed_point,
    has_incongruent_offsets,
    make_system,
    min_word_separation,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "BallClustering",
    "BoxCounts",
    "BudgetExceededError",
    "ConfigError",
    "CountingProfile",
    "CoverCost",
    "DensityReport",
    "DimensionFit",
    "DiscreteHausdorffReport",
    "DomainError",
    "HAVE_KERNEL",
    "MassBoxComparison",
    "OrbitSample",
    "OverlapMatrix",
    "PAdicAttractorSample",
    "PAdicBoxReport",
    "PAdicSystem",
    "PAdicValue",
    "RenewalEstimate",
    "Rifs",
    "RunConfig",
    "SimilaritySolution",
    "SystemProfile",
    "affine_map",
    "apply_overrides",
    "attractor_box_counts",
    "attractor_sample",
    "ball_count",
    "check_prime",
    "common_fixed_point",
    "compare_mass_and_box",
    "compose",
    "counting_profile",
    "density_profile",
    "digit_measure_cdf",
    "dual_attractor_hull",
    "enumerate_orbit",
    "estimate_beurling_dimension",
    "estimate_box_dimension",
    "estimate_discrete_hausdorff",
    "estimate_mass_dimension",
    "find_exact_overlaps",
    "fixed_point",
    "format_rational",
    "has_incongruent_offsets",
    "integerize",
    "is_prime",
    "load_config",
    "make_padic_system",
    "make_rational",
    "make_system",
    "mass_box_sandwich",
    "min_cover_cost",
    "min_gap",
    "min_word_separation",
    "overlap_probe",
    "padic_box_dimension",
    "padic_distance",
    "padic_valuation",
    "parse_config",
    "parse_rational",
    "renewal_constant",
    "residual_points",
    "solve_similarity_dimension",
    "to_float",
    "truncated_orbit",
    "window_density_sup",
    "window_max_count",
    "write_orbit_dump",
]
