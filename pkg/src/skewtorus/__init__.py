"""Exact arithmetic for truncated transformation groups of skew-product
torus towers, with Weyl-sum equidistribution checks.

The layers, bottom up: integer combinatorics (generalized binomials,
Stirling numbers), exact circle elements over a declared irrational
basis, truncated circle endomorphisms at level L (modulus L!), the
finite-level transformation groups with their convolution law, tower
dynamics with closed-form iteration, floating-point Weyl averages with
exact phases, and the factor-kernel laboratory around the
quasi-eigenfunction non-separation witness.
"""

from .circle import Angle, BasisDecl, ZERO, angle_to_unit, format_point, parse_point
from .combinatorics import binom, falling_factorial, stirling1
from .config import Config, DEFAULT_BASIS, config_from_dict, load_config
from .dynamics import (
    BasicSystem,
    CharacterIndex,
    PolyAngle,
    ambient_iterate,
    diagonal_representation,
    index_shift,
    orbit_polynomial,
    q_eval,
)
from .ellis import HmElement, ast_mul, commutator, predicted_commutator
from .endo import TruncEndo, TruncationContext, decompose, minimal_level
from .errors import (
    ConfigurationError,
    MembershipError,
    ParseError,
    RelationError,
    SkewtorusError,
    TruncationError,
)
from .factor_lab import (
    FactorConfig,
    KernelSpec,
    NonseparationReport,
    coset_equal,
    default_kernel_specs,
    g1_member,
    g_member,
    kernel_member,
    nonseparation_witness,
    pair_correction,
    qef_coset_constant,
    qef_index_family,
)
from .weyl import (
    WeylReport,
    equidistribution_report,
    equidistribution_target,
    minimal_period,
    unique_ergodicity_check,
    weyl_average,
)

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "BasicSystem",
    "BasisDecl",
    "CharacterIndex",
    "Config",
    "ConfigurationError",
    "DEFAULT_BASIS",
    "FactorConfig",
    "HmElement",
    "KernelSpec",
    "MembershipError",
    "NonseparationReport",
    "ParseError",
    "PolyAngle",
    "RelationError",
    "SkewtorusError",
    "TruncEndo",
    "TruncationContext",
    "TruncationError",
    "WeylReport",
    "ZERO",
    "ambient_iterate",
    "angle_to_unit",
    "ast_mul",
    "binom",
    "commutator",
    "config_from_dict",
    "coset_equal",
    "decompose",
    "default_kernel_specs",
    "diagonal_representation",
    "equidistribution_report",
    "equidistribution_target",
    "falling_factorial",
    "format_point",
    "g1_member",
    "g_member",
    "index_shift",
    "kernel_member",
    "load_config",
    "minimal_level",
    "minimal_period",
    "nonseparation_witness",
    "orbit_polynomial",
    "pair_correction",
    "parse_point",
    "predicted_commutator",
    "q_eval",
    "qef_coset_constant",
    "qef_index_family",
    "stirling1",
    "unique_ergodicity_check",
    "weyl_average",
]
