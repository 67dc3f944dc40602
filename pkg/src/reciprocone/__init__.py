"""Exact lattice-point generating functions for rational pointed cones.

Everything is computed in exact integer/rational arithmetic; there is no
floating point anywhere in the package.
"""

from .exactla import det, solve_rational, extend_to_unimodular
from .cone import (
    Cone,
    VCone,
    HalfOpenSimplicialCone,
    UnimodularMap,
    ConeError,
    cone_from_generators,
    normalize,
    transform,
    triangulate_halfopen,
)
from .genfun import (
    RationalGenFun,
    TruncatedSeries,
    HalfOpenSpec,
    simplicial_sigma,
    sigma,
    sigma_halfopen,
    invert_variables,
    expand,
    brute_force_series,
    stanley_reciprocity_check,
    halfopen_reciprocity_check,
)
from .ctengine import (
    SlackSystem,
    ThetaSeries,
    EliminationTrace,
    TraceInvariantError,
    slack_matrix,
    euler_constant_term,
    eliminate_step,
    negativity_certificate,
    elimination_trace,
)
from .ehrhart import (
    RationalPolytope,
    QuasiPolynomial,
    UnivariateRatFun,
    cone_over,
    count,
    quasipolynomial,
    reciprocity_check,
    hilbert_series,
)

__version__ = "0.1.0"
