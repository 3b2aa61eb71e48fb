"""Local stability analysis for two-time-scale dynamical systems.

Characteristic polynomials from principal minors, Routh arrays over reals or
polynomials in G = 1/eps, and a worked two-risk-group SEIR analysis with
numeric oracles to check it against.
"""

from .charpoly import (
    CharPoly,
    SquareMatrix,
    charpoly_leverrier,
    charpoly_minors,
    det,
    matrix_from_json,
    matrix_to_json,
    principal_minor_sum,
)
from .gammapoly import GammaPoly, GammaRatio, LeadingTerm, format_gamma, gp_add, gp_mul, leading, parse_gamma
from .oracle import RootSet, Trajectory, eigvals, newton_refine, poly_roots, simulate
from .params import WORKED_POINT, DimParams, Params, nondimensionalize, params_from_json
from .routh import (
    RouthArray,
    Stability,
    Verdict,
    ZeroPivot,
    build_routh,
    q4_full,
    rh_conditions_deg4,
    verdict,
    verdict_leading,
)
from .system import State
from .tworisk import (
    EdeState,
    StabilityConditions,
    bifurcation_c,
    check_prop1,
    check_prop4,
    dfe,
    dfe_stability,
    ede_quadratic,
    jacobian_gamma,
    leading_charpoly,
    r0,
    solve_ede,
    stability_conditions,
)

__version__ = "0.1.0"
