"""convmap: convexity diagnostics, hyperbolic-metric level sets, and
level-curve curvature for conformal maps of the unit disk."""

from .errors import (
    ConvmapError,
    DegenerateDenominator,
    LevelNotOnRay,
    NormalVanished,
    PhiOutOfRange,
    RadiusExceeded,
    SingularPoint,
    TruncationTail,
)
from .jet import Jet
from .series import (
    DEFAULT_ORDER,
    DEFAULT_RMAX,
    PowerSeries,
    series_derive,
    series_eval_jet,
    series_exp,
    series_integrate,
    series_inv,
    series_mul,
)
from .grid import GridSpec
from .maps import (
    MapSpec,
    PhiSpec,
    builtin_map,
    fit_phi_polynomial,
    from_series,
    gen_herglotz,
    halfplane,
    herglotz_map,
    identity,
    jet_fields,
    jet_of,
    koebe,
    map_from_json,
    map_to_json,
    phi_of,
    phi_values,
    polygon,
    sector,
    strip,
)
from .functionals import (
    UNIMODULAR,
    ConvexityReport,
    Diagnostics,
    classical_lhs,
    convexity_report,
    diagnostics,
    equivalence_identity,
    grid_functionals,
    kim_minda,
    nehari_value,
    p_field,
    poincare_density,
    pre_schwarzian,
    rhs2,
    rhs3,
    schwarz_pick_slack,
    schwarzian,
)
from .levelset import (
    LevelCurve,
    disk_curvature,
    discrete_curvature,
    find_level_start,
    image_curvature,
    level_value,
    trace_level_set,
)
from .critical import CriticalResult, PhiClass, classify_phi, find_critical_point

__version__ = "0.1.0"

__all__ = [
    "ConvmapError",
    "DegenerateDenominator",
    "LevelNotOnRay",
    "NormalVanished",
    "PhiOutOfRange",
    "RadiusExceeded",
    "SingularPoint",
    "TruncationTail",
    "Jet",
    "PowerSeries",
    "DEFAULT_ORDER",
    "DEFAULT_RMAX",
    "series_derive",
    "series_eval_jet",
    "series_exp",
    "series_integrate",
    "series_inv",
    "series_mul",
    "GridSpec",
    "MapSpec",
    "PhiSpec",
    "builtin_map",
    "fit_phi_polynomial",
    "from_series",
    "gen_herglotz",
    "halfplane",
    "herglotz_map",
    "identity",
    "jet_fields",
    "jet_of",
    "koebe",
    "map_from_json",
    "map_to_json",
    "phi_of",
    "phi_values",
    "polygon",
    "sector",
    "strip",
    "UNIMODULAR",
    "ConvexityReport",
    "Diagnostics",
    "classical_lhs",
    "convexity_report",
    "diagnostics",
    "equivalence_identity",
    "grid_functionals",
    "kim_minda",
    "nehari_value",
    "p_field",
    "poincare_density",
    "pre_schwarzian",
    "rhs2",
    "rhs3",
    "schwarz_pick_slack",
    "schwarzian",
    "LevelCurve",
    "disk_curvature",
    "discrete_curvature",
    "find_level_start",
    "image_curvature",
    "level_value",
    "trace_level_set",
    "CriticalResult",
    "PhiClass",
    "classify_phi",
    "find_critical_point",
]
