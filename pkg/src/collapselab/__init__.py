"""collapselab: numerics for collapsing rotationally symmetric Ricci flow.

Submodules
----------
profiles       radial warped-product metrics, curvature, quotients
flow           explicit RK4 surface Ricci flow and 3-d product lifts
pinching       Hamilton-Ivey-type thresholds and sequence classification
dilation       point selection, parabolic rescaling, dilatability bounds
collapse       collapsing circle-fiber families and metric-space sampling
gh             Gromov-Hausdorff distances, bounds, and dimension estimates
virtual_limit  window gluing, disk closure, local models, cigar comparison
cli            config-driven command line driver
"""

from . import errors
from .collapse import CollapseFamily, FiniteMetricSpace, inj_proxy, make_family, sample_space
from .dilation import DilationRecord, dilatable_check, rescale, rescaled_bound, select_point
from .flow import (
    SurfaceSolution,
    areas,
    evolve,
    lift_product,
    phi_variation,
    profile_at,
    read_solution,
    rf_defect,
    spectrum_history,
    stable_dt,
    step,
    trusted_slice,
    write_solution,
)
from .gh import DimEstimate, dim_estimate, gh_bound, gh_exact, read_space, write_space
from .pinching import (
    PinchingParams,
    PinchingReport,
    ansc_verify,
    check_pinching,
    classify_origin,
    classify_sequence,
    hamilton_ivey_threshold,
    lambda3_lower_bound,
)
from .profiles import (
    CurvatureSpectrum,
    RadialProfile,
    SpectrumHistory,
    Warped3Metric,
    cigar_profile,
    disk_profile,
    flat_cylinder,
    gauss_curvature,
    quotient_metric,
    read_profile,
    scalar_from_spectrum,
    spectrum_product,
    sphere_profile,
    surface_scalar,
    write_profile,
)
from .virtual_limit import (
    CigarReport,
    LocalModel,
    ModelRejection,
    OverlapRecord,
    ProfileWindow,
    SingularReport,
    chain_identify,
    cigar_compare,
    classify_local_model,
    cut_windows,
    detect_singular_points,
    extend_to_disk,
    glue,
    overlap_identify,
)

__all__ = [
    "errors",
    "CollapseFamily",
    "FiniteMetricSpace",
    "inj_proxy",
    "make_family",
    "sample_space",
    "DilationRecord",
    "dilatable_check",
    "rescale",
    "rescaled_bound",
    "select_point",
    "SurfaceSolution",
    "areas",
    "evolve",
    "lift_product",
    "phi_variation",
    "profile_at",
    "read_solution",
    "rf_defect",
    "spectrum_history",
    "stable_dt",
    "step",
    "trusted_slice",
    "write_solution",
    "DimEstimate",
    "dim_estimate",
    "gh_bound",
    "gh_exact",
    "read_space",
    "write_space",
    "PinchingParams",
    "PinchingReport",
    "ansc_verify",
    "check_pinching",
    "classify_origin",
    "classify_sequence",
    "hamilton_ivey_threshold",
    "lambda3_lower_bound",
    "CurvatureSpectrum",
    "RadialProfile",
    "SpectrumHistory",
    "Warped3Metric",
    "cigar_profile",
    "disk_profile",
    "flat_cylinder",
    "gauss_curvature",
    "quotient_metric",
    "read_profile",
    "write_profile",
    "scalar_from_spectrum",
    "spectrum_product",
    "sphere_profile",
    "surface_scalar",
    "CigarReport",
    "LocalModel",
    "ModelRejection",
    "OverlapRecord",
    "ProfileWindow",
    "SingularReport",
    "chain_identify",
    "cigar_compare",
    "classify_local_model",
    "cut_windows",
    "detect_singular_points",
    "extend_to_disk",
    "glue",
    "overlap_identify",
]

__version__ = "0.1.0"
