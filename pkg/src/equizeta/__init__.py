"""equizeta: equivariant Ruelle zeta functions for model flows.

A numerical library (plus a small CLI) that evaluates the equivariant
Ruelle dynamical zeta function and equivariant analytic torsion on a set
of worked geometries (line, integer lattice, circle, Euclidean
crystallographic lattices, 2- and 3-sphere frame flows), realizes the
flow's flat-trace distribution as an atomic measure, and checks the
equality log R(0) = log T wherever both sides are defined.
"""

from .errors import (
    DomainError,
    EquizetaError,
    NonConvergentError,
    NotApplicableError,
    SingularMatrixError,
    SingularPointError,
)
from .models import (
    CircleModel,
    CutoffProfile,
    EuclideanElement,
    EuclideanLatticeModel,
    FlowModel,
    IntegerLatticeModel,
    LineModel,
    ModelDiagnostics,
    OrbitContribution,
    QuadratureSpec,
    Sphere2Model,
    Sphere3Model,
    chi_primitive_period_numeric,
    length_spectrum,
    model_from_params,
    orbit_contributions,
    parse_complex,
    validate_model,
)
from .rotations import (
    AxisRotation,
    EuclideanMotion,
    PoincareData,
    RotationBlock,
    SphereFixClass,
    axis_and_kernel,
    euclidean_fixed_condition,
    poincare_determinant_euclidean,
    rot2,
    rotation_about_last_axis,
    signed_wedge_trace,
    solve_transverse,
    sphere_fixed_classifier,
)
from .series import (
    BilateralSumParams,
    SeriesResult,
    atanh_of_exp,
    bilateral_exp_sum_continued,
    bilateral_exp_sum_direct,
    bilateral_exp_sum_resummed,
    hyp2f1,
    log_one_minus,
)
from .zeta import (
    AtomicMeasure,
    FriedReport,
    ZetaEvaluation,
    flat_trace_measure,
    fried_residual,
    pair_with_test_function,
    product_decomposition_check,
    ruelle_log_closed,
    ruelle_log_direct,
    subgroup_power_check,
    torsion_log,
    torsion_log_resummed,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
