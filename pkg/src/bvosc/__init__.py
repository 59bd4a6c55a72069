"""Oscillation functionals, cube packings, and blow-up tangents of BV functions."""

from .bvfunction import BVFunction1D, CantorPart, PiecewiseBV, l1_distance, sup_distance
from .cantor import CantorSpec, CantorStage, ScaleSchedule, build_stage, cantor_function, scale_schedule
from .errors import (
    BVOscError,
    DegenerateCubeError,
    DomainError,
    LatticeTooLargeError,
    NotConvergedError,
    SpecFormatError,
    ZeroVariationError,
)
from .function2d import (
    Function2D,
    HalfplaneIndicator,
    LinearField,
    PolygonIndicator,
    SmoothField,
)
from .geometry import Cube, Interval, interval_as_cube, unit_cube
from .localpc import (
    CellFormulaReport,
    JumpTemplate,
    ModifiedPoincareReport,
    PoincareProfile,
    PTauResult,
    RigidityReport,
    ScanLattice,
    TangentCandidate,
    cell_formula_check,
    centered_cube_sequence,
    extract_tangent,
    modified_poincare_check,
    p_profile,
    p_tau,
    rescale,
    rigidity_diagnose,
)
from .oscillation import (
    CLOSED_FORM_TOL,
    QUADRATURE_TOL,
    HadwigerReport,
    OscResult,
    hadwiger_check,
    osc,
    poincare_quotient,
    total_variation,
)
from .packing import (
    CubeCheck,
    PackedCube,
    PackingFamily,
    PackingProblem,
    g_sweep,
    good_family_check,
    max_weight_disjoint,
    prune_and_resolve,
    solve,
    solve_1d,
    solve_2d,
)
from .serialization import function_from_dict, function_to_dict, load_function, save_function
from .verify import SUITES, CheckItem, TheoremReport, run_suites

__version__ = "0.1.0"
