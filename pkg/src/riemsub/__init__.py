"""Numerical verification toolkit for Riemannian submersion geometry.

Declarative metrics, almost complex structures, submersion maps, and
Clairaut exponents go in; connection data, vertical/horizontal splittings,
fundamental tensors, and residual check reports come out.  Everything is
verified numerically at seeded sample points and along integrated
geodesics: no identity is assumed, each one is measured against a
tolerance.
"""

from .clairaut import (
    ClairautScenario,
    NonGeodesicError,
    SamplingConfig,
    SplitResult,
    Tolerances,
    alpha_beta_split,
    check_anti_invariant,
    check_bishop,
    check_clairaut_condition,
    check_dichotomies,
    check_geodesic_conditions,
    check_pq_identities,
    check_thm33_identity,
    clairaut_invariant,
    geodesic_condition_residuals,
    interior_indices,
    invariant_series,
    mu_basis,
    pq_curve_residual,
    pq_tensors,
)
from .cli import main, run_scenario
from .expr import (
    DomainError,
    Expr,
    ExprError,
    ParseError,
    differentiate,
    evaluate,
    fd_derivative,
    parse,
)
from .geometry import (
    DomainExitError,
    ExclusionTube,
    GeodesicTrajectory,
    GeometryError,
    ManifoldSpec,
    SamplingDomain,
    SingularMetricError,
    VectorField,
    box_domain,
    christoffel,
    covariant_derivative,
    geodesic_integrate,
    gradient,
    koszul,
    metric_norm,
    sample_points,
)
from .hermitian import (
    AlmostComplexField,
    apply_phi,
    check_nearly_kaehler,
    check_structure,
    nabla_phi,
)
from .report import CheckReport, ReportDocument
from .scenario import (
    GeodesicConfig,
    ScenarioBundle,
    ScenarioValidationError,
    build_scenario,
    bundled_scenario_names,
    bundled_scenario_path,
    load_scenario,
    resolve_scenario_path,
)
from .submersion import (
    Frame,
    RankDeficiencyError,
    SmoothMap,
    SubmersionError,
    build_frame,
    check_decompositions,
    check_sff_vertical,
    check_skew,
    check_submersion,
    differential,
    fiber_character,
    project,
    second_fundamental_form,
    tensor_A,
    tensor_T,
)

__all__ = [
    "AlmostComplexField",
    "CheckReport",
    "ClairautScenario",
    "DomainError",
    "DomainExitError",
    "ExclusionTube",
    "Expr",
    "ExprError",
    "Frame",
    "GeodesicConfig",
    "GeodesicTrajectory",
    "GeometryError",
    "ManifoldSpec",
    "NonGeodesicError",
    "ParseError",
    "RankDeficiencyError",
    "ReportDocument",
    "SamplingConfig",
    "SamplingDomain",
    "ScenarioBundle",
    "ScenarioValidationError",
    "SingularMetricError",
    "SmoothMap",
    "SplitResult",
    "SubmersionError",
    "Tolerances",
    "VectorField",
    "alpha_beta_split",
    "apply_phi",
    "box_domain",
    "build_frame",
    "build_scenario",
    "bundled_scenario_names",
    "bundled_scenario_path",
    "check_anti_invariant",
    "check_bishop",
    "check_clairaut_condition",
    "check_decompositions",
    "check_dichotomies",
    "check_geodesic_conditions",
    "check_nearly_kaehler",
    "check_pq_identities",
    "check_sff_vertical",
    "check_skew",
    "check_structure",
    "check_submersion",
    "check_thm33_identity",
    "christoffel",
    "clairaut_invariant",
    "covariant_derivative",
    "differential",
    "differentiate",
    "evaluate",
    "fd_derivative",
    "fiber_character",
    "geodesic_condition_residuals",
    "geodesic_integrate",
    "gradient",
    "interior_indices",
    "invariant_series",
    "koszul",
    "load_scenario",
    "main",
    "metric_norm",
    "mu_basis",
    "nabla_phi",
    "parse",
    "pq_curve_residual",
    "pq_tensors",
    "project",
    "resolve_scenario_path",
    "run_scenario",
    "sample_points",
    "second_fundamental_form",
    "tensor_A",
    "tensor_T",
]
