"""Exact invariants of primitive cyclic covering fibrations.

Fibrations obtained as relatively minimal models of order-``n`` cyclic
covers of a ruled (or genus ``h``) fibration, branched along a curve whose
singular fibres are described by clusters of infinitely near points.

All arithmetic is exact (``fractions.Fraction``); there are no tolerances.
"""

from .core import (
    FibrationParams,
    SlopeConstants,
    derive_r,
    lambda_lower,
    lambda_upper,
    slope_constants,
)
from .cluster import (
    BranchProfile,
    ClusterNode,
    FiberGerm,
    MultiplicitySequence,
    check_monotonicity,
    monotonicity_violations,
    check_tc_identities,
    elementary_transform_step,
    multiplicity_sequence,
    standardize,
    validate_germ,
)
from .resolution import ResolvedGerm, check_jp_bounds, euler_local, resolve_germ, vertical_ledger
from .invariants import (
    GlobalModel,
    InvariantReport,
    horikawa_index,
    local_signature,
    m_from_indices,
    relative_invariants,
    signature_total,
    slope_equality_check,
)
from .bounds import (
    SurfaceClassData,
    blowup_corrections,
    lower_bound_certificate,
    upper_bound_certificate,
    wlevel_invariants,
)
from .examples import EnumerationBudget, ProductExampleParams, enumerate_germs, product_example

__all__ = [
    "FibrationParams",
    "SlopeConstants",
    "derive_r",
    "lambda_lower",
    "lambda_upper",
    "slope_constants",
    "BranchProfile",
    "ClusterNode",
    "FiberGerm",
    "MultiplicitySequence",
    "check_monotonicity",
    "monotonicity_violations",
    "check_tc_identities",
    "elementary_transform_step",
    "multiplicity_sequence",
    "standardize",
    "validate_germ",
    "ResolvedGerm",
    "check_jp_bounds",
    "euler_local",
    "resolve_germ",
    "vertical_ledger",
    "GlobalModel",
    "InvariantReport",
    "horikawa_index",
    "local_signature",
    "m_from_indices",
    "relative_invariants",
    "signature_total",
    "slope_equality_check",
    "SurfaceClassData",
    "blowup_corrections",
    "lower_bound_certificate",
    "upper_bound_certificate",
    "wlevel_invariants",
    "EnumerationBudget",
    "ProductExampleParams",
    "enumerate_germs",
    "product_example",
]

__version__ = "0.1.0"
