"""Exact symbolic checks for hypersurfaces in normal coordinates and Segre preserving maps."""

from .hypersurface import (
    ComplexifyError,
    NormalHypersurface,
    NotNormalError,
    RealDefiningFunction,
    complexify,
    validate_normal,
    validate_reality,
)
from .invariants import (
    ChainViolation,
    ClassificationReport,
    classify,
    is_class_C,
    is_essentially_finite,
    is_finite_type,
    is_finitely_nondegenerate,
    is_holomorphically_nondegenerate,
    jet_map,
    observation_mnrs,
)
from .maps import (
    AuditFailure,
    AuditReport,
    SegreMap,
    audit,
    det_conjugate_relation,
    identity_map,
    is_segre_transversal,
    is_transversally_null,
    jacobian_generic_rank,
    jacobian_rank_at_0,
    maps_into_target,
    order_match,
    segre_nondegeneracy,
    verify_hspm,
)
from .parser import ParseError, parse_document, parse_expression
from .scalar import GaussianRational
from .series import DEFAULT_ORDER, SeriesError, SeriesMatrix, TruncatedSeries, VarSpace, generic_rank, jacobian
from .verdict import Status, Verdict

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
