"""Torsion invariant of triangulated PL 4-manifolds from Euclidean realizations."""

__version__ = "0.1.0"

from .complex import ChainComplex, Frames, assemble_complex, default_frames, random_frames
from .errors import (
    DegeneracyError,
    MoveRejected,
    NonRealizableError,
    NotAcyclicError,
    ParseError,
    PartitionError,
    Pl4Error,
    ValidationError,
)
from .torsion import (
    AcyclicityReport,
    InvariantResult,
    MinorPartition,
    TorsionResult,
    check_acyclic,
    evaluate,
    invariant,
    predicted_ratio,
    select_partition,
    torsion,
)
from .triangulation import (
    MoveRecord,
    Realization,
    Triangulation,
    apply_move,
    boundary_5simplex_s4,
    build_skeleton,
    canonical_s4,
    move_candidates,
    validate_closed_oriented,
)

__all__ = [
    "AcyclicityReport",
    "ChainComplex",
    "DegeneracyError",
    "Frames",
    "InvariantResult",
    "MinorPartition",
    "MoveRecord",
    "MoveRejected",
    "NonRealizableError",
    "NotAcyclicError",
    "ParseError",
    "PartitionError",
    "Pl4Error",
    "Realization",
    "TorsionResult",
    "Triangulation",
    "ValidationError",
    "apply_move",
    "assemble_complex",
    "boundary_5simplex_s4",
    "build_skeleton",
    "canonical_s4",
    "check_acyclic",
    "default_frames",
    "evaluate",
    "invariant",
    "move_candidates",
    "predicted_ratio",
    "random_frames",
    "select_partition",
    "torsion",
    "validate_closed_oriented",
]
