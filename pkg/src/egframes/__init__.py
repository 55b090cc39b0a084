"""Numerical laboratory for E-g-frames on finite truncations of Hilbert spaces."""

from .errors import DomainError, EGFrameError, PreconditionError, ScenarioError, ShapeError, SingularityError
from .frames import (
    analysis,
    canonical_dual,
    classify,
    dual_of_dual_check,
    e_frame_bounds,
    frame_bounds,
    frame_operator,
    frame_report,
    reconstruct,
    synthesis,
)
from .model import OperatorSequence, StackedVector, TransformMatrix, WeightSequence
from .transform import apply_transform, make_banded, make_delta, make_dense, make_identity

__version__ = "0.1.0"
