"""Exact computation of Lefschetz centralizer algebras, their explicit generators,
and canonical isotypic decompositions of tensor and exterior powers."""

from .config import Config, cm, load_config, preset, product, siegel
from .errors import (
    AbelDecompError,
    CenterNotSeparated,
    InvalidData,
    InvalidField,
    MissingComponents,
    NotAlternating,
    NotInvertible,
    NotIsomorphic,
    NotWedgeCompatible,
    SizeBudgetExceeded,
    SplittingFieldRequired,
)
from .exactfield import QQ, FieldSpec, Mat, kernel_basis, min_poly_of, rank, rref
from .isotypic import decompose, decompose_tensor, intertwiner, primitive_idempotents
from .lefschetz import Budgets, OperatorSpan, PolarizedData, centralizer_basis, lie_algebra_basis
from .motivicalg import algebra_closure, bir_algebra, bn_algebra, bn_generators, verify_cor_princ, verify_thm_cle
from .weyldiagrams import diagram_span, matching_to_operator

__version__ = "0.1.0"
