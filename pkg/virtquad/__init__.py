"""
virtquad - virtual quadratic spaces over finite fields

Classify quadratic forms in every characteristic, embed them into minimal
virtual spaces, and check orthogonal group orders by enumeration.
"""

__version__ = "0.1.0"

from .classify import canonical_form, class_census, is_isomorphic
from .embedding import embed_ambient, minimalize
from .field import make_field
from .isometry import order_formula
from .quadratic import QuadraticSpace, VirtualQuadraticSpace
from .sweep import sweep

__all__ = [
    "QuadraticSpace",
    "VirtualQuadraticSpace",
    "canonical_form",
    "class_census",
    "embed_ambient",
    "is_isomorphic",
    "make_field",
    "minimalize",
    "order_formula",
    "sweep",
    "__version__",
]
