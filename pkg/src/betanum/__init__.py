"""betanum: exact beta-numeration for Pisot bases."""

from .numberfield import (
    FieldElement,
    MinimalPolynomial,
    PisotField,
    make_field,
)

__all__ = ["FieldElement", "MinimalPolynomial", "PisotField", "make_field"]

__version__ = "0.1.0"
