"""Exact combinatorial workbench for Cuntz-Krieger algebras of 0-1 matrices."""

from .dsl import DslError, parse_spec
from .matrix import DiagRule, MatrixSpec, RectRule, SupportReport
from .universe import BitStream, IndexSet, Universe

__version__ = "0.1.0"

__all__ = [
    "BitStream",
    "DiagRule",
    "DslError",
    "IndexSet",
    "MatrixSpec",
    "RectRule",
    "SupportReport",
    "Universe",
    "parse_spec",
]
