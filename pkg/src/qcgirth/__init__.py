"""Quasi-cyclic LDPC codes with certified girth.

Exact exponent-polynomial algebra, independent girth certificates (algebraic
and BFS), difference-set girth conditions, constructors for girths 8/10/12,
pre-lifting to girth 14, and a reproducible BP decoding harness.
"""

from .poly import BinaryMatrix, ExponentPoly, PolyMatrix, gram_power, lift, triangle, triangle_matrix
from .girth import (
    GirthCertificate,
    TannerGraph,
    bfs_girth,
    build_ch,
    certify_girth_above,
    ch_certify,
    collapse_two_row,
    girth_exact,
    walk_has_lifted_cycle,
)

__all__ = [
    "BinaryMatrix",
    "ExponentPoly",
    "PolyMatrix",
    "GirthCertificate",
    "TannerGraph",
    "bfs_girth",
    "build_ch",
    "certify_girth_above",
    "ch_certify",
    "collapse_two_row",
    "girth_exact",
    "gram_power",
    "lift",
    "triangle",
    "triangle_matrix",
    "walk_has_lifted_cycle",
]

__version__ = "0.1.0"
