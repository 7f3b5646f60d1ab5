"""Finite quandles, their congruence lattices and the latin quandles of size 16p."""

from .quandle import QuandleTable, affine, coset_quandle, direct_product, read_table, write_table
from .conglat import Congruence, CongruenceLattice, all_congruences
from .quiso import are_isomorphic, fingerprint

__all__ = [
    "QuandleTable",
    "affine",
    "coset_quandle",
    "direct_product",
    "read_table",
    "write_table",
    "Congruence",
    "CongruenceLattice",
    "all_congruences",
    "are_isomorphic",
    "fingerprint",
]

__version__ = "0.1.0"
