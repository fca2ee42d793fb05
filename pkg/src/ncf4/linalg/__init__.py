"""Sparse linear algebra over Z_p and Q for the F4 matrix step."""

from .zp import (
    BACKEND,
    SparseMatrix,
    SparseRow,
    branchfree_fix,
    mersenne_reduce,
    normalize_row,
    rref_mod_p,
    staircase_sort,
)

__all__ = [
    "BACKEND",
    "SparseMatrix",
    "SparseRow",
    "branchfree_fix",
    "mersenne_reduce",
    "normalize_row",
    "rref_mod_p",
    "staircase_sort",
]
