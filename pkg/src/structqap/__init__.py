"""Exact recognition, decomposition and solution of structured QAP instances."""

from .matrix import (
    DimensionError,
    ExactMatrix,
    MatrixFormatError,
    Permutation,
    apply_permutation,
    compose,
    identity,
    invert,
    parse_matrix,
    qap_objective,
    read_matrix,
    write_matrix,
)

__version__ = "0.1.0"
