"""Partition categories, their Kronecker-delta realizations, the outline
functor NCPart_{n^2} -> NCPair_n and closure experiments on projective
intertwiner categories."""

from . import kernels
from .closure import (
    ClosureReport,
    ClosureResult,
    GeneratorSet,
    close,
    compare_twisted,
    half_rotate,
    verify_pu_po,
    verify_theorem_T,
)
from .echelon import HomSpaceBasis, membership, span_dimension
from .fattening import fatten, unfatten
from .operators import (
    SparseOperator,
    adjoint_op,
    check_conjugate_equations,
    compose_ops,
    duality_from_matrix,
    gram_matrix,
    inner_product,
    realize,
    realize_twisted_cross,
    realize_twisted_pair,
    tensor_ops,
)
from .partition import (
    ParseError,
    PartitionError,
    SetPartition,
    compose,
    enumerate_nc_pairings,
    enumerate_nc_partitions,
    enumerate_pairings,
    involute,
    is_noncrossing,
    parse,
    serialize,
    tensor,
)
from .scalars import DiagramCombination, HalfPowerScalar

__version__ = "0.1.0"

__all__ = [
    "ClosureReport", "ClosureResult", "DiagramCombination", "GeneratorSet", "HalfPowerScalar",
    "HomSpaceBasis", "ParseError", "PartitionError", "SetPartition", "SparseOperator",
    "adjoint_op", "check_conjugate_equations", "close", "compare_twisted", "compose", "compose_ops",
    "duality_from_matrix", "enumerate_nc_pairings", "enumerate_nc_partitions", "enumerate_pairings",
    "fatten", "gram_matrix", "half_rotate", "inner_product", "involute", "is_noncrossing", "kernels",
    "membership", "parse", "realize", "realize_twisted_cross", "realize_twisted_pair", "serialize",
    "span_dimension", "tensor", "tensor_ops", "unfatten", "verify_pu_po", "verify_theorem_T",
]
