"""Projection-lattice logic, internal reals and beable subalgebras at matrix scale."""
from .algebra import OperatorAlgebra, algebras_equal, block_direct_sum, commutant, generate
from .beable import (
    MeasurementContext,
    a_priv_check,
    bilateral_z_rotation,
    construct_ignorance_measure,
    cyclic_subspace,
    definability_test,
    is_beable,
    maximal_beable,
)
from .lattice import sasaki_arrow, sasaki_product, takeuti_commutator
from .linalg import Tolerance, hermitian_eig
from .proplang import Environment, born_probability, parse, truth
from .reals import eq_truth, from_internal, leq_truth, to_internal

__version__ = "0.1.0"

__all__ = [
    "Environment",
    "MeasurementContext",
    "OperatorAlgebra",
    "Tolerance",
    "a_priv_check",
    "algebras_equal",
    "bilateral_z_rotation",
    "block_direct_sum",
    "born_probability",
    "commutant",
    "construct_ignorance_measure",
    "cyclic_subspace",
    "definability_test",
    "eq_truth",
    "from_internal",
    "generate",
    "hermitian_eig",
    "is_beable",
    "leq_truth",
    "maximal_beable",
    "parse",
    "sasaki_arrow",
    "sasaki_product",
    "takeuti_commutator",
    "to_internal",
    "truth",
]
