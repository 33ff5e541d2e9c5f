"""Associative polynomial functions over finite bounded distributive lattices."""

from .lattice import Lattice, boolean, build_from_covers, chain, is_convex, med, product
from .poly import FunctionTable, PolynomialFn, evaluate, from_table, is_polynomial_median, minimal_alpha
from .assoc import (
    AssocParams,
    VariadicPolynomial,
    VariadicTable,
    classify_nary,
    construct_nary,
    enumerate_associative_nary,
    eval_variadic,
    extend_to_variadic,
    is_associative_nary,
    is_associative_variadic,
)

__version__ = "0.1.0"
