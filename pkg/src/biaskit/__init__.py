"""Finite Boolean inverse semigroups (biases): tables, rook matrices, type
structure, matrix-bias varieties and the word problem for free biases."""

from __future__ import annotations

from .bias import (BiasCongruence, FiniteBias, boolean_closure, congruence_lattice, evaluate_term,
                   identity_counterexample, satisfies_identity)
from .errors import (BiasError, InconclusiveError, ResourceCapError, TermSyntaxError,
                     ValidationError)
from .freebias import canonicalize, decide_equal, decide_leq, falsify, universal_bias
from .groups import FiniteGroup, cyclic_group, symmetric_group, trivial_group, wreath_product
from .rook import RookBias, group_zero_bias, rook_bias
from .semigroup import FiniteInverseSemigroup, PartialInjection, symmetric_inverse_monoid
from .terms import parse, to_string
from .typestructure import decompose, index_consistency, type_monoid
from .variety import VarietySpec, check_radical_chain, matrix_bias_embeds, units_of_matrix_bias

__all__ = [
    "BiasCongruence", "BiasError", "FiniteBias", "FiniteGroup", "FiniteInverseSemigroup",
    "InconclusiveError", "PartialInjection", "ResourceCapError", "RookBias", "TermSyntaxError",
    "ValidationError", "VarietySpec", "boolean_closure", "canonicalize", "check_radical_chain",
    "congruence_lattice", "cyclic_group", "decide_equal", "decide_leq", "decompose", "evaluate_term",
    "falsify", "group_zero_bias", "identity_counterexample", "index_consistency",
    "matrix_bias_embeds", "parse", "rook_bias", "satisfies_identity", "symmetric_group",
    "symmetric_inverse_monoid", "to_string", "trivial_group", "type_monoid", "units_of_matrix_bias",
    "universal_bias", "wreath_product",
]
