"""Shared builders for the test suite (cached: structures are immutable)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from biaskit.bias import FiniteBias, boolean_closure
from biaskit.groups import FiniteGroup, cyclic_group, symmetric_group, trivial_group
from biaskit.rook import RookBias, group_zero_bias, rook_bias
from biaskit.semigroup import (FiniteInverseSemigroup, PartialInjection, group_with_zero, product_semigroup,
                               symmetric_inverse_monoid)

GROUPS = {"triv": trivial_group, "Z2": lambda: cyclic_group(2), "Z3": lambda: cyclic_group(3),
          "Z4": lambda: cyclic_group(4), "S3": lambda: symmetric_group(3)}


@lru_cache(maxsize=None)
def group(name: str) -> FiniteGroup:
    return GROUPS[name]()


@lru_cache(maxsize=None)
def sym(n: int):
    """(I_n as a bias, its PartialInjection list, element -> index)."""
    S, elems = symmetric_inverse_monoid(n)
    return boolean_closure(S), elems, {e: k for k, e in enumerate(elems)}


def pi(n: int, *pairs) -> int:
    """Index in I_n of the partial injection with the given (source, target) pairs."""
    return sym(n)[2][PartialInjection(n, pairs)]


def ident(n: int, *points) -> int:
    return pi(n, *((p, p) for p in points))


@lru_cache(maxsize=None)
def gz(name: str) -> FiniteBias:
    return group_zero_bias(group(name))


@lru_cache(maxsize=None)
def mat(n: int, name: str) -> RookBias:
    return rook_bias(n, gz(name))


@lru_cache(maxsize=None)
def i2_times_z3() -> FiniteBias:
    return boolean_closure(product_semigroup(sym(2)[0], group_with_zero(cyclic_group(3))))


def library() -> dict[str, FiniteBias]:
    """The small biases most property tests sweep over."""
    return {"I1": sym(1)[0], "I2": sym(2)[0], "I3": sym(3)[0], "Z2^0": gz("Z2"), "Z3^0": gz("Z3"),
            "S3^0": gz("S3"), "M2(Z2^0)": mat(2, "Z2"), "I2xZ3^0": i2_times_z3()}


def relabel(S: FiniteBias, perm) -> FiniteBias:
    """A copy of S with element x renamed perm[x]."""
    perm = np.asarray(perm)
    inv_perm = np.argsort(perm)
    mul = perm[S.mul[inv_perm[:, None], inv_perm[None, :]]]
    return boolean_closure(FiniteInverseSemigroup(mul, perm[S.inv[inv_perm]]))
