"""Structure of finite Boolean inverse monoids: splitting into products of
matrix biases over groups, type vectors of idempotents, and indexes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import caps
from .bias import FiniteBias, boolean_closure, congruence_lattice
from .errors import ValidationError
from .groups import FiniteGroup, is_isomorphic
from .rook import RookBias, corner_iso, group_zero_bias, lift_hom, rook_bias
from .semigroup import green_relations, product_semigroup

INDEX_INFINITY = math.inf


@dataclass(frozen=True)
class Factor:
    n: int
    group: FiniteGroup
    atoms: tuple[int, ...]      # the atoms of S below this factor's central idempotent
    central: int                # the central idempotent e_a
    matrices: RookBias          # M_n(G^0)
    component: np.ndarray       # S index -> matrix index of e_a * x


@dataclass(frozen=True)
class Decomposition:
    factors: tuple[Factor, ...]
    product: FiniteBias         # the product of the factor matrix biases
    iso: np.ndarray             # S index -> product index
    inverse: np.ndarray = field(repr=False)

    @property
    def signature(self) -> list[tuple[int, int]]:
        return [(f.n, f.group.order) for f in self.factors]

    def to_json(self) -> dict:
        return {"factors": [{"n": f.n, "group": f.group.to_json()} for f in self.factors],
                "iso_checked": True}


def _central(S: FiniteBias, e: int) -> bool:
    return bool(np.array_equal(S.mul[e], S.mul[:, e]))


def decompose(S: FiniteBias) -> Decomposition:
    """Split S into a product of M_n(G^0) factors, one per D-class of atoms.

    Each factor is obtained from the corner isomorphism for its atoms; the
    combined map S -> product is verified bijective and multiplicative.
    """
    S = boolean_closure(S)
    green = green_relations(S)
    classes: list[list[int]] = []
    for a in S.atoms:
        for cls in classes:
            if green.d_witness(cls[0], a) is not None:
                cls.append(a)
                break
        else:
            classes.append([a])
    raw = []
    for cls in classes:
        e = S.join_all(cls)
        if not _central(S, e):
            raise AssertionError(f"join of a D-class of atoms is not central: {S.names[e]}")
        ci = corner_iso(S, cls)
        local = ci.local_bias
        nonzero = [k for k in range(local.size) if k != local.zero]
        pos = {k: p for p, k in enumerate(nonzero)}
        if len(local.idempotents) != 2:
            raise AssertionError("corner of an atom has more than two idempotents")
        G = FiniteGroup([[pos[local.m(x, y)] for y in nonzero] for x in nonzero],
                        [local.names[x] for x in nonzero])
        Gz = group_zero_bias(G)
        to_gz = np.array([0 if k == local.zero else pos[k] + 1 for k in range(local.size)])
        M = rook_bias(len(cls), Gz)
        relabel = lift_hom(to_gz, local, Gz, ci.matrices, M)
        # component of x is phi(e x), read through the relabelling
        cpos = np.full(S.size, -1, dtype=np.int64)
        cpos[list(ci.corner)] = np.arange(len(ci.corner))
        comp = relabel[ci.phi[cpos[S.mul[e]]]]
        raw.append(Factor(len(cls), G, tuple(cls), e, M, comp))
    factors = tuple(sorted(raw, key=lambda f: (-f.n, f.group.order, f.atoms[0])))
    # verify 1 is the orthogonal join of the central idempotents
    if S.join_all(f.central for f in factors) != S.top:
        raise AssertionError("central idempotents do not join to the unit")
    prod_sg = product_semigroup(*(f.matrices for f in factors))
    product = boolean_closure(prod_sg)
    iso = np.zeros(S.size, dtype=np.int64)
    for f in factors:
        iso = iso * f.matrices.size + f.component
    if len(np.unique(iso)) != S.size or product.size != S.size:
        raise AssertionError("decomposition map is not a bijection")
    if not np.array_equal(product.mul[iso[:, None], iso[None, :]], iso[S.mul]):
        raise AssertionError("decomposition map is not multiplicative")
    if not np.array_equal(product.inv[iso], iso[S.inv]):
        raise AssertionError("decomposition map does not preserve inverses")
    inverse = np.empty_like(iso)
    inverse[iso] = np.arange(S.size)
    return Decomposition(factors, product, iso, inverse)


def same_factors(a: Decomposition | list, b: Decomposition | list) -> bool:
    """Equal multisets of (n, [G]), groups compared up to isomorphism."""
    fa = [(f.n, f.group) for f in a.factors] if isinstance(a, Decomposition) else list(a)
    fb = [(f.n, f.group) for f in b.factors] if isinstance(b, Decomposition) else list(b)
    if len(fa) != len(fb):
        return False
    left = list(fb)
    for n, G in fa:
        for k, (m, H) in enumerate(left):
            if n == m and is_isomorphic(G, H):
                del left[k]
                break
        else:
            return False
    return True


# ---------------------------------------------------------------- type monoid

@dataclass(frozen=True)
class TypeMonoid:
    """Typ S as (Z+)^k: the type of an idempotent counts atoms per factor."""

    k: int
    unit: tuple[int, ...]
    typ: dict[int, tuple[int, ...]]

    def to_json(self) -> dict:
        return {"k": self.k, "unit": list(self.unit),
                "typ": {str(e): list(v) for e, v in sorted(self.typ.items())}}


def type_monoid(S: FiniteBias, decomposition: Decomposition | None = None) -> TypeMonoid:
    """Type vectors of all idempotents; checks additivity and that equal
    types coincide with D-equivalence."""
    S = boolean_closure(S)
    dec = decomposition or decompose(S)
    pos = {a: k for k, a in enumerate(S.atoms)}
    class_masks = [sum(1 << pos[a] for a in f.atoms) for f in dec.factors]
    typ = {e: tuple(bin(S.atom_mask(e) & m).count("1") for m in class_masks) for e in S.idempotents}
    green = green_relations(S)
    E = S.idempotents
    for e in E:
        for f in E:
            if (typ[e] == typ[f]) != (green.d_witness(e, f) is not None):
                raise AssertionError(f"type does not match D-class at {(S.names[e], S.names[f])}")
            if S.m(e, f) == S.zero:
                if typ[S.ejoin(e, f)] != tuple(u + v for u, v in zip(typ[e], typ[f])):
                    raise AssertionError("type is not additive on orthogonal idempotents")
    return TypeMonoid(len(dec.factors), typ[S.top], typ)


def typ_leq(u: tuple[int, ...], v: tuple[int, ...]) -> bool:
    """The algebraic order of (Z+)^k: u <= v iff v = u + w for some w."""
    return all(a <= b for a, b in zip(u, v))


# ---------------------------------------------------------------- indexes

def element_index(x: int, S: FiniteBias) -> int | float:
    """0 for the zero; otherwise the least n with d(x^n) = r(x^n)."""
    if x == S.zero:
        return 0
    p = x
    for n in range(1, S.size + 2):
        if S.dom(p) == S.ran(p):
            return n
        p = S.m(p, x)
    return INDEX_INFINITY


def bias_index(S: FiniteBias) -> int | float:
    return max(element_index(x, S) for x in range(S.size))


def vector_index(t: tuple[int, ...]) -> int:
    """Largest m with m*v <= t for some nonzero v in (Z+)^k, by search over v."""
    best = 0
    for v in itertools.product(*(range(c + 1) for c in t)):
        if any(v):
            best = max(best, min(c // a for c, a in zip(t, v) if a))
    return best


@dataclass(frozen=True)
class IndexReport:
    bias_index: int
    monoid_index: int
    per_idempotent: dict[int, int]

    @property
    def consistent(self) -> bool:
        return self.bias_index == self.monoid_index

    def to_json(self) -> dict:
        return {"index": self.bias_index, "monoid_index": self.monoid_index,
                "consistent": self.consistent}


def index_consistency(S: FiniteBias, tm: TypeMonoid | None = None) -> IndexReport:
    """Element-side index of S against the largest index of a type vector."""
    S = boolean_closure(S)
    tm = tm or type_monoid(S)
    per = {e: vector_index(v) for e, v in tm.typ.items()}
    return IndexReport(int(bias_index(S)), max(per.values()), per)


@dataclass(frozen=True)
class PrimenessReport:
    k: int
    prime: bool
    subdirectly_irreducible: bool
    finitely_subdirectly_irreducible: bool

    @property
    def consistent(self) -> bool:
        return not self.finitely_subdirectly_irreducible or self.k == 1


def primeness_and_sdi(S: FiniteBias, cap: int = caps.CONGRUENCE_ELEMENTS) -> PrimenessReport:
    S = boolean_closure(S)
    k = type_monoid(S).k
    lat = congruence_lattice(S, cap)
    return PrimenessReport(k, k == 1, lat.subdirectly_irreducible, lat.finitely_subdirectly_irreducible)


def matrix_product_bias(factors: list[tuple[int, FiniteGroup]]) -> FiniteBias:
    """The product of M_n(G^0) over the given (n, G) pairs."""
    if not factors:
        raise ValidationError("empty factor list")
    parts = [rook_bias(n, group_zero_bias(G)) for n, G in factors]
    return boolean_closure(product_semigroup(*parts))
