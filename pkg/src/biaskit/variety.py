"""Varieties at finite scale: unit groups of matrix biases, the embedding
criterion between M_m(G^0) and M_n(H^0), group-variety membership through
relatively free groups, radicals and the radical chain checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from . import caps
from .bias import congruence_lattice
from .errors import InconclusiveError, ValidationError
from .groups import (FiniteGroup, direct_product, find_monomorphism, group_from_json, normal_subgroups,
                     trivial_group, wreath_product)
from .rook import RookBias, group_zero_bias, rook_bias


# ---------------------------------------------------------------- units

@dataclass(frozen=True)
class UnitGroup:
    matrices: RookBias
    units: tuple[int, ...]       # matrix indices of the invertible elements
    group: FiniteGroup           # the unit group, elements in the order of ``units``
    wreath: FiniteGroup          # G wr S_n
    iso: np.ndarray              # wreath index -> matrix index


def units_of_matrix_bias(n: int, G: FiniteGroup, cap: int = caps.WREATH_ORDER) -> UnitGroup:
    """Invertibles of M_n(G^0), matched against G wr S_n by
    [g; s] -> the matrix with g_i at (i, s^-1(i)), i.e. entry (s(j), j) = g_s(j)."""
    M = rook_bias(n, group_zero_bias(G))
    units = M.units()
    pos = {x: k for k, x in enumerate(units)}
    U = FiniteGroup([[pos[M.m(x, y)] for y in units] for x in units], [M.names[x] for x in units],
                    check=False)
    W = wreath_product(G, n, cap)
    perms = list(itertools.permutations(range(n)))
    tuples = list(itertools.product(range(G.order), repeat=n))
    iso = np.empty(W.order, dtype=np.int64)
    for w, (p, t) in enumerate(itertools.product(perms, tuples)):
        mat = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            mat[p[j], j] = t[p[j]] + 1
        iso[w] = M.index(mat)
    if sorted(iso.tolist()) != sorted(units):
        raise AssertionError("wreath map is not a bijection onto the units")
    Wm = W.mul.astype(np.int64)
    if not np.array_equal(M.mul[iso[:, None], iso[None, :]], iso[Wm]):
        raise AssertionError("wreath map is not multiplicative")
    return UnitGroup(M, units, U, W, iso)


# ---------------------------------------------------------------- embeddings

@dataclass(frozen=True)
class EmbedVerdict:
    embeds: bool
    reason: str
    monomorphism: list[int] | None = None

    def to_json(self) -> dict:
        return {"embeds": self.embeds, "reason": self.reason}


def matrix_bias_embeds(m: int, G: FiniteGroup, n: int, H: FiniteGroup,
                       cap: int = caps.WREATH_ORDER) -> EmbedVerdict:
    """Does M_m(G^0) embed in M_n(H^0)?  Decided as m <= n and G embedding
    in H wr S_{n // m}."""
    if m < 1 or n < 1:
        raise ValidationError("matrix orders must be positive")
    if m > n:
        return EmbedVerdict(False, f"m = {m} exceeds n = {n}")
    k = n // m
    W = wreath_product(H, k, cap)
    mono = find_monomorphism(G, W)
    if mono is None:
        return EmbedVerdict(False, f"no monomorphism into H wr S_{k}")
    return EmbedVerdict(True, f"monomorphism into H wr S_{k}", mono)


def congruence_count_check(n: int, G: FiniteGroup, cap: int = caps.CONGRUENCE_ELEMENTS) -> tuple[int, int]:
    """(|Con M_n(G^0)|, |NSub G| + 1); equal on every input."""
    M = rook_bias(n, group_zero_bias(G))
    return len(congruence_lattice(M, cap)), len(normal_subgroups(G)) + 1


# ---------------------------------------------------------------- group varieties

@dataclass(frozen=True)
class RelativelyFreeGroup:
    """The k-generated subgroup of H^(H^k) spanned by the coordinate projections.

    ``step[f, i]`` is the index of f * pi_i; element 0 is the identity.
    """

    rank: int
    elements: np.ndarray
    step: np.ndarray
    parent: np.ndarray     # BFS tree: element reached as parent * pi_{via}
    via: np.ndarray


def relatively_free_group(H: FiniteGroup, k: int,
                          coord_cap: int = caps.VARIETY_COORDINATES,
                          order_cap: int = caps.RELATIVELY_FREE_ORDER) -> RelativelyFreeGroup:
    C = H.order ** k
    if C > coord_cap:
        raise InconclusiveError("relatively free group coordinates", coord_cap, C)
    coords = np.array(list(itertools.product(range(H.order), repeat=k)), dtype=np.int64).reshape(C, k)
    dtype = np.uint8 if H.order <= 256 else np.int32
    gens = [coords[:, i].astype(dtype) for i in range(k)]
    hm = H.mul.astype(dtype)
    ident = np.full(C, H.identity, dtype=dtype)
    elems = [ident]
    index = {ident.tobytes(): 0}
    parent, via = [-1], [-1]
    step_rows: list[list[int]] = []
    q = 0
    while q < len(elems):
        row = []
        for i, g in enumerate(gens):
            y = hm[elems[q], g]
            key = y.tobytes()
            if key not in index:
                if len(elems) >= order_cap:
                    raise InconclusiveError("relatively free group order", order_cap)
                index[key] = len(elems)
                elems.append(y)
                parent.append(q)
                via.append(i)
            row.append(index[key])
        step_rows.append(row)
        q += 1
    return RelativelyFreeGroup(k, np.array(elems), np.array(step_rows, dtype=np.int64).reshape(-1, k),
                               np.array(parent), np.array(via))


def _variety_generator(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    return groups[0] if len(groups) == 1 else direct_product(list(groups))


def group_variety_member(G: FiniteGroup, generators: Sequence[FiniteGroup],
                         coord_cap: int = caps.VARIETY_COORDINATES,
                         order_cap: int = caps.RELATIVELY_FREE_ORDER) -> bool:
    """Is G in the group variety generated by ``generators``?

    G (k-generated) belongs iff some generating k-tuple of G is the image of
    the projections under a homomorphism from the relatively free group.
    Raises InconclusiveError when a resource bound is hit.
    """
    if not generators:
        raise ValidationError("a variety needs at least one generator")
    gens = G.minimal_generating_set()
    k = len(gens)
    if k == 0:
        return True
    H = _variety_generator(generators)
    if H.order == 1:
        return False
    F = relatively_free_group(H, k, coord_cap, order_cap)
    tuples = [t for t in itertools.product(range(G.order), repeat=k) if len(G.generated(t)) == G.order]
    T = np.array(tuples, dtype=np.int64)                    # (m, k)
    gm = G.mul.astype(np.int64)
    N = len(F.elements)
    val = np.empty((N, len(T)), dtype=np.int64)
    val[0] = G.identity
    for f in range(1, N):
        val[f] = gm[val[F.parent[f]], T[:, F.via[f]]]
    ok = np.ones(len(T), dtype=bool)
    for i in range(k):
        ok &= (val[F.step[:, i]] == gm[val, T[None, :, i]]).all(axis=0)
    return bool(ok.any())


# ---------------------------------------------------------------- bias varieties

@dataclass(frozen=True)
class VarietySpec:
    """The bias variety generated by M_{n_i}(G_i^0) over the listed pairs."""

    generators: tuple[tuple[int, FiniteGroup], ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.generators:
            raise ValidationError("a variety needs at least one generator")
        if any(n < 1 for n, _ in self.generators):
            raise ValidationError("matrix orders must be positive")

    @classmethod
    def from_json(cls, data: dict, builtin=None) -> VarietySpec:
        gens = []
        for g in data["generators"]:
            grp = g["group"]
            G = builtin(grp) if isinstance(grp, str) and builtin is not None else group_from_json(grp)
            gens.append((int(g["n"]), G))
        return cls(tuple(gens))

    def to_json(self) -> dict:
        return {"generators": [{"n": n, "group": G.to_json()} for n, G in self.generators]}


def variety_index(V: VarietySpec) -> int:
    return max(n for n, _ in V.generators)


def radical(n: int, V: VarietySpec, cap: int = caps.WREATH_ORDER) -> list[FiniteGroup] | None:
    """Generators G_i wr S_{n_i // n} over n <= n_i, or None when empty."""
    if n < 1:
        raise ValidationError("radical order must be positive")
    out = [wreath_product(G, ni // n, cap) for ni, G in V.generators if n <= ni]
    return out or None


def matrix_variety_member(n: int, G: FiniteGroup, V: VarietySpec, cap: int = caps.WREATH_ORDER) -> bool:
    rad = radical(n, V, cap)
    if rad is None:
        return False
    return group_variety_member(G, rad)


@dataclass
class ChainReport:
    checks: list[tuple[str, bool | None]] = field(default_factory=list)

    def record(self, label: str, fn) -> None:
        try:
            self.checks.append((label, bool(fn())))
        except InconclusiveError as exc:
            self.checks.append((label + f" [{exc}]", None))

    @property
    def failed(self) -> list[str]:
        return [lab for lab, ok in self.checks if ok is False]

    @property
    def inconclusive(self) -> list[str]:
        return [lab for lab, ok in self.checks if ok is None]

    @property
    def passed(self) -> bool:
        return not self.failed and not self.inconclusive

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": len(self.checks),
                "failed": self.failed, "inconclusive": self.inconclusive}


def check_radical_chain(V: VarietySpec, cap: int = caps.WREATH_ORDER) -> ChainReport:
    """Check, at generator level:
    K wr S_m lies in Rad_n for each generator K of Rad_{mn} (mn <= index);
    Rad_{n+1} lies in Rad_n; and each generating M_{n_i}(G_i^0) is in V."""
    rep = ChainReport()
    top = variety_index(V)
    rads = {n: radical(n, V, cap) for n in range(1, top + 2)}
    if rads[top + 1] is not None:
        rep.checks.append(("radical above the index is empty", False))
    for m in range(1, top + 1):
        for n in range(1, top // m + 1):
            target = rads[n]
            for j, K in enumerate(rads[m * n]):
                rep.record(f"Wr_{m}(Rad_{m * n}) generator {j} in Rad_{n}",
                           lambda K=K, m=m, target=target: group_variety_member(wreath_product(K, m, cap),
                                                                                target))
    for n in range(1, top):
        for j, K in enumerate(rads[n + 1]):
            rep.record(f"Rad_{n + 1} generator {j} in Rad_{n}",
                       lambda K=K, n=n: group_variety_member(K, rads[n]))
    for i, (ni, G) in enumerate(V.generators):
        rep.record(f"generator {i} is a member", lambda ni=ni, G=G: matrix_variety_member(ni, G, V, cap))
    return rep


def symmetric_variety(n: int) -> VarietySpec:
    """Var(I_n) = Var(M_n(triv^0))."""
    return VarietySpec(((n, trivial_group()),))
