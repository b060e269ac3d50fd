"""Finite groups as Cayley tables, wreath products with symmetric groups,
monomorphism search and normal subgroups."""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Sequence

import numpy as np

from . import caps
from .errors import ResourceCapError, ValidationError


def _table_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[a, b]`` is the index of the product ``a*b``.
    """

    def __init__(self, mul, names: Sequence[str] | None = None, *, check: bool = True):
        mul = np.asarray(mul)
        n = mul.shape[0]
        if mul.ndim != 2 or mul.shape != (n, n) or n == 0:
            raise ValidationError("group table must be a non-empty square array")
        if mul.min() < 0 or mul.max() >= n:
            raise ValidationError("group table entry out of range")
        self.mul = mul.astype(_table_dtype(n))
        self.mul.setflags(write=False)
        self.order = n
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise ValidationError("names do not match table size")
        ids = [e for e in range(n) if np.array_equal(self.mul[e], np.arange(n))
               and np.array_equal(self.mul[:, e], np.arange(n))]
        if not ids:
            raise ValidationError("no two-sided identity")
        self.identity = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == self.identity)
        inv[rows] = cols
        if (inv < 0).any():
            x = int(np.argmax(inv < 0))
            raise ValidationError(f"element {self.names[x]} has no inverse", witness=(x,))
        self.inv = inv
        if check:
            bad = _first_nonassociative(self.mul)
            if bad is not None:
                raise ValidationError("multiplication is not associative", witness=bad)
        self._rows = self.mul.tolist()
        self._orders: list[int] | None = None

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def m(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def element_order(self, g: int) -> int:
        return self.orders()[g]

    def orders(self) -> list[int]:
        if self._orders is None:
            out = []
            for g in range(self.order):
                k, x = 1, g
                while x != self.identity:
                    x = self._rows[x][g]
                    k += 1
                out.append(k)
            self._orders = out
        return self._orders

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens`` (finite, so closure under products suffices)."""
        gens = list(gens)
        seen = {self.identity}
        todo = [self.identity]
        while todo:
            x = todo.pop()
            for s in gens:
                y = self._rows[x][s]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return frozenset(seen)

    def minimal_generating_set(self) -> tuple[int, ...]:
        """Lexicographically first generating set of least size."""
        if self.order == 1:
            return ()
        # identity never helps
        cand = [g for g in range(self.order) if g != self.identity]
        for k in range(1, self.order):
            for combo in itertools.combinations(cand, k):
                if len(self.generated(combo)) == self.order:
                    return combo
        raise AssertionError("unreachable")

    def conjugacy_class(self, g: int) -> frozenset[int]:
        return frozenset(self._rows[self._rows[h][g]][int(self.inv[h])] for h in range(self.order))

    def subtable(self, elements: Sequence[int]) -> FiniteGroup:
        """The subgroup on ``elements`` as a standalone group (order as given)."""
        pos = {x: i for i, x in enumerate(elements)}
        tab = [[pos[self._rows[a][b]] for b in elements] for a in elements]
        return FiniteGroup(tab, [self.names[x] for x in elements], check=False)

    def to_json(self) -> dict:
        return {"elements": list(self.names), "mul": self.mul.tolist()}


def _first_nonassociative(mul: np.ndarray):
    n = mul.shape[0]
    m = mul.astype(np.int64)
    step = max(1, 2_000_000 // (n * n))
    for lo in range(0, n, step):
        a = np.arange(lo, min(n, lo + step))
        left = m[m[a]]                      # (a*b)*c
        right = np.take(m[a], m, axis=1)    # a*(b*c)
        bad = np.argwhere(left != right)
        if bad.size:
            i, b, c = bad[0]
            return (int(a[i]), int(b), int(c))
    return None


# ---------------------------------------------------------------- builders

def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["1"])


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError("cyclic group order must be positive")
    idx = np.arange(n)
    names = ["1", "g"] + [f"g^{k}" for k in range(2, n)]
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, names[:n], check=False)


def _perm_name(p: Sequence[int]) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def permutation_group(perms: Sequence[Sequence[int]]) -> FiniteGroup:
    """Group of 0-based image tuples under ``(p*q)[i] = p[q[i]]`` (apply q first)."""
    perms = [tuple(p) for p in perms]
    pos = {p: i for i, p in enumerate(perms)}
    if len(pos) != len(perms):
        raise ValidationError("duplicate permutations")
    tab = [[pos[tuple(p[i] for i in q)] for q in perms] for p in perms]
    return FiniteGroup(tab, [_perm_name(p) for p in perms], check=False)


def symmetric_group(n: int) -> FiniteGroup:
    return permutation_group(list(itertools.permutations(range(n))))


def permutation_closure(generators: Sequence[Sequence[int]], degree: int | None = None,
                        cap: int = caps.WREATH_ORDER) -> FiniteGroup:
    gens = [tuple(g) for g in generators]
    if degree is None:
        degree = max((len(g) for g in gens), default=1)
    ident = tuple(range(degree))
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    seen = {ident: None}
    order = [ident]
    q = deque([ident])
    while q:
        p = q.popleft()
        for g in gens:
            r = tuple(p[i] for i in g)
            if r not in seen:
                seen[r] = None
                order.append(r)
                if len(order) > cap:
                    raise ResourceCapError("group order", cap)
                q.append(r)
    return permutation_group(order)


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a - 1] = b - 1
    return tuple(img)


def group_from_json(data: dict) -> FiniteGroup:
    if "mul" in data:
        return FiniteGroup(data["mul"], data.get("elements"))
    if "permutation_generators" in data:
        gens = data["permutation_generators"]
        degree = max((max(c) for g in gens for c in g if c), default=1)
        return permutation_closure([cycles_to_perm(g, degree) for g in gens], degree)
    raise ValidationError("group JSON needs 'mul' or 'permutation_generators'")


def direct_product(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    """Direct product; element order is lexicographic in the factor indices."""
    if not groups:
        return trivial_group()
    tab = groups[0].mul.astype(np.int64)
    names = list(groups[0].names)
    for h in groups[1:]:
        a, m = tab.shape[0], h.order
        tab = tab[:, None, :, None] * m + h.mul.astype(np.int64)[None, :, None, :]
        tab = tab.reshape(a * m, a * m)
        names = [f"{x},{y}" for x in names for y in h.names]
    return FiniteGroup(tab, [f"({x})" if "," in x else x for x in names], check=False)


# ---------------------------------------------------------------- wreath

def wreath_product(G: FiniteGroup, n: int, cap: int = caps.WREATH_ORDER) -> FiniteGroup:
    """``G wr S_n`` on pairs [g_1..g_n; s] with
    [g; a][h; b] = [g_1 h_{a^-1(1)}, ..., g_n h_{a^-1(n)}; a b].

    Elements are ordered permutation-major (permutations lexicographic),
    then by the coordinate tuple.
    """
    size = G.order ** n * _factorial(n)
    if size > cap:
        raise ResourceCapError("wreath product order", cap, size)
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    tuples = np.array(list(itertools.product(range(G.order), repeat=n)), dtype=np.int64).reshape(-1, n)
    P, T = len(perms), len(tuples)
    gp = np.repeat(perms, T, axis=0)              # (size, n)
    gt = np.tile(tuples, (P, 1))                  # (size, n)
    pinv = np.argsort(gp, axis=1)
    perm_code = {tuple(p): i for i, p in enumerate(perms.tolist())}
    weights = G.order ** np.arange(n - 1, -1, -1)
    gm = G.mul.astype(np.int64)
    tab = np.empty((size, size), dtype=np.int64)
    perm_index = np.array([perm_code[tuple(p)] for p in perms.tolist()])
    # compose permutation codes through a lookup table
    comp = np.empty((P, P), dtype=np.int64)
    for i, a in enumerate(perms.tolist()):
        for j, b in enumerate(perms.tolist()):
            comp[i, j] = perm_code[tuple(a[b[k]] for k in range(n))]
    pidx = np.repeat(perm_index, T)
    for x in range(size):
        h_shift = gt[:, pinv[x]]                  # h_{a^-1(i)} for every right factor
        coords = gm[gt[x][None, :], h_shift]
        tab[x] = comp[pidx[x], pidx] * T + coords @ weights
    names = ["[" + ",".join(G.names[c] for c in t) + ";" + _perm_name(p) + "]"
             for p, t in zip(gp.tolist(), gt.tolist())]
    return FiniteGroup(tab, names, check=False)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------- homomorphisms

def extend_to_hom(G: FiniteGroup, gens: Sequence[int], H: FiniteGroup,
                  images: Sequence[int]) -> list[int] | None:
    """Extend ``gens[i] -> images[i]`` along the Cayley graph; None if ill-defined."""
    phi = [-1] * G.order
    phi[G.identity] = H.identity
    q = deque([G.identity])
    while q:
        x = q.popleft()
        for s, t in zip(gens, images):
            y = G.m(x, s)
            v = H.m(phi[x], t)
            if phi[y] < 0:
                phi[y] = v
                q.append(y)
            elif phi[y] != v:
                return None
    if min(phi) < 0:
        return None  # gens do not generate G
    return phi


def find_monomorphism(G: FiniteGroup, H: FiniteGroup, cap: int = 10**7) -> list[int] | None:
    """First injective homomorphism G -> H found by generator-image backtracking."""
    if G.order > H.order or H.order % G.order:
        return None
    gens = G.minimal_generating_set()
    if not gens:
        return [H.identity]
    g_ord, h_ord = G.orders(), H.orders()
    cands = [[t for t in range(H.order) if h_ord[t] == g_ord[s]] for s in gens]
    # pairwise product orders must also match
    pair_ord = {(i, j): g_ord[G.m(gens[i], gens[j])] for i in range(len(gens)) for j in range(i)}
    work = 0
    chosen: list[int] = []

    def rec(i: int):
        nonlocal work
        if i == len(gens):
            phi = extend_to_hom(G, gens, H, chosen)
            if phi is not None and len(set(phi)) == G.order:
                return phi
            return None
        for t in cands[i]:
            work += 1
            if work > cap:
                raise ResourceCapError("monomorphism search", cap)
            if any(h_ord[H.m(t, chosen[j])] != pair_ord[(i, j)] for j in range(i)):
                continue
            chosen.append(t)
            res = rec(i + 1)
            chosen.pop()
            if res is not None:
                return res
        return None

    return rec(0)


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, cap: int = caps.GROUP_ISO_ORDER) -> bool:
    if G.order != H.order:
        return False
    if G.order > cap:
        raise ResourceCapError("group isomorphism order", cap, G.order)
    if sorted(G.orders()) != sorted(H.orders()) or G.is_abelian() != H.is_abelian():
        return False
    return find_monomorphism(G, H) is not None


def normal_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """All normal subgroups, sorted by (order, elements)."""
    def closure(elems: Iterable[int]) -> frozenset[int]:
        return G.generated(elems)

    base = {closure(G.conjugacy_class(g)) for g in range(G.order)}
    found = set(base) | {frozenset([G.identity])}
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                c = closure(a | b)
                if c not in found:
                    found.add(c)
                    new.append(c)
        frontier = new
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def is_normal_subgroup(G: FiniteGroup, N: frozenset[int]) -> bool:
    if G.identity not in N:
        return False
    for a in N:
        for b in N:
            if G.m(a, b) not in N:
                return False
    return all(G.conjugacy_class(a) <= N for a in N)
