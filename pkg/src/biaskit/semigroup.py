"""Finite inverse semigroups as dense tables.

Elements are integer indices ``0..n-1``; display names are carried
separately. Products read right to left: ``x*y`` applies ``y`` first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from collections.abc import Sequence

import numpy as np

from . import caps
from .errors import ResourceCapError, ValidationError
from .groups import FiniteGroup


# ---------------------------------------------------------------- partial injections

@dataclass(frozen=True)
class PartialInjection:
    """A bijection between two subsets of {1..n}, as sorted (source, target) pairs."""

    n: int
    map: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pairs = tuple(sorted((int(s), int(t)) for s, t in self.map))
        object.__setattr__(self, "map", pairs)
        if self.n < 1:
            raise ValidationError("ambient size must be positive")
        src = [s for s, _ in pairs]
        tgt = [t for _, t in pairs]
        if len(set(src)) != len(src) or len(set(tgt)) != len(tgt):
            raise ValidationError("not injective", witness=pairs)
        if any(not 1 <= v <= self.n for v in src + tgt):
            raise ValidationError("point outside 1..n", witness=pairs)

    @classmethod
    def from_images(cls, images: Sequence[int]) -> PartialInjection:
        """``images[i-1]`` is the image of i, or 0 where undefined."""
        return cls(len(images), tuple((i + 1, t) for i, t in enumerate(images) if t))

    @classmethod
    def identity(cls, n: int, domain: Sequence[int] | None = None) -> PartialInjection:
        dom = range(1, n + 1) if domain is None else domain
        return cls(n, tuple((i, i) for i in dom))

    @property
    def images(self) -> tuple[int, ...]:
        out = [0] * self.n
        for s, t in self.map:
            out[s - 1] = t
        return tuple(out)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.map)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(t for _, t in self.map)

    def __call__(self, i: int) -> int | None:
        return dict(self.map).get(i)

    def __mul__(self, other: PartialInjection) -> PartialInjection:
        """``self * other``: apply ``other`` first, then ``self``."""
        mine = dict(self.map)
        return PartialInjection(self.n, tuple((s, mine[t]) for s, t in other.map if t in mine))

    def inverse(self) -> PartialInjection:
        return PartialInjection(self.n, tuple((t, s) for s, t in self.map))

    def to_json(self) -> dict:
        return {"n": self.n, "map": [list(p) for p in self.map]}

    @classmethod
    def from_json(cls, data: dict) -> PartialInjection:
        return cls(int(data["n"]), tuple(tuple(p) for p in data["map"]))

    def __str__(self) -> str:
        return "{" + ",".join(f"{s}->{t}" for s, t in self.map) + "}"


def partial_injections(n: int) -> list[PartialInjection]:
    """All partial injections of {1..n}, ordered lexicographically by image tuple
    (0 marks an undefined point), so the empty map comes first."""
    out = []
    for imgs in itertools.product(range(n + 1), repeat=n):
        used = [t for t in imgs if t]
        if len(used) == len(set(used)):
            out.append(PartialInjection.from_images(imgs))
    return out


# ---------------------------------------------------------------- diagnostics

@dataclass(frozen=True)
class Diagnostic:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_inverse_semigroup(mul, inv, zero: int | None = None,
                             one: int | None = None) -> Diagnostic:
    """Check associativity, inverse laws, commuting idempotents and the
    declared zero/one. Reports the first counterexample found."""
    try:
        mul = np.asarray(mul, dtype=np.int64)
        inv = np.asarray(inv, dtype=np.int64)
    except (TypeError, ValueError):
        return Diagnostic(False, "tables are not integer arrays")
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        return Diagnostic(False, "mul must be a non-empty square table")
    n = mul.shape[0]
    if inv.shape != (n,):
        return Diagnostic(False, "inv must have one entry per element")
    if mul.min() < 0 or mul.max() >= n or inv.min() < 0 or inv.max() >= n:
        return Diagnostic(False, "table entry out of range")
    step = max(1, 4_000_000 // (n * n))
    for lo in range(0, n, step):
        a = np.arange(lo, min(n, lo + step))
        bad = np.argwhere(mul[mul[a]] != np.take(mul[a], mul, axis=1))
        if bad.size:
            i, b, c = bad[0]
            return Diagnostic(False, "not associative", (int(a[i]), int(b), int(c)))
    idx = np.arange(n)
    xyx = mul[mul[idx, inv], idx]
    if (xyx != idx).any():
        x = int(np.argmax(xyx != idx))
        return Diagnostic(False, "x*x'*x != x", (x,))
    yxy = mul[mul[inv, idx], inv]
    if (yxy != inv).any():
        x = int(np.argmax(yxy != inv))
        return Diagnostic(False, "x'*x*x' != x'", (x,))
    E = idx[mul[idx, idx] == idx]
    sub = mul[np.ix_(E, E)]
    if (sub != sub.T).any():
        i, j = np.argwhere(sub != sub.T)[0]
        return Diagnostic(False, "idempotents do not commute", (int(E[i]), int(E[j])))
    if zero is not None:
        if not ((mul[zero] == zero).all() and (mul[:, zero] == zero).all()):
            return Diagnostic(False, "declared zero does not absorb", (zero,))
    if one is not None:
        if not ((mul[one] == idx).all() and (mul[:, one] == idx).all()):
            return Diagnostic(False, "declared one is not an identity", (one,))
    return Diagnostic(True)


def _detect_zero(mul: np.ndarray) -> int | None:
    n = mul.shape[0]
    for z in range(n):
        if (mul[z] == z).all() and (mul[:, z] == z).all():
            return z
    return None


def _detect_one(mul: np.ndarray) -> int | None:
    idx = np.arange(mul.shape[0])
    for e in range(mul.shape[0]):
        if (mul[e] == idx).all() and (mul[:, e] == idx).all():
            return e
    return None


# ---------------------------------------------------------------- the structure

class FiniteInverseSemigroup:
    """Finite inverse semigroup with dense ``mul`` and ``inv`` tables.

    Zero and one are detected when not declared; a declared value that
    does not behave as such is rejected.
    """

    def __init__(self, mul, inv, names: Sequence[str] | None = None,
                 zero: int | None = None, one: int | None = None, *, check: bool = True):
        mul = np.asarray(mul, dtype=np.int64)
        inv = np.asarray(inv, dtype=np.int64)
        if check:
            diag = verify_inverse_semigroup(mul, inv, zero, one)
            if not diag:
                raise ValidationError(diag.reason, witness=diag.witness)
        n = mul.shape[0]
        self.size = n
        self.mul = mul
        self.inv = inv
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        if len(self.names) != n:
            raise ValidationError("names do not match table size")
        detected_zero = _detect_zero(mul)
        detected_one = _detect_one(mul)
        if zero is not None and zero != detected_zero:
            raise ValidationError("declared zero conflicts with table", witness=(zero,))
        if one is not None and one != detected_one:
            raise ValidationError("declared one conflicts with table", witness=(one,))
        self.zero = detected_zero
        self.one = detected_one
        idx = np.arange(n)
        self.d = mul[inv, idx]
        self.r = mul[idx, inv]
        self.is_idem = mul[idx, idx] == idx
        self.idempotents = tuple(int(e) for e in idx[self.is_idem])
        self._rows = mul.tolist()
        self._inv = inv.tolist()
        self._d = self.d.tolist()
        self._r = self.r.tolist()

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"{type(self).__name__}(size={self.size})"

    # scalar helpers; plain-list lookups beat numpy scalar indexing
    def m(self, x: int, y: int) -> int:
        return self._rows[x][y]

    def prod(self, *xs: int) -> int:
        acc = xs[0]
        for y in xs[1:]:
            acc = self._rows[acc][y]
        return acc

    def i(self, x: int) -> int:
        return self._inv[x]

    def dom(self, x: int) -> int:
        return self._d[x]

    def ran(self, x: int) -> int:
        return self._r[x]

    def leq(self, x: int, y: int) -> bool:
        """Natural order: x <= y iff x = y*d(x)."""
        return self._rows[y][self._d[x]] == x

    def power(self, x: int, k: int) -> int:
        acc = x
        for _ in range(k - 1):
            acc = self._rows[acc][x]
        return acc

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def leq_matrix(self) -> np.ndarray:
        """``L[x, y]`` is True iff x <= y."""
        return self.mul[:, self.d].T == np.arange(self.size)[:, None]

    def to_json(self) -> dict:
        out = {"elements": list(self.names), "mul": self.mul.tolist(), "inv": self.inv.tolist()}
        if self.zero is not None:
            out["zero"] = self.zero
        if self.one is not None:
            out["one"] = self.one
        return out

    @classmethod
    def from_json(cls, data: dict) -> FiniteInverseSemigroup:
        try:
            return cls(data["mul"], data["inv"], data.get("elements"),
                       data.get("zero"), data.get("one"))
        except KeyError as exc:
            raise ValidationError(f"missing field {exc}") from None

    def restrict(self, elements: Sequence[int], *, check: bool = False) -> FiniteInverseSemigroup:
        """Inverse subsemigroup on ``elements`` (closure is checked)."""
        elements = list(elements)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[elements] = np.arange(len(elements))
        sub = pos[self.mul[np.ix_(elements, elements)]]
        sinv = pos[self.inv[elements]]
        if (sub < 0).any() or (sinv < 0).any():
            raise ValidationError("subset not closed under product and inverse")
        return FiniteInverseSemigroup(sub, sinv, [self.names[x] for x in elements], check=check)

    def relabel(self, perm: Sequence[int]) -> FiniteInverseSemigroup:
        """Copy where old element ``x`` gets new index ``perm[x]``."""
        perm = np.asarray(perm, dtype=np.int64)
        back = np.argsort(perm)
        mul = perm[self.mul[np.ix_(back, back)]]
        inv = perm[self.inv[back]]
        return FiniteInverseSemigroup(mul, inv, [self.names[x] for x in back], check=False)


def product_semigroup(*factors: FiniteInverseSemigroup) -> FiniteInverseSemigroup:
    """Direct product; tuples ordered lexicographically by factor index."""
    mul = factors[0].mul
    inv = factors[0].inv
    names = list(factors[0].names)
    for f in factors[1:]:
        a, b = mul.shape[0], f.size
        mul = (mul[:, None, :, None] * b + f.mul[None, :, None, :]).reshape(a * b, a * b)
        inv = (inv[:, None] * b + f.inv[None, :]).reshape(a * b)
        names = [f"{x},{y}" for x in names for y in f.names]
    return FiniteInverseSemigroup(mul, inv, [f"({x})" for x in names] if len(factors) > 1 else names,
                                  check=False)


# ---------------------------------------------------------------- builders

def symmetric_inverse_monoid(n: int, cap: int = caps.SYMMETRIC_N):
    """The monoid of all partial injections of {1..n}; returns (S, elements)."""
    if n < 1:
        raise ValidationError("n must be positive")
    if n > cap:
        raise ResourceCapError("symmetric inverse monoid order n", cap, n)
    elems = partial_injections(n)
    # encode each map by its image tuple, base n+1
    imgs = np.array([e.images for e in elems], dtype=np.int64).reshape(len(elems), n)
    base = (n + 1) ** np.arange(n)
    codes = imgs @ base
    lookup = np.full((n + 1) ** n, -1, dtype=np.int64)
    lookup[codes] = np.arange(len(elems))
    ext = np.concatenate([np.zeros((len(elems), 1), dtype=np.int64), imgs], axis=1)
    N = len(elems)
    mul = np.empty((N, N), dtype=np.int64)
    step = max(1, 2_000_000 // (N * n))
    for lo in range(0, N, step):
        # (x*y)(i) = x(y(i)); column 0 of ext keeps undefined points undefined
        comp = ext[lo:lo + step][:, imgs]
        mul[lo:lo + step] = lookup[comp @ base]
    inv_imgs = np.zeros_like(imgs)
    rows, cols = np.nonzero(imgs)
    inv_imgs[rows, imgs[rows, cols] - 1] = cols + 1
    inv = lookup[inv_imgs @ base]
    S = FiniteInverseSemigroup(mul, inv, [str(e) for e in elems], check=False)
    return S, elems


def group_with_zero(G: FiniteGroup) -> FiniteInverseSemigroup:
    """G with a fresh absorbing zero at index 0; g sits at index g+1."""
    n = G.order + 1
    mul = np.zeros((n, n), dtype=np.int64)
    mul[1:, 1:] = G.mul.astype(np.int64) + 1
    inv = np.concatenate([[0], G.inv + 1])
    return FiniteInverseSemigroup(mul, inv, ["0"] + list(G.names), check=False)


def d_r_and_order(x: int, y: int, S: FiniteInverseSemigroup) -> tuple[int, int, bool]:
    return S.dom(x), S.ran(x), S.leq(x, y)


# ---------------------------------------------------------------- Green's relations

@dataclass(frozen=True)
class GreenRelations:
    L: tuple[tuple[int, ...], ...]
    R: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    _witness: dict = field(repr=False, compare=False, default_factory=dict)

    def d_witness(self, a: int, b: int) -> int | None:
        """First x (by index) with d(x)=a and r(x)=b, if any."""
        return self._witness.get((a, b))

    def d_related(self, x: int, y: int) -> bool:
        return any(x in c and y in c for c in self.D)


def _classes(keys: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    groups: dict[int, list[int]] = {}
    for x, k in enumerate(keys):
        groups.setdefault(k, []).append(x)
    return tuple(sorted(tuple(v) for v in groups.values()))


def green_relations(S: FiniteInverseSemigroup) -> GreenRelations:
    witness: dict[tuple[int, int], int] = {}
    for x in range(S.size):
        witness.setdefault((S.dom(x), S.ran(x)), x)
    parent = {e: e for e in S.idempotents}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for a, b in witness:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    dkey = [find(S.dom(x)) for x in range(S.size)]
    return GreenRelations(_classes(S.d.tolist()), _classes(S.r.tolist()), _classes(dkey), witness)


# ---------------------------------------------------------------- Vagner-Preston

@dataclass(frozen=True)
class VagnerPreston:
    """``images[z, t]`` is z*t when t lies in d(z)S, else -1."""

    images: np.ndarray

    def as_partial_injection(self, z: int) -> PartialInjection:
        row = self.images[z]
        n = len(row)
        return PartialInjection(n, tuple((t + 1, int(v) + 1) for t, v in enumerate(row) if v >= 0))


def vagner_preston(S: FiniteInverseSemigroup, verify: bool = True) -> VagnerPreston:
    """Left regular representation by partial bijections, checked injective
    and multiplicative on all pairs."""
    n = S.size
    # t in d(z)S iff d(z)*t = t
    in_dom = S.mul[S.d] == np.arange(n)[None, :]
    images = np.where(in_dom, S.mul, -1)
    vp = VagnerPreston(images)
    if verify:
        if len({r.tobytes() for r in images}) != n:
            raise AssertionError("Vagner-Preston map not injective")
        ext = np.concatenate([images, np.full((n, 1), -1)], axis=1)
        for x in range(n):
            # rho_x o rho_y as arrays over t
            comp = ext[x][images]           # (n, n): row y
            if not np.array_equal(comp, images[S.mul[x]]):
                y = int(np.argmax((comp != images[S.mul[x]]).any(axis=1)))
                raise AssertionError(f"Vagner-Preston not multiplicative at {(x, y)}")
    return vp
