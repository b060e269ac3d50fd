"""Boolean inverse semigroups (biases): orthogonal joins, differences, the
skew operations, additive ideals, congruences and structural predicates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from collections.abc import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import caps
from .errors import ResourceCapError, ValidationError
from .semigroup import FiniteInverseSemigroup, green_relations
from .terms import Inv, Mul, SkewAdd, SkewDiff, Term, Var, Zero, parse, variables


class NotBooleanError(ValidationError):
    """The semigroup is not a Boolean inverse semigroup; ``witness`` says why."""


def _row_keys(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a[:, None]
    return a.view(np.dtype((np.void, 8 * a.shape[1]))).ravel()


class FiniteBias(FiniteInverseSemigroup):
    """A finite Boolean inverse monoid.

    Build with :func:`boolean_closure`. Joins of orthogonal pairs are
    located through atom fingerprints: in a finite bias every element z
    equals the orthogonal join of the z*a over atoms a, so the row
    ``(z*a)_a`` identifies z.
    """

    def __init__(self, S: FiniteInverseSemigroup, atoms: Sequence[int], emask: np.ndarray,
                 mask_to_idem: dict[int, int]):
        super().__init__(S.mul, S.inv, S.names, check=False)
        self.atoms = tuple(atoms)
        self._emask = emask
        self._mask_to_idem = mask_to_idem
        self.top = mask_to_idem[(1 << len(atoms)) - 1]
        self._fp = self.mul[:, list(self.atoms)] if self.atoms else np.zeros((self.size, 0), np.int64)
        keys = _row_keys(self._fp) if self.atoms else np.zeros(self.size, dtype=np.int64)
        self._fp_order = np.argsort(keys, kind="stable")
        self._fp_sorted = keys[self._fp_order]
        # idempotent-level tables, indexed by position in self.idempotents
        E = np.array(self.idempotents)
        self._epos = np.full(self.size, -1, dtype=np.int64)
        self._epos[E] = np.arange(len(E))
        masks = emask[E]
        lookup = np.vectorize(mask_to_idem.__getitem__, otypes=[np.int64])
        self._ediff = lookup(masks[:, None] & ~masks[None, :])
        self._ejoin = lookup(masks[:, None] | masks[None, :])

    # ---- idempotent lattice
    def atom_mask(self, e: int) -> int:
        return int(self._emask[e])

    def idem_from_mask(self, mask: int) -> int:
        return self._mask_to_idem[mask]

    def ejoin(self, e: int, f: int) -> int:
        return int(self._ejoin[self._epos[e], self._epos[f]])

    def ediff(self, e: int, f: int) -> int:
        """e minus f in the Boolean algebra of idempotents."""
        return int(self._ediff[self._epos[e], self._epos[f]])

    def atoms_below(self, e: int) -> tuple[int, ...]:
        m = self.atom_mask(e)
        return tuple(a for k, a in enumerate(self.atoms) if m >> k & 1)

    # ---- orthogonality, compatibility
    def orthogonal(self, x: int, y: int) -> bool:
        z = self.zero
        return self._rows[self._inv[x]][y] == z and self._rows[x][self._inv[y]] == z

    def compatible(self, x: int, y: int) -> bool:
        return bool(self.is_idem[self._rows[self._inv[x]][y]] and self.is_idem[self._rows[x][self._inv[y]]])

    @cached_property
    def orth_matrix(self) -> np.ndarray:
        z = self.zero
        return (self.mul[self.inv] == z) & (self.mul[:, self.inv] == z)

    # ---- joins
    def lookup_fingerprints(self, fp: np.ndarray) -> np.ndarray:
        """Element index for each fingerprint row, -1 if absent."""
        q = _row_keys(fp) if self.atoms else np.zeros(len(fp), dtype=np.int64)
        pos = np.searchsorted(self._fp_sorted, q)
        pos = np.minimum(pos, self.size - 1)
        hit = self._fp_sorted[pos] == q
        return np.where(hit, self._fp_order[pos], -1)

    def join_many(self, xs, ys) -> np.ndarray:
        """Orthogonal joins elementwise; -1 where the pair is not orthogonal."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        shape = np.broadcast(xs, ys).shape
        xs, ys = np.broadcast_to(xs, shape).ravel(), np.broadcast_to(ys, shape).ravel()
        z = self.zero
        orth = (self.mul[self.inv[xs], ys] == z) & (self.mul[xs, self.inv[ys]] == z)
        fx, fy = self._fp[xs], self._fp[ys]
        out = self.lookup_fingerprints(np.where(fx != z, fx, fy))
        return np.where(orth, out, -1).reshape(shape)

    def join(self, x: int, y: int) -> int:
        if not self.orthogonal(x, y):
            raise ValueError(f"{self.names[x]} and {self.names[y]} are not orthogonal")
        return int(self.join_many(x, y))

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.zero
        for x in xs:
            acc = self.join(acc, x)
        return acc

    @cached_property
    def join_table(self) -> np.ndarray:
        """Partial table: the join on orthogonal pairs, -1 elsewhere."""
        idx = np.arange(self.size)
        return self.join_many(idx[:, None], idx[None, :])

    # ---- differences and skew operations
    def meet(self, x: int, y: int) -> int:
        """x /\\ y for compatible x, y (equals x*d(y))."""
        if not self.compatible(x, y):
            raise ValueError("meet requested for incompatible pair")
        return self._rows[x][self._d[y]]

    def diff(self, x: int, y: int) -> int:
        """x \\ y for compatible x, y: the z with x = (x /\\ y) (+) z."""
        if not self.compatible(x, y):
            raise ValueError("difference requested for incompatible pair")
        return self._rows[x][self.ediff(self._d[x], self._d[y])]

    def sd_many(self, xs, ys) -> np.ndarray:
        """Skew difference (r(x)\\r(y)) x (d(x)\\d(y)), elementwise."""
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        ep = self._epos
        left = self._ediff[ep[self.r[xs]], ep[self.r[ys]]]
        right = self._ediff[ep[self.d[xs]], ep[self.d[ys]]]
        return self.mul[self.mul[left, xs], right]

    def sa_many(self, xs, ys) -> np.ndarray:
        """Skew addition (x ~ y) (+) y, elementwise."""
        out = self.join_many(self.sd_many(xs, ys), ys)
        if (np.asarray(out) < 0).any():
            raise AssertionError("skew difference not orthogonal to its subtrahend")
        return out

    def sd(self, x: int, y: int) -> int:
        return int(self.sd_many(x, y))

    def sa(self, x: int, y: int) -> int:
        return int(self.sa_many(x, y))

    @cached_property
    def sd_table(self) -> np.ndarray:
        idx = np.arange(self.size)
        return self.sd_many(idx[:, None], idx[None, :])

    @cached_property
    def sa_table(self) -> np.ndarray:
        idx = np.arange(self.size)
        return self.sa_many(idx[:, None], idx[None, :])

    def units(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.size) if self._d[x] == self.top and self._r[x] == self.top)


def skew_ops(x: int, y: int, S: FiniteBias) -> tuple[int, int]:
    return S.sd(x, y), S.sa(x, y)


# ---------------------------------------------------------------- construction

def boolean_closure(S: FiniteInverseSemigroup, factory=None) -> FiniteBias:
    """Check that S is a Boolean inverse monoid and attach its Boolean
    structure. Raises NotBooleanError with a witness otherwise.

    ``factory(S, atoms, emask, mask_to_idem)`` builds the result; it
    defaults to :class:`FiniteBias` and lets subclasses reuse the checks.
    """
    if factory is None and isinstance(S, FiniteBias):
        return S
    if S.zero is None:
        raise NotBooleanError("no zero element")
    z = S.zero
    E = list(S.idempotents)
    atoms = [e for e in E if e != z and all(f == z or f == e or S.m(f, e) != f for f in E)]
    emask = np.full(S.size, -1, dtype=np.int64)
    mask_to_idem: dict[int, int] = {}
    for e in E:
        m = 0
        for k, a in enumerate(atoms):
            if S.m(a, e) == a:
                m |= 1 << k
        emask[e] = m
        if m in mask_to_idem:
            raise NotBooleanError("idempotent lattice is not Boolean", witness=_missing_complement(S))
        mask_to_idem[m] = e
    if len(E) != 2 ** len(atoms):
        raise NotBooleanError("idempotent lattice is not Boolean", witness=_missing_complement(S))
    # order must be inclusion of atom sets; meet = product must be intersection
    for e in E:
        for f in E:
            if emask[S.m(e, f)] != emask[e] & emask[f]:
                raise NotBooleanError("idempotent lattice is not Boolean", witness=(e, f))
    top = mask_to_idem[(1 << len(atoms)) - 1]
    idx = np.arange(S.size)
    if not ((S.mul[top] == idx).all() and (S.mul[:, top] == idx).all()):
        raise NotBooleanError("top idempotent is not a two-sided unit", witness=(top,))
    fp = S.mul[:, atoms]
    keys = _row_keys(fp) if atoms else np.zeros(S.size)
    uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
    if (counts > 1).any():
        k = int(np.argmax(counts > 1))
        twins = tuple(int(x) for x in idx[keys == uniq[k]][:2])
        raise NotBooleanError("two upper bounds of the same orthogonal family share a domain",
                              witness=twins)
    B = (factory or FiniteBias)(S, atoms, emask, mask_to_idem)
    _check_joins(B)
    return B


def _missing_complement(S: FiniteInverseSemigroup):
    """A pair e <= f of idempotents where e has no complement inside [0, f]."""
    E = S.idempotents
    z = S.zero
    for f in E:
        for e in E:
            if S.m(e, f) != e:
                continue
            ok = False
            for g in E:
                if S.m(g, f) != g or S.m(g, e) != z:
                    continue
                ups = [h for h in E if S.m(e, h) == e and S.m(g, h) == g]
                if all(S.m(f, h) == f for h in ups):
                    ok = True
                    break
            if not ok:
                return (e, f)
    return ()


def _check_joins(B: FiniteBias) -> None:
    """Every orthogonal pair must have a least upper bound.

    The fingerprint candidate z is an upper bound whose domain is the join
    of the two domains; any other upper bound w restricts to an upper bound
    with that same domain and fingerprint, so w >= z.
    """
    n = B.size
    step = max(1, 2_000_000 // n)
    idx = np.arange(n)
    for lo in range(0, n, step):
        xs = np.repeat(idx[lo:lo + step], n)
        ys = np.tile(idx, len(idx[lo:lo + step]))
        orth = B.orth_matrix[lo:lo + step].ravel()
        xs, ys = xs[orth], ys[orth]
        zs = B.join_many(xs, ys)
        bad = zs < 0
        if not bad.any():
            ok_upper = (B.mul[zs, B.d[xs]] == xs) & (B.mul[zs, B.d[ys]] == ys)
            ep = B._epos
            ok_dom = B.d[zs] == B._ejoin[ep[B.d[xs]], ep[B.d[ys]]]
            bad = ~(ok_upper & ok_dom)
        if bad.any():
            k = int(np.argmax(bad))
            raise NotBooleanError("orthogonal pair without a join", witness=(int(xs[k]), int(ys[k])))


def hom_defect(S: FiniteBias, T: FiniteBias, f) -> str | None:
    """Why ``f`` (an array S -> T) fails to be a bias homomorphism, or None.

    Checks products, inverses, the zero and joins of orthogonal pairs.
    """
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (S.size,) or f.min(initial=0) < 0 or f.max(initial=0) >= T.size:
        return "map has the wrong shape or range"
    bad = T.mul[f[:, None], f[None, :]] != f[S.mul]
    if bad.any():
        x, y = np.argwhere(bad)[0]
        return f"product of {S.names[x]} and {S.names[y]} not preserved"
    bad = T.inv[f] != f[S.inv]
    if bad.any():
        return f"inverse of {S.names[int(np.argmax(bad))]} not preserved"
    if f[S.zero] != T.zero:
        return "zero not preserved"
    J = S.join_table
    xs, ys = np.nonzero(J >= 0)
    bad = T.join_many(f[xs], f[ys]) != f[J[xs, ys]]
    if bad.any():
        k = int(np.argmax(bad))
        return f"join of {S.names[xs[k]]} and {S.names[ys[k]]} not preserved"
    return None


def bias_from_json(data: dict) -> FiniteBias:
    return boolean_closure(FiniteInverseSemigroup.from_json(data))


def product_bias(*factors: FiniteInverseSemigroup) -> FiniteBias:
    from .semigroup import product_semigroup
    return boolean_closure(product_semigroup(*factors))


# ---------------------------------------------------------------- term evaluation

def evaluate_many(t: Term, env: Mapping[str, np.ndarray], S: FiniteBias) -> np.ndarray:
    """Evaluate t on arrays of assignments (all arrays share one shape)."""
    shape = np.broadcast_shapes(*(np.shape(v) for v in env.values())) if env else ()
    memo: dict[int, np.ndarray] = {}

    def ev(u: Term) -> np.ndarray:
        key = id(u)
        if key in memo:
            return memo[key]
        if isinstance(u, Zero):
            out = np.full(shape, S.zero, dtype=np.int64)
        elif isinstance(u, Var):
            if u.name not in env:
                raise ValidationError(f"no value for variable {u.name!r}")
            out = np.broadcast_to(np.asarray(env[u.name], dtype=np.int64), shape)
        elif isinstance(u, Inv):
            out = S.inv[ev(u.arg)]
        elif isinstance(u, Mul):
            out = S.mul[ev(u.left), ev(u.right)]
        elif isinstance(u, SkewDiff):
            out = S.sd_many(ev(u.left), ev(u.right))
        elif isinstance(u, SkewAdd):
            out = S.sa_many(ev(u.left), ev(u.right))
        else:
            raise TypeError(f"not a term: {u!r}")
        memo[key] = out
        return out

    return ev(t)


def evaluate_term(t: Term | str, assignment: Mapping[str, int], S: FiniteBias) -> int:
    if isinstance(t, str):
        t = parse(t)
    return int(evaluate_many(t, {k: np.int64(v) for k, v in assignment.items()}, S))


def identity_counterexample(S: FiniteBias, lhs: Term | str, rhs: Term | str,
                            cap: int = caps.IDENTITY_EVALUATIONS) -> dict[str, int] | None:
    """First assignment (lexicographic, variables sorted by name) where the
    two sides differ, or None if the identity holds in S."""
    lhs = parse(lhs) if isinstance(lhs, str) else lhs
    rhs = parse(rhs) if isinstance(rhs, str) else rhs
    names = sorted(set(variables(lhs)) | set(variables(rhs)))
    total = S.size ** len(names)
    if total > cap:
        raise ResourceCapError("identity evaluations", cap, total)
    chunk = 1 << 20
    for lo in range(0, total, chunk):
        flat = np.arange(lo, min(total, lo + chunk))
        digits = np.unravel_index(flat, (S.size,) * len(names)) if names else ()
        env = dict(zip(names, digits))
        if not names:
            env = {}
        a = evaluate_many(lhs, env, S)
        b = evaluate_many(rhs, env, S)
        diff = np.atleast_1d(a != b)
        if diff.any():
            k = int(np.argmax(diff))
            return {nm: int(np.atleast_1d(v)[k]) for nm, v in env.items()}
    return None


def satisfies_identity(S: FiniteBias, lhs: Term | str, rhs: Term | str,
                       cap: int = caps.IDENTITY_EVALUATIONS) -> bool:
    return identity_counterexample(S, lhs, rhs, cap) is None


# ---------------------------------------------------------------- congruences

@dataclass(frozen=True)
class BiasCongruence:
    """A partition of the carrier; ``labels[x]`` numbers classes by least element."""

    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, labels) -> BiasCongruence:
        seen: dict[int, int] = {}
        return cls(tuple(seen.setdefault(int(v), len(seen)) for v in labels))

    @classmethod
    def from_classes(cls, n: int, classes: Iterable[Iterable[int]]) -> BiasCongruence:
        lab = [-1] * n
        for k, cl in enumerate(classes):
            for x in cl:
                lab[x] = k
        if min(lab) < 0:
            raise ValidationError("classes do not cover the carrier")
        return cls.from_labels(lab)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def num_classes(self) -> int:
        return max(self.labels) + 1

    @property
    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for x, k in enumerate(self.labels):
            out[k].append(x)
        return out

    def related(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    def is_identity(self) -> bool:
        return self.num_classes == self.size

    def refines(self, other: BiasCongruence) -> bool:
        """self is contained in other."""
        img: dict[int, int] = {}
        return all(img.setdefault(a, b) == b for a, b in zip(self.labels, other.labels))

    def meet(self, other: BiasCongruence) -> BiasCongruence:
        return BiasCongruence.from_labels([a * (other.num_classes) + b
                                           for a, b in zip(self.labels, other.labels)])

    def join(self, other: BiasCongruence) -> BiasCongruence:
        n = self.size
        edges = [_rep_edges(self.labels), _rep_edges(other.labels)]
        return BiasCongruence.from_labels(_components(n, edges))

    def relation_matrix(self) -> np.ndarray:
        lab = np.array(self.labels)
        return lab[:, None] == lab[None, :]

    def to_json(self) -> list[list[int]]:
        return self.classes


def _rep_edges(labels) -> tuple[np.ndarray, np.ndarray]:
    lab = np.asarray(labels, dtype=np.int64)
    n = len(lab)
    rep = np.full(lab.max() + 1, n, dtype=np.int64)
    np.minimum.at(rep, lab, np.arange(n))
    return np.arange(n), rep[lab]


def _components(n: int, edges: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    u = np.concatenate([e[0] for e in edges] + [np.arange(n)])
    v = np.concatenate([e[1] for e in edges] + [np.arange(n)])
    g = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    return connected_components(g, directed=False)[1]


def _op_tables(S: FiniteBias) -> list[np.ndarray]:
    return [S.mul, S.sd_table, S.sa_table]


def _merge(lab: np.ndarray, u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, bool]:
    """Coarsen the partition ``lab`` by the edges (u, v)."""
    a, b = lab[u], lab[v]
    m = a != b
    if not m.any():
        return lab, False
    k = int(lab.max()) + 1
    codes = np.unique(a[m] * k + b[m])
    g = coo_matrix((np.ones(len(codes), dtype=np.int8), (codes // k, codes % k)), shape=(k, k))
    comp = connected_components(g, directed=False)[1]
    return comp[lab], True


def generate_congruence(S: FiniteBias, pairs: Iterable[tuple[int, int]],
                        start: BiasCongruence | None = None) -> BiasCongruence:
    """Least bias congruence containing ``pairs`` (and ``start``)."""
    n = S.size
    pairs = list(pairs)
    lab = np.arange(n) if start is None else np.array(start.labels)
    if pairs:
        lab, _ = _merge(lab, np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))
    tables = _op_tables(S)
    while True:
        x, rep = _rep_edges(lab)
        moved = x != rep
        x, rep = x[moved], rep[moved]
        us, vs = [S.inv[x]], [S.inv[rep]]
        for T in tables:
            us += [T[x].ravel(), T[:, x].ravel()]
            vs += [T[rep].ravel(), T[:, rep].ravel()]
        lab, changed = _merge(lab, np.concatenate(us), np.concatenate(vs))
        if not changed:
            return BiasCongruence.from_labels(lab)


def is_bias_congruence(S: FiniteBias, theta: BiasCongruence) -> bool:
    """Compatible with 0, inversion, product, skew difference and skew addition."""
    lab = np.array(theta.labels)
    x, rep = _rep_edges(lab)
    if (lab[S.inv[x]] != lab[S.inv[rep]]).any():
        return False
    for T in _op_tables(S):
        if (lab[T[x]] != lab[T[rep]]).any() or (lab[T[:, x]] != lab[T[:, rep]]).any():
            return False
    return True


def is_additive_semigroup_congruence(S: FiniteBias, theta: BiasCongruence) -> bool:
    """Inverse-semigroup congruence plus the additivity condition: for
    orthogonal idempotents a, b and any x, xa = a and xb = b modulo theta
    force x(a+b) = a+b modulo theta."""
    lab = np.array(theta.labels)
    x, rep = _rep_edges(lab)
    if (lab[S.inv[x]] != lab[S.inv[rep]]).any():
        return False
    if (lab[S.mul[x]] != lab[S.mul[rep]]).any() or (lab[S.mul[:, x]] != lab[S.mul[:, rep]]).any():
        return False
    E = S.idempotents
    for a in E:
        for b in E:
            if S.m(a, b) != S.zero:
                continue
            ab = S.join(a, b)
            xa = lab[S.mul[:, a]] == lab[a]
            xb = lab[S.mul[:, b]] == lab[b]
            xab = lab[S.mul[:, ab]] == lab[ab]
            if (xa & xb & ~xab).any():
                return False
    return True


@dataclass(frozen=True)
class CongruenceLattice:
    congruences: tuple[BiasCongruence, ...]

    def __len__(self) -> int:
        return len(self.congruences)

    def __iter__(self):
        return iter(self.congruences)

    @property
    def nonzero(self) -> list[BiasCongruence]:
        return [c for c in self.congruences if not c.is_identity()]

    @property
    def monolith(self) -> BiasCongruence | None:
        nz = self.nonzero
        for c in nz:
            if all(c.refines(d) for d in nz):
                return c
        return None

    @property
    def subdirectly_irreducible(self) -> bool:
        return self.monolith is not None

    @property
    def finitely_subdirectly_irreducible(self) -> bool:
        nz = self.nonzero
        return all(not a.meet(b).is_identity() for a in nz for b in nz)


def _sort_key(c: BiasCongruence):
    return (-c.num_classes, c.labels)


def congruence_lattice(S: FiniteBias, cap: int = caps.CONGRUENCE_ELEMENTS) -> CongruenceLattice:
    """All bias congruences of S, identity first, full relation last.

    Every principal congruence Cg(x, y) is a join of congruences Cg(0, f)
    with f idempotent and Cg(g, d(g)): with z = y d(x) one has
    Cg(x, y) = Cg(x, z) v Cg(y, z), comparable pairs u <= v give
    Cg(u, v) = Cg(0, d(v \\ u)), and L-related pairs reduce to pairs of the
    second kind. Joins of those generate the whole lattice.
    """
    n = S.size
    if n > cap:
        raise ResourceCapError("congruence enumeration size", cap, n)
    z = S.zero
    pairs = [(z, f) for f in S.idempotents if f != z]
    pairs += [(g, S.dom(g)) for g in range(n) if not S.is_idem[g]]
    found = {BiasCongruence.from_labels(range(n))}
    for p in pairs:
        found.add(generate_congruence(S, [p]))
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                c = a.join(b)
                if c not in found:
                    found.add(c)
                    new.append(c)
        frontier = new
    return CongruenceLattice(tuple(sorted(found, key=_sort_key)))


def partition_scan_congruences(S: FiniteBias,
                               cap: int = caps.PARTITION_SCAN_ELEMENTS) -> CongruenceLattice:
    """Brute force: test every set partition of the carrier."""
    n = S.size
    if n > cap:
        raise ResourceCapError("partition scan size", cap, n)
    out = []
    for rgs in _restricted_growth(n):
        c = BiasCongruence(tuple(rgs))
        if is_bias_congruence(S, c):
            out.append(c)
    return CongruenceLattice(tuple(sorted(out, key=_sort_key)))


def _restricted_growth(n: int):
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(m + 2):
            a[i] = v
            yield from rec(i + 1, max(m, v))

    if n == 0:
        yield ()
        return
    yield from rec(1, 0)


def quotient(S: FiniteBias, theta: BiasCongruence) -> FiniteBias:
    """S/theta as a bias; classes are ordered by least element."""
    reps = [cl[0] for cl in theta.classes]
    lab = np.array(theta.labels)
    mul = lab[S.mul[np.ix_(reps, reps)]]
    inv = lab[S.inv[reps]]
    names = ["[" + S.names[r] + "]" for r in reps]
    Q = FiniteInverseSemigroup(mul, inv, names)
    return boolean_closure(Q)


def congruences_permute(S: FiniteBias, a: BiasCongruence, b: BiasCongruence) -> bool:
    A = a.relation_matrix().astype(np.int32)
    B = b.relation_matrix().astype(np.int32)
    return bool(np.array_equal((A @ B) > 0, (B @ A) > 0))


# ---------------------------------------------------------------- additive ideals

def additive_ideal(S: FiniteBias, seeds: Iterable[int]) -> frozenset[int]:
    """Least additive ideal containing ``seeds``: alternate two-sided
    multiplication and orthogonal joins until nothing new appears."""
    mask = np.zeros(S.size, dtype=bool)
    mask[S.zero] = True
    mask[list(seeds)] = True
    while True:
        before = mask.sum()
        members = np.flatnonzero(mask)
        mask[S.mul[members].ravel()] = True
        mask[S.mul[:, members].ravel()] = True
        members = np.flatnonzero(mask)
        j = S.join_many(members[:, None], members[None, :])
        mask[j[j >= 0]] = True
        if mask.sum() == before:
            return frozenset(int(x) for x in np.flatnonzero(mask))


def is_additive_ideal(S: FiniteBias, I: Iterable[int]) -> bool:
    I = frozenset(I)
    return S.zero in I and additive_ideal(S, I) == I


def all_additive_ideals(S: FiniteBias) -> list[frozenset[int]]:
    """Each additive ideal is generated by its largest idempotent."""
    found = {additive_ideal(S, [e]) for e in S.idempotents}
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def ideal_congruence(S: FiniteBias, I: Iterable[int]) -> BiasCongruence:
    """theta_I: x ~ y iff some z <= x, y has x\\z and y\\z in I."""
    I = frozenset(I)
    if not is_additive_ideal(S, I):
        raise ValidationError("not an additive ideal")
    n = S.size
    inI = np.zeros(n, dtype=bool)
    inI[list(I)] = True
    leq = S.leq_matrix()             # leq[z, x]: z <= x
    good = np.zeros((n, n), dtype=bool)   # good[x, z]: z <= x and x \ z in I
    for x in range(n):
        lows = np.flatnonzero(leq[:, x])
        diffs = [S.diff(x, int(zz)) for zz in lows]
        good[x, lows] = inI[diffs]
    rel = (good.astype(np.int32) @ good.T.astype(np.int32)) > 0
    lab = _components(n, [tuple(np.nonzero(rel))])
    theta = BiasCongruence.from_labels(lab)
    if not np.array_equal(theta.relation_matrix(), rel):
        raise AssertionError("theta_I is not transitive")
    if not is_bias_congruence(S, theta):
        raise AssertionError("theta_I is not a bias congruence")
    return theta


# ---------------------------------------------------------------- predicates

@dataclass(frozen=True)
class StructuralReport:
    d_cancellative: bool
    factorizable: bool

    @property
    def consistent(self) -> bool:
        return self.d_cancellative == self.factorizable


def is_d_cancellative(S: FiniteBias) -> bool:
    g = green_relations(S)
    dcls = {}
    for k, cl in enumerate(g.D):
        for x in cl:
            dcls[x] = k
    E = S.idempotents
    by_join: dict[int, list[tuple[int, int]]] = {}
    for a in E:
        for b in E:
            if S.m(a, b) == S.zero:
                by_join.setdefault(S.join(a, b), []).append((a, b))
    for splits in by_join.values():
        for a, b in splits:
            for a2, b2 in splits:
                if dcls[a] == dcls[a2] and dcls[b] != dcls[b2]:
                    return False
    return True


def is_factorizable(S: FiniteBias) -> bool:
    U = S.units()
    return all(any(S.leq(x, g) for g in U) for x in range(S.size))


def structural_predicates(S: FiniteBias) -> StructuralReport:
    rep = StructuralReport(is_d_cancellative(S), is_factorizable(S))
    if not rep.consistent:
        raise AssertionError("D-cancellativity and factorizability disagree")
    return rep
