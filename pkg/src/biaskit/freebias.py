"""Canonical forms for bias terms and the word problem for free biases.

An element of the bias generated by an inverse semigroup S is written as
an orthogonal join of summands x(a \\ (b_1 v ... v b_k)) with x in S and
a, b_j idempotents of S, b_j <= a <= d(x).  Terms are rewritten into this
shape; inequalities between shapes reduce to statements inside S: a
Boolean cover test on idempotents and summand-by-summand comparisons.

The base S is either the free inverse monoid on an alphabet (Munn trees)
or a finite inverse semigroup given by tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Mapping, Sequence

import numpy as np

from . import caps
from .bias import FiniteBias, _row_keys, boolean_closure, evaluate_many, evaluate_term
from .errors import ResourceCapError, ValidationError
from .munn import MunnTree
from .semigroup import FiniteInverseSemigroup, PartialInjection, symmetric_inverse_monoid
from .terms import Inv, Mul, SkewAdd, SkewDiff, Term, Var, Zero, parse, variables


# ---------------------------------------------------------------- bases

class FreeBase:
    """The free inverse monoid on a sorted alphabet, letters numbered from 1."""

    def __init__(self, alphabet: Sequence[str]):
        self.alphabet = tuple(sorted(set(alphabet)))
        self._letter = {v: k + 1 for k, v in enumerate(self.alphabet)}

    def variable(self, name: str) -> MunnTree:
        if name not in self._letter:
            raise ValidationError(f"variable {name!r} not in alphabet")
        return MunnTree.generator(self._letter[name])

    def mul(self, x: MunnTree, y: MunnTree) -> MunnTree:
        return x * y

    def inv(self, x: MunnTree) -> MunnTree:
        return x.inverse()

    def dom(self, x: MunnTree) -> MunnTree:
        return x.dom()

    def ran(self, x: MunnTree) -> MunnTree:
        return x.ran()

    def leq(self, x: MunnTree, y: MunnTree) -> bool:
        return x.leq(y)

    def key(self, x: MunnTree):
        return x.sort_key()

    def fmt(self, x: MunnTree) -> str:
        return x.to_string(self.alphabet)


class TableBase:
    """A finite inverse semigroup; elements are its indices."""

    def __init__(self, S: FiniteInverseSemigroup):
        self.S = S

    def mul(self, x: int, y: int) -> int:
        return self.S.m(x, y)

    def inv(self, x: int) -> int:
        return self.S.i(x)

    def dom(self, x: int) -> int:
        return self.S.dom(x)

    def ran(self, x: int) -> int:
        return self.S.ran(x)

    def leq(self, x: int, y: int) -> bool:
        return self.S.leq(x, y)

    def key(self, x: int):
        return x

    def fmt(self, x: int) -> str:
        return self.S.names[x]


# ---------------------------------------------------------------- forms

@dataclass(frozen=True)
class CanonicalForm:
    """Orthogonal join of summands (x, a, bs) meaning x(a minus the join of bs)."""

    summands: tuple

    def __len__(self) -> int:
        return len(self.summands)

    def to_string(self, base) -> str:
        if not self.summands:
            return "0"
        parts = []
        for x, a, bs in self.summands:
            cell = " \\ ".join([base.fmt(a)] + [base.fmt(b) for b in bs])
            parts.append(f"{base.fmt(x)}[{cell}]")
        return " (+) ".join(parts)


def _cell(base, a, bs):
    """Normalized idempotent cell a minus the join of bs, or None when it is zero.

    Each b is replaced by b*a; a cell vanishes exactly when some b*a = a.
    """
    out = {}
    for b in bs:
        ba = base.mul(b, a)
        if ba == a:
            return None
        out[ba] = None
    keep = [b for b in out if not any(c != b and base.leq(b, c) for c in out)]
    return a, tuple(sorted(keep, key=base.key))


def _summand(base, x, a, bs):
    cell = _cell(base, a, bs)
    return None if cell is None else (x, cell[0], cell[1])


def _form(items) -> CanonicalForm:
    return CanonicalForm(tuple(s for s in items if s is not None))


def form_of_element(base, x) -> CanonicalForm:
    return CanonicalForm(((x, base.dom(x), ()),))


def form_mul(base, p: CanonicalForm, q: CanonicalForm) -> CanonicalForm:
    out = []
    for x, a, bs in p.summands:
        for y, c, ds in q.summands:
            yi = base.inv(y)
            # (a \ B) y = y (y^-1 a y \ y^-1 B y)
            a2 = base.mul(base.mul(base.mul(yi, a), y), c)
            subs = [base.mul(base.mul(base.mul(yi, b), y), c) for b in bs] + list(ds)
            out.append(_summand(base, base.mul(x, y), a2, subs))
    return _form(out)


def form_inv(base, p: CanonicalForm) -> CanonicalForm:
    out = []
    for x, a, bs in p.summands:
        xi = base.inv(x)
        out.append(_summand(base, xi, base.mul(base.mul(x, a), xi),
                            [base.mul(base.mul(x, b), xi) for b in bs]))
    return _form(out)


def _dom_cells(p: CanonicalForm) -> list:
    return [(a, bs) for _, a, bs in p.summands]


def _ran_cells(base, p: CanonicalForm) -> list:
    out = []
    for x, a, bs in p.summands:
        xi = base.inv(x)
        cell = _cell(base, base.mul(base.mul(x, a), xi), [base.mul(base.mul(x, b), xi) for b in bs])
        if cell is not None:
            out.append(cell)
    return out


def _cell_minus(base, cell, other) -> list:
    """(a \\ B) minus (c \\ D) as orthogonal cells."""
    a, bs = cell
    c, ds = other
    ac = base.mul(a, c)
    out = [_cell(base, a, list(bs) + [ac])]
    seen: list = []
    for d in ds:
        out.append(_cell(base, base.mul(ac, d), list(bs) + seen))
        seen.append(d)
    return [x for x in out if x is not None]


def _cells_minus(base, E: list, F: list) -> list:
    out = []
    for cell in E:
        pieces = [cell]
        for other in F:
            pieces = [q for p in pieces for q in _cell_minus(base, p, other)]
        out.extend(pieces)
    return out


def _cells_form(cells: list) -> CanonicalForm:
    return CanonicalForm(tuple((a, a, bs) for a, bs in cells))


def form_sd(base, p: CanonicalForm, q: CanonicalForm) -> CanonicalForm:
    """(r(p) \\ r(q)) p (d(p) \\ d(q))."""
    left = _cells_form(_cells_minus(base, _ran_cells(base, p), _ran_cells(base, q)))
    right = _cells_form(_cells_minus(base, _dom_cells(p), _dom_cells(q)))
    return form_mul(base, form_mul(base, left, p), right)


def form_sa(base, p: CanonicalForm, q: CanonicalForm) -> CanonicalForm:
    return CanonicalForm(form_sd(base, p, q).summands + q.summands)


def canonicalize(t: Term | str, base=None, env: Mapping | None = None) -> CanonicalForm:
    """Rewrite a term into canonical form over ``base``.

    With no base, the base is the free inverse monoid on the variables of t.
    ``env`` maps variable names to base elements (default: the generators).
    """
    if isinstance(t, str):
        t = parse(t)
    if base is None:
        base = FreeBase(variables(t))
    if env is None:
        env = {v: base.variable(v) for v in variables(t)}

    def go(u: Term) -> CanonicalForm:
        if isinstance(u, Zero):
            return CanonicalForm(())
        if isinstance(u, Var):
            return form_of_element(base, env[u.name])
        if isinstance(u, Inv):
            return form_inv(base, go(u.arg))
        left, right = go(u.left), go(u.right)
        if isinstance(u, Mul):
            return form_mul(base, left, right)
        if isinstance(u, SkewDiff):
            return form_sd(base, left, right)
        if isinstance(u, SkewAdd):
            return form_sa(base, left, right)
        raise TypeError(f"unknown term node {u!r}")

    return go(t)


# ---------------------------------------------------------------- deciding

def boolean_cover_leq(base, lhs, rhs: Sequence) -> bool:
    """Is (a \\ B) <= the join of the cells (c_k \\ D_k)?

    Membership of an idempotent p in a cell depends only on which of the
    idempotents involved lie above p, and the meet of a with those has the
    same pattern. So it suffices to test the meets of a with subsets of
    the other idempotents, skipping those already outside the left cell.
    """
    a, bs = lhs
    bs = list(bs)
    gens = []
    for c, ds in rhs:
        gens.append(c)
        gens.extend(ds)
    gens.extend(bs)

    def outside(p) -> bool:
        return any(base.leq(p, b) for b in bs)

    if outside(a):
        return True
    points = {a: None}
    frontier = [a]
    while frontier:
        new = []
        for p in frontier:
            for g in gens:
                q = base.mul(p, g)
                if q not in points and not outside(q):
                    points[q] = None
                    new.append(q)
        frontier = new
    for p in points:
        if not any(base.leq(p, c) and not any(base.leq(p, d) for d in ds) for c, ds in rhs):
            return False
    return True


def summand_leq(base, s1, s2) -> bool:
    """x(a \\ V a_i) <= y(b \\ V b_j) inside the generated bias."""
    x, a, As = s1
    y, b, Bs = s2
    ad = base.mul(a, base.dom(x))
    cond1 = any(base.leq(ad, ai) for ai in As) or (
        base.mul(x, ad) == base.mul(y, ad) and base.leq(ad, base.mul(b, base.dom(y))))
    if not cond1:
        return False
    return all(any(base.leq(base.mul(ad, bj), ai) for ai in As) for bj in Bs)


def decide_leq(base, p: CanonicalForm, q: CanonicalForm) -> bool:
    """p <= q: each summand's cell is covered by the cells of q, and each
    summand restricted to a cell of q lies below that cell's element."""
    rhs = _dom_cells(q)
    for x, a, bs in p.summands:
        if not boolean_cover_leq(base, (a, bs), rhs):
            return False
        for y, c, ds in q.summands:
            ac = base.mul(a, c)
            cell = _cell(base, ac, list(bs) + list(ds))
            if cell is None:
                continue
            if not summand_leq(base, (x, cell[0], cell[1]), (y, base.dom(y), ())):
                return False
    return True


def decide_equal_forms(base, p: CanonicalForm, q: CanonicalForm) -> bool:
    return decide_leq(base, p, q) and decide_leq(base, q, p)


def _terms(t1, t2, alphabet):
    t1 = parse(t1, alphabet) if isinstance(t1, str) else t1
    t2 = parse(t2, alphabet) if isinstance(t2, str) else t2
    names = set(variables(t1)) | set(variables(t2)) | set(alphabet or ())
    return t1, t2, FreeBase(sorted(names))


def decide_leq_terms(t1: Term | str, t2: Term | str, alphabet: Sequence[str] | None = None) -> bool:
    t1, t2, base = _terms(t1, t2, alphabet)
    return decide_leq(base, canonicalize(t1, base), canonicalize(t2, base))


def decide_equal(t1: Term | str, t2: Term | str, alphabet: Sequence[str] | None = None) -> bool:
    """Word problem for the free bias on ``alphabet`` (default: the variables used)."""
    t1, t2, base = _terms(t1, t2, alphabet)
    return decide_equal_forms(base, canonicalize(t1, base), canonicalize(t2, base))


# ---------------------------------------------------------------- evaluation

def evaluate_form(form: CanonicalForm, S: FiniteBias, value) -> int:
    """Join of value(x) * (value(a) \\ join of value(b)) in S."""
    acc = S.zero
    for x, a, bs in form.summands:
        e = S.idem_from_mask(S.atom_mask(value(a)) & ~_join_mask(S, (value(b) for b in bs)))
        acc = S.join(acc, S.m(value(x), e))
    return acc


def _join_mask(S: FiniteBias, es) -> int:
    m = 0
    for e in es:
        m |= S.atom_mask(e)
    return m


def munn_value(assignment: Mapping[str, int], base: FreeBase, S: FiniteBias):
    values = {k + 1: assignment[v] for k, v in enumerate(base.alphabet)}
    return lambda x: x.evaluate(values, S.m, S.i)


# ---------------------------------------------------------------- falsifier

_CHUNK = 200_000

@dataclass(frozen=True)
class Separator:
    n: int
    assignment: dict[str, PartialInjection]
    left: PartialInjection
    right: PartialInjection

    def to_json(self) -> dict:
        return {"N": self.n, "assignment": {k: v.to_json() for k, v in self.assignment.items()},
                "left": self.left.to_json(), "right": self.right.to_json()}


def falsify(t1: Term | str, t2: Term | str, n_max: int = caps.FALSIFY_N,
            cap: int = caps.IDENTITY_EVALUATIONS, limit: int = caps.FALSIFY_N) -> Separator | None:
    """First assignment into I_N (N = 1..n_max) separating the terms.

    Assignments are scanned with N ascending, then lexicographically over
    the sorted variables. None means no separator was found up to n_max.
    """
    if n_max > limit:
        raise ResourceCapError("falsifier order N", limit, n_max)
    t1 = parse(t1) if isinstance(t1, str) else t1
    t2 = parse(t2) if isinstance(t2, str) else t2
    names = sorted(set(variables(t1)) | set(variables(t2)))
    k = len(names)
    for N in range(1, n_max + 1):
        Ssg, elems = symmetric_inverse_monoid(N)
        S = boolean_closure(Ssg)
        total = S.size ** k
        if total > cap:
            raise ResourceCapError("falsifier evaluations", cap, total)
        for lo in range(0, total, _CHUNK):
            rest = np.arange(lo, min(total, lo + _CHUNK), dtype=np.int64)
            env = {}
            for v in reversed(names):
                rest, env[v] = np.divmod(rest, S.size)
            bad = np.flatnonzero(np.atleast_1d(evaluate_many(t1, env, S) != evaluate_many(t2, env, S)))
            if len(bad):
                j = int(bad[0])
                assignment = {v: int(env[v][j]) for v in names}
                return Separator(N, {v: elems[x] for v, x in assignment.items()},
                                 elems[evaluate_term(t1, assignment, S)],
                                 elems[evaluate_term(t2, assignment, S)])
    return None


# ---------------------------------------------------------------- universal bias

def _vp(S: FiniteInverseSemigroup, form: CanonicalForm) -> np.ndarray:
    """Image of a form in the symmetric inverse monoid on S (-1 = undefined)."""
    n = S.size
    idx = np.arange(n)
    out = np.full(n, -1, dtype=np.int64)
    for x, a, bs in form.summands:
        inside = S.mul[a] == idx
        for b in bs:
            inside &= S.mul[b] != idx
        inside &= S.mul[S.dom(x)] == idx
        if (out[inside] >= 0).any():
            raise AssertionError("summands overlap")
        out[inside] = S.mul[x][inside]
    return out


def _compose(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    return np.append(f, -1)[g]


def _invert(f: np.ndarray) -> np.ndarray:
    h = np.full_like(f, -1)
    src = np.flatnonzero(f >= 0)
    h[f[src]] = src
    return h


def _vp_sd(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    ran_g = np.zeros(len(f) + 1, dtype=bool)
    ran_g[g[g >= 0]] = True
    keep = (f >= 0) & (g < 0) & ~ran_g[f]
    return np.where(keep, f, -1)


def _vp_sa(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    h = _vp_sd(f, g)
    if ((h >= 0) & (g >= 0)).any():
        raise AssertionError("skew difference overlaps its subtrahend")
    return np.where(g >= 0, g, h)


@dataclass(frozen=True)
class UniversalBias:
    bias: FiniteBias
    forms: tuple[CanonicalForm, ...]
    images: np.ndarray          # row k: image of element k acting on S
    embedding: np.ndarray       # S index -> element index
    base: TableBase


def universal_bias(S: FiniteInverseSemigroup, cap: int = caps.UNIVERSAL_BIAS_ELEMENTS,
                   check_order: bool = True) -> UniversalBias:
    """The bias generated by S, built inside the symmetric inverse monoid on S.

    Every element carries a canonical form over S whose image is checked to
    be the element. With ``check_order`` the order given by decide_leq on
    forms is compared with inclusion of images on all pairs.
    """
    base = TableBase(S)
    n = S.size
    images: list[np.ndarray] = []
    forms: list[CanonicalForm] = []
    index: dict[bytes, int] = {}

    def add(img: np.ndarray, make) -> None:
        key = img.tobytes()
        if key in index:
            return
        if len(images) >= cap:
            raise ResourceCapError("universal bias size", cap)
        form = make()
        if not np.array_equal(_vp(S, form), img):
            raise AssertionError("canonical form disagrees with its image")
        index[key] = len(images)
        images.append(img)
        forms.append(form)

    add(np.full(n, -1, dtype=np.int64), lambda: CanonicalForm(()))
    for s in range(n):
        add(_vp(S, form_of_element(base, s)), lambda s=s: form_of_element(base, s))
    done = 0
    while done < len(images):
        hi = len(images)
        for i in range(done, hi):
            f, p = images[i], forms[i]
            add(_invert(f), lambda p=p: form_inv(base, p))
            for j in range(hi):
                g, q = images[j], forms[j]
                for u, v, fu, fv in ((f, g, p, q), (g, f, q, p)):
                    add(_compose(u, v), lambda fu=fu, fv=fv: form_mul(base, fu, fv))
                    add(_vp_sd(u, v), lambda fu=fu, fv=fv: form_sd(base, fu, fv))
                    add(_vp_sa(u, v), lambda fu=fu, fv=fv: form_sa(base, fu, fv))
        done = hi
    imgs = np.array(images, dtype=np.int64)
    N = len(imgs)
    keys = _row_keys(imgs)
    order = np.argsort(keys, kind="stable")
    ks = keys[order]

    def lookup(rows: np.ndarray) -> np.ndarray:
        q = _row_keys(rows)
        pos = np.minimum(np.searchsorted(ks, q), N - 1)
        if not (ks[pos] == q).all():
            raise AssertionError("generated set is not closed")
        return order[pos]

    ext = np.concatenate([imgs, np.full((N, 1), -1, dtype=np.int64)], axis=1)
    mul = np.empty((N, N), dtype=np.int64)
    for x in range(N):
        mul[x] = lookup(ext[x][imgs])
    inv = lookup(np.array([_invert(f) for f in imgs]))
    names = [forms[k].to_string(base) for k in range(N)]
    B = boolean_closure(FiniteInverseSemigroup(mul, inv, names, check=True))
    emb = np.array([index[_vp(S, form_of_element(base, s)).tobytes()] for s in range(n)], dtype=np.int64)
    if len(set(emb.tolist())) != n or not np.array_equal(B.mul[emb[:, None], emb[None, :]], emb[S.mul]):
        raise AssertionError("S does not embed in its universal bias")
    _check_idempotent_ring(S, B, imgs, emb)
    if check_order:
        for i in range(N):
            for j in range(N):
                want = bool(((imgs[i] < 0) | (imgs[i] == imgs[j])).all())
                if decide_leq(base, forms[i], forms[j]) != want:
                    raise AssertionError(f"form order disagrees with images at {(i, j)}")
    return UniversalBias(B, tuple(forms), imgs, emb, base)


def _check_idempotent_ring(S, B: FiniteBias, imgs: np.ndarray, emb: np.ndarray) -> None:
    """Idempotents of the universal bias = Boolean ring generated by Idp S."""
    sets = {frozenset(np.flatnonzero(imgs[emb[e]] >= 0).tolist()) for e in S.idempotents}
    sets.add(frozenset())
    frontier = set(sets)
    while frontier:
        new = set()
        for u in frontier:
            for v in list(sets):
                for w in (u & v, u - v, v - u, u | v):
                    if w not in sets:
                        new.add(w)
        sets |= new
        frontier = new
    have = {frozenset(np.flatnonzero(imgs[e] >= 0).tolist()) for e in B.idempotents}
    if have != sets:
        raise AssertionError("idempotents differ from the generated Boolean ring")
