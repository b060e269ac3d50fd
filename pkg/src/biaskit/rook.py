"""Generalized rook matrices over a finite bias, and constructions on them:
lifting homomorphisms and congruences entrywise, block and corner
isomorphisms, and lifting matrix units along surjections."""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Sequence

import numpy as np

from . import caps
from .bias import BiasCongruence, FiniteBias, _row_keys, boolean_closure, hom_defect, is_d_cancellative
from .errors import ResourceCapError, ValidationError
from .groups import FiniteGroup, trivial_group
from .semigroup import (FiniteInverseSemigroup, PartialInjection, green_relations, group_with_zero,
                        symmetric_inverse_monoid)


def group_zero_bias(G: FiniteGroup) -> FiniteBias:
    """G with a zero adjoined, as a bias (zero at 0, g at g+1)."""
    return boolean_closure(group_with_zero(G))


class RookBias(FiniteBias):
    """M_n(S): all n x n rook matrices over the bias ``base``.

    ``entries[x]`` is the n x n array of base indices of matrix x.
    """

    def __init__(self, S, atoms, emask, mask_to_idem, *, n: int, base: FiniteBias,
                 entries: np.ndarray):
        super().__init__(S, atoms, emask, mask_to_idem)
        self.n = n
        self.base = base
        self.entries = entries
        self.entries.setflags(write=False)
        keys = _row_keys(entries.reshape(len(entries), -1))
        self._key_order = np.argsort(keys, kind="stable")
        self._keys_sorted = keys[self._key_order]

    def lookup(self, mats: np.ndarray) -> np.ndarray:
        """Index of each n x n matrix in ``mats`` (shape (..., n, n)); -1 if invalid."""
        mats = np.asarray(mats, dtype=np.int64)
        lead = mats.shape[:-2]
        q = _row_keys(mats.reshape(-1, self.n * self.n))
        pos = np.minimum(np.searchsorted(self._keys_sorted, q), self.size - 1)
        out = np.where(self._keys_sorted[pos] == q, self._key_order[pos], -1)
        return out.reshape(lead)

    def index(self, mat) -> int:
        k = int(self.lookup(np.asarray(mat)[None])[0])
        if k < 0:
            raise ValidationError("not a rook matrix", witness=np.asarray(mat).tolist())
        return k

    def singleton(self, x: int, i: int, j: int) -> int:
        """The matrix with x at (i, j) (1-based) and zero elsewhere."""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValidationError("matrix position out of range", witness=(i, j))
        mat = np.full((self.n, self.n), self.base.zero, dtype=np.int64)
        mat[i - 1, j - 1] = x
        return self.index(mat)

    def to_json(self) -> dict:
        out = super().to_json()
        out["matrices"] = [{"n": self.n, "entries": e.tolist()} for e in self.entries]
        return out


def _valid_rows(S: FiniteBias, n: int) -> list[tuple[int, ...]]:
    """Rows whose entries have pairwise orthogonal ranges, lexicographic."""
    rmask = [S.atom_mask(S.ran(x)) for x in range(S.size)]
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], used: int):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for x in range(S.size):
            if rmask[x] & used == 0:
                prefix.append(x)
                rec(prefix, used | rmask[x])
                prefix.pop()

    rec([], 0)
    return out


def _enumerate(S: FiniteBias, n: int, cap: int) -> np.ndarray:
    rows = _valid_rows(S, n)
    dmask = [[S.atom_mask(S.dom(x)) for x in row] for row in rows]
    found: list[tuple[int, ...]] = []
    used = [0] * n

    def rec(depth: int, chosen: list[int]):
        if depth == n:
            found.append(tuple(chosen))
            if len(found) > cap:
                raise ResourceCapError("rook matrix count", cap, len(found))
            return
        for k, dm in enumerate(dmask):
            if all(dm[j] & used[j] == 0 for j in range(n)):
                for j in range(n):
                    used[j] |= dm[j]
                chosen.append(k)
                rec(depth + 1, chosen)
                chosen.pop()
                for j in range(n):
                    used[j] &= ~dm[j]

    rec(0, [])
    R = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    idx = np.array(found, dtype=np.int64).reshape(len(found), n)
    return R[idx]                                   # (N, n, n)


def _fold_products(S: FiniteBias, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Rook products of every matrix in A with every matrix in B.

    Returns (len(A), len(B), n, n) base indices; raises if some entry sum
    is not an orthogonal join.
    """
    n = A.shape[-1]
    prods = S.mul[A[:, None, :, :, None], B[None, :, None, :, :]]  # (a, b, i, j, k)
    acc = prods[:, :, :, 0, :]
    J = S.join_table
    for j in range(1, n):
        acc = J[acc, prods[:, :, :, j, :]]
        if (acc < 0).any():
            a, b, i, k = np.argwhere(acc < 0)[0]
            raise AssertionError(f"entry ({i + 1},{k + 1}) of a product is not an orthogonal join",
                                 (int(a), int(b)))
    return acc


def _matrix_name(S: FiniteBias, mat: np.ndarray) -> str:
    return "[" + ",".join("[" + ",".join(S.names[x] for x in row) + "]" for row in mat.tolist()) + "]"


def rook_bias(n: int, S: FiniteBias, cap: int = caps.MATRIX_ELEMENTS) -> RookBias:
    """Enumerate M_n(S) and build its tables.

    Matrices are ordered lexicographically by their row-major entries.
    Idempotents are checked to be exactly the diagonal matrices with
    idempotent entries.
    """
    if n < 1:
        raise ValidationError("matrix order must be positive")
    S = boolean_closure(S)
    E = _enumerate(S, n, cap)
    N = len(E)
    flat = E.reshape(N, n * n)
    keys = _row_keys(flat)
    order = np.argsort(keys, kind="stable")
    keys_sorted = keys[order]

    def lookup(mats):
        q = _row_keys(mats.reshape(-1, n * n))
        pos = np.minimum(np.searchsorted(keys_sorted, q), N - 1)
        return np.where(keys_sorted[pos] == q, order[pos], -1)

    mul = np.empty((N, N), dtype=np.int64)
    step = max(1, 4_000_000 // (N * n ** 3))
    for lo in range(0, N, step):
        block = lookup(_fold_products(S, E[lo:lo + step], E)).reshape(-1, N)
        if (block < 0).any():
            a, b = np.argwhere(block < 0)[0]
            raise AssertionError("product of rook matrices is not a rook matrix", (lo + int(a), int(b)))
        mul[lo:lo + step] = block
    inv = lookup(S.inv[E].transpose(0, 2, 1))
    names = [_matrix_name(S, m) for m in E]
    T = FiniteInverseSemigroup(mul, inv, names, check=False)
    M = boolean_closure(T, factory=lambda *a: RookBias(*a, n=n, base=S, entries=E))
    off = ~np.eye(n, dtype=bool)
    diag_idem = (E[:, off] == S.zero).all(axis=1) & S.is_idem[E[:, ~off]].all(axis=1)
    if not np.array_equal(diag_idem, M.is_idem):
        x = int(np.argmax(diag_idem != M.is_idem))
        raise AssertionError(f"idempotent characterization fails at {names[x]}")
    return M


def singleton(x: int, i: int, j: int, M: RookBias) -> int:
    return M.singleton(x, i, j)


# ---------------------------------------------------------------- functoriality

def lift_hom(f, S: FiniteBias, T: FiniteBias, MS: RookBias, MT: RookBias) -> np.ndarray:
    """Entrywise application of the bias homomorphism f: S -> T."""
    why = hom_defect(S, T, f)
    if why is not None:
        raise ValidationError(f"not a bias homomorphism: {why}")
    f = np.asarray(f, dtype=np.int64)
    out = MT.lookup(f[MS.entries])
    if (out < 0).any():
        raise AssertionError("entrywise image is not a rook matrix")
    return out


def lift_congruence(alpha: BiasCongruence, M: RookBias) -> BiasCongruence:
    """M_n(alpha): matrices are related iff their entries are, entrywise."""
    lab = np.asarray(alpha.labels, dtype=np.int64)[M.entries].reshape(M.size, -1)
    _, labels = np.unique(_row_keys(lab), return_inverse=True)
    return BiasCongruence.from_labels(labels)


def _check_iso(A: FiniteBias, B: FiniteBias, f: np.ndarray, what: str) -> None:
    if len(np.unique(f)) != B.size or len(f) != A.size or (f < 0).any():
        raise AssertionError(f"{what} is not a bijection")
    if not np.array_equal(B.mul[f[:, None], f[None, :]], f[A.mul]):
        raise AssertionError(f"{what} is not multiplicative")
    if not np.array_equal(B.inv[f], f[A.inv]):
        raise AssertionError(f"{what} does not preserve inverses")


@dataclass(frozen=True)
class BlockIso:
    big: RookBias        # M_{mn}(S)
    inner: RookBias      # M_m(S)
    outer: RookBias      # M_n(M_m(S))
    forward: np.ndarray  # big index -> outer index


def block_iso(m: int, n: int, S: FiniteBias, cap: int = caps.MATRIX_ELEMENTS) -> BlockIso:
    """The row-major blocking M_{mn}(S) -> M_n(M_m(S)), verified an isomorphism."""
    big = rook_bias(m * n, S, cap)
    inner = rook_bias(m, S, cap)
    outer = rook_bias(n, inner, cap)
    N = big.size
    blocks = big.entries.reshape(N, n, m, n, m).transpose(0, 1, 3, 2, 4)
    inner_idx = inner.lookup(blocks)                # (N, n, n)
    forward = outer.lookup(inner_idx)
    _check_iso(big, outer, forward, "block map")
    return BlockIso(big, inner, outer, forward)


# ---------------------------------------------------------------- corners

@dataclass(frozen=True)
class CornerIso:
    corner: tuple[int, ...]      # elements x of S with e x e = x
    local: tuple[int, ...]       # elements of e_1 S e_1, as S indices
    local_bias: FiniteBias       # e_1 S e_1 relabelled 0..len(local)-1
    matrices: RookBias           # M_n(e_1 S e_1)
    witnesses: tuple[int, ...]   # c_i with d(c_i) = e_1, r(c_i) = e_i
    phi: np.ndarray              # position in corner -> matrix index
    psi: np.ndarray              # matrix index -> S index


def corner_iso(S: FiniteBias, es: Sequence[int], cap: int = caps.MATRIX_ELEMENTS) -> CornerIso:
    """eSe = M_n(e_1 S e_1) for a homogeneous sequence e_1..e_n with join e.

    phi(x) = (c_i^-1 x c_j) and psi(X) = join of c_i x_ij c_j^-1; both
    round trips and the multiplicativity of phi are verified.
    """
    es = list(es)
    n = len(es)
    if n == 0:
        raise ValidationError("empty idempotent sequence")
    for e in es:
        if not S.is_idem[e]:
            raise ValidationError("sequence entry is not idempotent", witness=(e,))
    green = green_relations(S)
    for i in range(n):
        for j in range(i + 1, n):
            if S.m(es[i], es[j]) != S.zero:
                raise ValidationError("sequence entries are not orthogonal", witness=(i + 1, j + 1))
    cs = [es[0]]
    for i in range(1, n):
        c = green.d_witness(es[0], es[i])
        if c is None:
            raise ValidationError("sequence entries are not D-equivalent", witness=(1, i + 1))
        cs.append(c)
    e = S.join_all(es)
    idx = np.arange(S.size)
    corner = idx[S.mul[e][S.mul[:, e]] == idx]
    e1 = es[0]
    local = idx[(S.mul[e1][S.mul[:, e1]] == idx)]
    local_bias = boolean_closure(S.restrict(local))
    M = rook_bias(n, local_bias, cap)
    pos = np.full(S.size, -1, dtype=np.int64)
    pos[local] = np.arange(len(local))
    c = np.array(cs, dtype=np.int64)
    ci = S.inv[c]
    # entries c_i^-1 x c_j for each corner element x
    ent = S.mul[S.mul[ci[None, :, None], corner[:, None, None]], c[None, None, :]]
    phi = M.lookup(pos[ent])
    if (phi < 0).any():
        raise AssertionError("corner element does not map to a rook matrix")
    # psi(X) = join over (i, j) of c_i x_ij c_j^-1
    X = local[M.entries]                            # S indices, (N, n, n)
    terms = S.mul[S.mul[c[None, :, None], X], ci[None, None, :]].reshape(M.size, -1)
    psi = terms[:, 0]
    J = S.join_table
    for k in range(1, n * n):
        psi = J[psi, terms[:, k]]
        if (psi < 0).any():
            raise AssertionError("matrix terms are not pairwise orthogonal")
    cpos = np.full(S.size, -1, dtype=np.int64)
    cpos[corner] = np.arange(len(corner))
    if not np.array_equal(psi[phi], corner):
        raise AssertionError("psi o phi is not the identity")
    if not np.array_equal(phi[cpos[psi]], np.arange(M.size)):
        raise AssertionError("phi o psi is not the identity")
    prod = S.mul[np.ix_(corner, corner)]
    if not np.array_equal(phi[cpos[prod]], M.mul[phi[:, None], phi[None, :]]):
        raise AssertionError("phi is not multiplicative")
    return CornerIso(tuple(int(x) for x in corner), tuple(int(x) for x in local), local_bias, M,
                     tuple(cs), phi, psi)


# ---------------------------------------------------------------- symmetric inverse monoids

def rook_to_symmetric(n: int) -> tuple[RookBias, FiniteBias, list[PartialInjection], np.ndarray]:
    """The isomorphism M_n({0,1}) -> I_n sending X to {j -> i : X_ij = 1}.

    Returns (M, I_n, its elements, map) after verifying the map.
    """
    M = rook_bias(n, group_zero_bias(trivial_group()))
    S, elems = symmetric_inverse_monoid(n)
    I = boolean_closure(S)
    code = {e: k for k, e in enumerate(elems)}
    f = np.empty(M.size, dtype=np.int64)
    for x, mat in enumerate(M.entries.tolist()):
        pairs = tuple(sorted((j + 1, i + 1) for i in range(n) for j in range(n) if mat[i][j] != M.base.zero))
        f[x] = code[PartialInjection(n, pairs)]
    _check_iso(M, I, f, "rook-to-partial-injection map")
    return M, I, elems, f


def symmetric_unit_row(n: int, elems: Sequence[PartialInjection]) -> list[int]:
    """Indices of the maps {i -> 1}, i = 1..n, in an element list of I_n."""
    code = {e: k for k, e in enumerate(elems)}
    return [code[PartialInjection(n, ((i, 1),))] for i in range(1, n + 1)]


# ---------------------------------------------------------------- lifting matrix units

@dataclass(frozen=True)
class MatrixUnitLift:
    units: np.ndarray                 # units[i, j] = b_{i+1, j+1}, S indices
    symmetric: FiniteBias             # I_n
    elements: list[PartialInjection]  # its elements
    psi: np.ndarray                   # I_n index -> S index


def _check_surjective_hom(phi: np.ndarray, S: FiniteBias, T: FiniteBias) -> None:
    why = hom_defect(S, T, phi)
    if why is not None:
        raise ValidationError(f"not a bias homomorphism: {why}")
    missing = np.setdiff1d(np.arange(T.size), phi)
    if len(missing):
        raise ValidationError("map is not surjective", witness=(int(missing[0]),))


def lift_matrix_units(phi, S: FiniteBias, T: FiniteBias, row: Sequence[int]) -> MatrixUnitLift:
    """Lift the matrix units of T along a surjection phi: S -> T.

    ``row[i-1]`` is the unit e_{1,i} of T (a map sending i to 1 when T is
    I_n). Preimages are the least indices available; the lifted units
    b_{i,j} satisfy b_ij b_kl = [j = k] b_il and phi(b_ij) = e_ij. Also
    returns psi: I_n -> S, x -> join of b_{x(i),i}, with phi o psi equal to
    the canonical map I_n -> T.
    """
    phi = np.asarray(phi, dtype=np.int64)
    _check_surjective_hom(phi, S, T)
    n = len(row)
    e = np.array([[T.m(T.i(row[i]), row[j]) for j in range(n)] for i in range(n)])
    if not T.is_idem[row[0]]:
        raise ValidationError("e_{1,1} is not idempotent", witness=(row[0],))
    a = [min(x for x in S.idempotents if phi[x] == row[0])]
    a += [int(np.argmax(phi == row[i])) for i in range(1, n)]
    # make the domains pairwise orthogonal
    shrunk = list(a)
    acc = S.dom(a[0])
    for i in range(1, n):
        shrunk[i] = S.m(a[i], S.ediff(S.dom(a[i]), acc))
        acc = S.ejoin(acc, S.dom(a[i]))
    b11 = S.prod(*[S.ran(x) for x in shrunk])
    b1 = [S.m(b11, x) for x in shrunk]
    b = np.array([[S.m(S.i(b1[i]), b1[j]) for j in range(n)] for i in range(n)], dtype=np.int64)
    if not np.array_equal(phi[b], e):
        raise AssertionError("lifted units do not map onto the units of T")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    want = b[i, l] if j == k else S.zero
                    if S.m(b[i, j], b[k, l]) != want:
                        raise AssertionError(f"matrix-unit relation fails at {(i + 1, j + 1, k + 1, l + 1)}")
    Isg, elems = symmetric_inverse_monoid(n)
    I = boolean_closure(Isg)
    psi = np.array([S.join_all(int(b[x(i) - 1, i - 1]) for i in sorted(x.domain)) for x in elems],
                   dtype=np.int64)
    why = hom_defect(I, S, psi)
    if why is not None:
        raise AssertionError(f"psi is not a bias homomorphism: {why}")
    iota = np.array([T.join_all(int(e[x(i) - 1, i - 1]) for i in sorted(x.domain)) for x in elems])
    if not np.array_equal(phi[psi], iota):
        raise AssertionError("phi o psi differs from the canonical map")
    return MatrixUnitLift(b, I, elems, psi)


@dataclass(frozen=True)
class GroupMatrixLift:
    units: np.ndarray          # lifted matrix units a_ij in S
    lifted_group: FiniteGroup  # {x : d(x) = r(x) = a_11}, elements named by S
    group_elements: tuple[int, ...]
    psi: np.ndarray            # lifted group -> G
    matrices: RookBias         # M_n(lifted group with zero)
    eta: np.ndarray            # matrices -> S


def lift_group_matrix(phi, S: FiniteBias, M: RookBias, G: FiniteGroup) -> GroupMatrixLift:
    """Lift a surjection phi: S -> M_n(G^0) (S D-cancellative) to a group
    surjection psi and an embedding eta: M_n(lifted^0) -> S with
    M_n(psi^0) = phi o eta, all verified."""
    if not is_d_cancellative(S):
        raise ValidationError("source bias is not D-cancellative")
    n = M.n
    one = G.identity + 1
    row = [M.singleton(one, 1, i) for i in range(1, n + 1)]
    lift = lift_matrix_units(phi, S, M, row)
    a = lift.units
    a11 = int(a[0, 0])
    gbar = [x for x in range(S.size) if S.dom(x) == a11 and S.ran(x) == a11]
    pos = {x: k for k, x in enumerate(gbar)}
    H = FiniteGroup([[pos[S.m(x, y)] for y in gbar] for x in gbar], [S.names[x] for x in gbar])
    phi = np.asarray(phi, dtype=np.int64)
    psi = np.array([M.entries[phi[x]][0, 0] - 1 for x in gbar], dtype=np.int64)
    if sorted(set(psi.tolist())) != list(range(G.order)):
        raise AssertionError("lifted group does not map onto G")
    Hz = group_zero_bias(H)
    MH = rook_bias(n, Hz)
    to_s = np.array([S.zero] + gbar, dtype=np.int64)
    X = to_s[MH.entries]                                    # (N, n, n) in S
    terms = S.mul[S.mul[a[None, :, 0, None], X], a[None, None, 0, :]].reshape(MH.size, -1)
    eta = terms[:, 0]
    for k in range(1, n * n):
        eta = S.join_table[eta, terms[:, k]]
        if (eta < 0).any():
            raise AssertionError("terms of eta are not pairwise orthogonal")
    if len(np.unique(eta)) != MH.size:
        raise AssertionError("eta is not injective")
    why = hom_defect(MH, S, eta)
    if why is not None:
        raise AssertionError(f"eta is not a bias homomorphism: {why}")
    psi0 = np.concatenate([[0], psi + 1])
    if not np.array_equal(M.lookup(psi0[MH.entries]), phi[eta]):
        raise AssertionError("triangle M_n(psi^0) = phi o eta does not commute")
    return GroupMatrixLift(a, H, tuple(gbar), psi, MH, eta)
