"""Backtracking search for injective bias homomorphisms between finite biases.

A partial map is grown one generator at a time: the next generator is the
least element not yet reached, its candidate images are filtered against
every already-mapped element, and each choice is closed under product,
inverse, skew difference and skew addition (semi-naive, vectorized).
"""

from __future__ import annotations

import numpy as np

from .bias import FiniteBias
from .errors import ResourceCapError


class _Tables:
    def __init__(self, B: FiniteBias):
        self.ops = (B.mul, B.sd_table, B.sa_table)
        self.inv = B.inv
        self.is_idem = B.is_idem


def _close(S: _Tables, T: _Tables, f: np.ndarray, back: np.ndarray, new: np.ndarray) -> bool:
    """Extend f through the operations; False on inconsistency or collision."""
    while len(new):
        known = np.flatnonzero(f >= 0)
        ss, ts = [S.inv[new]], [T.inv[f[new]]]
        a_new, b_all = np.repeat(new, len(known)), np.tile(known, len(new))
        for sop, top in zip(S.ops, T.ops):
            ss += [sop[a_new, b_all], sop[b_all, a_new]]
            ts += [top[f[a_new], f[b_all]], top[f[b_all], f[a_new]]]
        s = np.concatenate(ss)
        t = np.concatenate(ts)
        have = f[s]
        if ((have >= 0) & (have != t)).any():
            return False
        fresh = have < 0
        s, t = s[fresh], t[fresh]
        if not len(s):
            return True
        pairs = np.unique(np.stack([s, t], axis=1), axis=0)
        if len(np.unique(pairs[:, 0])) != len(pairs) or len(np.unique(pairs[:, 1])) != len(pairs):
            return False
        if (back[pairs[:, 1]] >= 0).any():
            return False
        f[pairs[:, 0]] = pairs[:, 1]
        back[pairs[:, 1]] = pairs[:, 0]
        new = pairs[:, 0]
    return True


def _candidates(S: FiniteBias, T: FiniteBias, St: _Tables, Tt: _Tables, f: np.ndarray,
                back: np.ndarray, x: int) -> np.ndarray:
    cand = np.flatnonzero((back < 0) & (Tt.is_idem == St.is_idem[x]))
    known = np.flatnonzero(f >= 0)
    fk = f[known]
    for sop, top in zip(St.ops, Tt.ops):
        for s_row, side in ((sop[x, known], 0), (sop[known, x], 1)):
            m = f[s_row] >= 0
            if not m.any():
                continue
            want = f[s_row[m]]
            got = top[cand[:, None], fk[None, m]] if side == 0 else top[fk[None, m], cand[:, None]]
            cand = cand[(got == want[None, :]).all(axis=1)]
    xi = St.inv[x]
    if f[xi] >= 0:
        cand = cand[Tt.inv[cand] == f[xi]]
    return cand


def find_bias_embedding(S: FiniteBias, T: FiniteBias, cap: int = 10**6) -> np.ndarray | None:
    """First injective bias homomorphism S -> T in search order, or None.

    ``cap`` bounds the number of candidate images tried.
    """
    if S.size > T.size or len(S.idempotents) > len(T.idempotents):
        return None
    St, Tt = _Tables(S), _Tables(T)
    f = np.full(S.size, -1, dtype=np.int64)
    back = np.full(T.size, -1, dtype=np.int64)
    f[S.zero] = T.zero
    back[T.zero] = S.zero
    if not _close(St, Tt, f, back, np.array([S.zero])):
        return None
    work = 0

    def rec(f: np.ndarray, back: np.ndarray):
        nonlocal work
        free = np.flatnonzero(f < 0)
        if not len(free):
            return f
        x = int(free[0])
        for t in _candidates(S, T, St, Tt, f, back, x).tolist():
            work += 1
            if work > cap:
                raise ResourceCapError("embedding search steps", cap)
            f2, b2 = f.copy(), back.copy()
            f2[x], b2[t] = t, x
            if _close(St, Tt, f2, b2, np.array([x])):
                res = rec(f2, b2)
                if res is not None:
                    return res
        return None

    return rec(f, back)
