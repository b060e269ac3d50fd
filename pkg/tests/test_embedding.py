from __future__ import annotations

import itertools

import numpy as np
import pytest

from biaskit.embedding import find_bias_embedding
from biaskit.errors import ResourceCapError
from biaskit.variety import matrix_bias_embeds

from support import group, gz, mat, sym


def is_bias_embedding(S, T, f) -> bool:
    f = np.asarray(f)
    if len(set(f.tolist())) != S.size:
        return False
    for table_s, table_t in ((S.mul, T.mul), (S.sd_table, T.sd_table), (S.sa_table, T.sa_table)):
        if not np.array_equal(f[table_s], table_t[f[:, None], f[None, :]]):
            return False
    return bool(np.array_equal(f[S.inv], T.inv[f]))


def brute_embedding_exists(S, T) -> bool:
    """Every injective map fixing zero, tested against all operations."""
    rest = [x for x in range(S.size) if x != S.zero]
    targets = [y for y in range(T.size) if y != T.zero]
    for images in itertools.permutations(targets, len(rest)):
        f = np.empty(S.size, dtype=np.int64)
        f[S.zero] = T.zero
        f[rest] = images
        if is_bias_embedding(S, T, f):
            return True
    return False


SMALL = {"I1": lambda: sym(1)[0], "I2": lambda: sym(2)[0], "Z2^0": lambda: gz("Z2"), "Z3^0": lambda: gz("Z3"),
         "S3^0": lambda: gz("S3")}


class TestSearch:
    @pytest.mark.parametrize("s, t", [(s, t) for s in SMALL for t in SMALL if s != "S3^0" or t == "S3^0"])
    def test_against_exhaustive_maps(self, s, t):
        S, T = SMALL[s](), SMALL[t]()
        f = find_bias_embedding(S, T)
        assert (f is not None) == brute_embedding_exists(S, T)
        if f is not None:
            assert is_bias_embedding(S, T, f)

    def test_i2_into_i3(self):
        f = find_bias_embedding(sym(2)[0], sym(3)[0])
        assert f is not None and is_bias_embedding(sym(2)[0], sym(3)[0], f)

    def test_z3_not_into_m2_z2(self):
        assert find_bias_embedding(gz("Z3"), mat(2, "Z2")) is None

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            find_bias_embedding(mat(2, "Z2"), mat(3, "Z2"), cap=2)


@pytest.mark.parametrize("m, g, n, h", [(1, "Z2", 2, "triv"), (1, "Z3", 2, "Z2"), (2, "triv", 2, "Z2"),
                                        (2, "Z2", 2, "triv"), (1, "Z3", 3, "triv"), (2, "Z3", 3, "Z3")])
def test_criterion_matches_search(m, g, n, h):
    verdict = matrix_bias_embeds(m, group(g), n, group(h)).embeds
    f = find_bias_embedding(mat(m, g), mat(n, h))
    assert verdict == (f is not None)
    if f is not None:
        assert is_bias_embedding(mat(m, g), mat(n, h), f)
