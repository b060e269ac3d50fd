from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from biaskit.errors import ValidationError
from biaskit.groups import cyclic_group, trivial_group
from biaskit.rook import group_zero_bias
from biaskit.typestructure import (decompose, element_index, index_consistency, bias_index, matrix_product_bias,
                                   primeness_and_sdi, same_factors, type_monoid, typ_leq, vector_index)

from support import group, gz, i2_times_z3, ident, library, pi, relabel, sym


class TestDecompose:
    def test_i3(self):
        dec = decompose(sym(3)[0])
        assert same_factors(dec, [(3, trivial_group())])

    def test_i2_times_z3(self):
        dec = decompose(i2_times_z3())
        assert same_factors(dec, [(2, trivial_group()), (1, cyclic_group(3))])
        assert dec.signature == [(2, 1), (1, 3)]

    @pytest.mark.parametrize("name", ["Z2", "Z3", "S3"])
    def test_group_with_zero(self, name):
        assert same_factors(decompose(gz(name)), [(1, group(name))])

    def test_two_element_bias(self):
        assert decompose(sym(1)[0]).signature == [(1, 1)]

    @pytest.mark.parametrize("name", list(library()))
    def test_isomorphism_round_trip(self, name):
        S = library()[name]
        dec = decompose(S)
        P = dec.product
        assert np.array_equal(dec.inverse[dec.iso], np.arange(S.size))
        assert np.array_equal(P.mul[dec.iso[:, None], dec.iso[None, :]], dec.iso[S.mul])
        assert np.array_equal(P.sd_table[dec.iso[:, None], dec.iso[None, :]], dec.iso[S.sd_table])

    def test_json(self):
        out = decompose(sym(2)[0]).to_json()
        assert out["iso_checked"] is True
        assert [(f["n"], f["group"]["mul"]) for f in out["factors"]] == [(2, [[0]])]

    @pytest.mark.parametrize("shape", [[(2, "Z2")], [(1, "Z2"), (1, "Z3")], [(2, "triv"), (1, "Z2")],
                                      [(1, "triv"), (1, "triv"), (1, "Z2")]])
    def test_recompose_and_redecompose(self, shape):
        want = [(n, group(g)) for n, g in shape]
        P = matrix_product_bias(want)
        dec = decompose(P)
        assert same_factors(dec, want)
        assert same_factors(decompose(dec.product), want)

    def test_relabelled_inputs(self):
        rng = np.random.default_rng(7)
        P = matrix_product_bias([(2, trivial_group()), (1, cyclic_group(2))])
        for _ in range(3):
            dec = decompose(relabel(P, rng.permutation(P.size)))
            assert same_factors(dec, [(2, trivial_group()), (1, cyclic_group(2))])

    def test_same_factors_discriminates(self):
        assert not same_factors([(1, cyclic_group(4))], [(1, cyclic_group(2))])
        assert not same_factors([(1, cyclic_group(2))], [(1, cyclic_group(2)), (1, trivial_group())])

    def test_empty_product_rejected(self):
        with pytest.raises(ValidationError):
            matrix_product_bias([])


class TestTypeMonoid:
    def test_i2(self):
        tm = type_monoid(sym(2)[0])
        assert tm.k == 1 and tm.unit == (2,)
        assert tm.typ[ident(2, 1)] == (1,)

    def test_i2_times_z3(self):
        tm = type_monoid(i2_times_z3())
        assert tm.k == 2 and tm.unit == (2, 1)

    def test_trivial_bias(self):
        tm = type_monoid(sym(1)[0])
        assert tm.k == 1 and tm.unit == (1,)

    @pytest.mark.parametrize("name", list(library()))
    def test_conjugation_decreases_type(self, name):
        S = library()[name]
        tm = type_monoid(S)
        for x in range(S.size):
            for e in S.idempotents:
                assert typ_leq(tm.typ[S.m(S.m(x, e), S.i(x))], tm.typ[e])

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_type_counts_points(self, n):
        S, elems, _ = sym(n)
        tm = type_monoid(S)
        for e in S.idempotents:
            assert tm.typ[e] == (len(elems[e].domain),)

    @given(st.integers(1, 3).flatmap(lambda k: st.tuples(*[st.tuples(*[st.integers(0, 2)] * k)] * 3)),
           st.integers(1, 4))
    def test_orthogonality_in_vectors(self, xyz, n):
        x, y, z = xyz

        def orth(u, v):
            return all(not (a and b) for a, b in zip(u, v))

        if orth(x, z) and orth(y, z):
            assert orth([a + b for a, b in zip(x, y)], z)
        if orth(x, y):
            assert orth([n * a for a in x], [n * b for b in y])


class TestIndex:
    def test_examples_in_i2(self):
        S = sym(2)[0]
        assert element_index(pi(2, (1, 2)), S) == 2
        assert element_index(pi(2, (1, 2), (2, 1)), S) == 1
        assert element_index(S.zero, S) == 0

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_symmetric(self, n):
        assert bias_index(sym(n)[0]) == n

    @pytest.mark.parametrize("name, want", [("I3", 3), ("Z3^0", 1), ("I2xZ3^0", 2), ("M2(Z2^0)", 2)])
    def test_consistency(self, name, want):
        rep = index_consistency(library()[name])
        assert rep.bias_index == rep.monoid_index == want
        assert rep.consistent

    def test_cyclic_of_order_five(self):
        rep = index_consistency(group_zero_bias(cyclic_group(5)))
        assert rep.bias_index == rep.monoid_index == 1

    @pytest.mark.parametrize("t", [(1,), (2,), (3,), (4,), (2, 1), (3, 3), (0, 5), (2, 2, 1)])
    def test_vector_index_by_multiples(self, t):
        # largest m with m*v <= t for nonzero v: brute force over v and m
        best = 0
        for v in itertools.product(*(range(c + 1) for c in t)):
            if any(v):
                m = 1
                while all((m + 1) * a <= c for a, c in zip(v, t)):
                    m += 1
                if all(m * a <= c for a, c in zip(v, t)):
                    best = max(best, m)
        assert vector_index(t) == best == max(t)

    @pytest.mark.parametrize("name", list(library()))
    def test_stabilisation(self, name):
        S = library()[name]
        for x in range(S.size):
            p = x
            for _ in range(1, S.size + 1):
                q = S.m(p, x)
                equal = S.dom(p) == S.ran(p)
                stable = S.dom(p) == S.dom(q) and S.ran(p) == S.ran(q)
                assert equal == stable
                p = q


class TestPrimeness:
    def test_i3(self):
        rep = primeness_and_sdi(sym(3)[0])
        assert rep.subdirectly_irreducible and rep.k == 1 and rep.consistent

    def test_i2_times_z3(self):
        rep = primeness_and_sdi(i2_times_z3())
        assert not rep.finitely_subdirectly_irreducible and rep.k == 2 and rep.consistent

    def test_trivial(self):
        assert primeness_and_sdi(sym(1)[0]).k == 1

    @pytest.mark.parametrize("name", list(library()))
    def test_fsi_implies_one_factor(self, name):
        rep = primeness_and_sdi(library()[name])
        assert rep.consistent
        assert rep.prime == (rep.k == 1)
