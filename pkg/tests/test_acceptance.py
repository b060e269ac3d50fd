"""Acceptance criteria 1-11. Each test prints one PASS/FAIL line and
asserts the same verdict; the lines are repeated in the terminal summary."""

from __future__ import annotations

import itertools
import math
import time

import numpy as np

from biaskit.bias import boolean_closure, congruence_lattice, hom_defect, satisfies_identity
from biaskit.embedding import find_bias_embedding
from biaskit.freebias import decide_equal, falsify
from biaskit.groups import cyclic_group, is_isomorphic, normal_subgroups, trivial_group, wreath_product
from biaskit.rook import (group_zero_bias, lift_congruence, lift_group_matrix, lift_hom, lift_matrix_units,
                          rook_bias, rook_to_symmetric, symmetric_unit_row)
from biaskit.semigroup import FiniteInverseSemigroup, symmetric_inverse_monoid
from biaskit.terms import Inv, Mul, SkewAdd, SkewDiff, Var, parse
from biaskit.typestructure import decompose, index_consistency, same_factors, type_monoid
from biaskit.variety import (VarietySpec, check_radical_chain, matrix_bias_embeds, symmetric_variety,
                             units_of_matrix_bias)

from conftest import ACCEPTANCE_LINES
from support import group, gz, i2_times_z3, mat, relabel, sym


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def acceptance_library():
    return {"I1": sym(1)[0], "I2": sym(2)[0], "I3": sym(3)[0], "I4": sym(4)[0], "Z2^0": gz("Z2"),
            "Z3^0": gz("Z3"), "M2(Z2^0)": mat(2, "Z2"), "I2xZ3^0": i2_times_z3()}


def test_criterion_01_cardinalities():
    start = time.perf_counter()
    ok = True
    sizes = {}
    for n, want in ((2, 7), (3, 34), (4, 209)):
        # direct: every map {1..n} -> {0..n} that is injective where defined
        direct = sum(1 for imgs in itertools.product(range(n + 1), repeat=n)
                     if len([v for v in imgs if v]) == len({v for v in imgs if v}))
        listed = symmetric_inverse_monoid(n)[0].size
        matrices = rook_bias(n, group_zero_bias(trivial_group())).size
        sizes[n] = (direct, listed, matrices)
        ok &= direct == listed == matrices == want
    elapsed = time.perf_counter() - start
    ok &= elapsed < 10
    report(1, ok, f"sizes {sizes} in {elapsed:.2f}s")


def test_criterion_02_index_law():
    start = time.perf_counter()
    wrong = []
    for name in ("triv", "Z2"):
        for k in range(1, 5):
            M = rook_bias(k, gz(name))
            for n in range(1, 5):
                if satisfies_identity(M, f"d(x^{n})", f"r(x^{n})") != (k <= n):
                    wrong.append((name, k, n))
    elapsed = time.perf_counter() - start
    report(2, not wrong and elapsed < 120, f"32 cases, mismatches {wrong}, {elapsed:.1f}s")


def test_criterion_03_index_equivalence():
    rows = {name: index_consistency(S) for name, S in acceptance_library().items()}
    bad = {k: (r.bias_index, r.monoid_index) for k, r in rows.items() if r.bias_index != r.monoid_index}
    report(3, not bad, f"indexes {({k: r.bias_index for k, r in rows.items()})}, mismatches {bad}")


def test_criterion_04_unit_groups():
    ok = True
    orders = {}
    for n, name, want in ((2, "Z2", 8), (3, "triv", 6), (2, "Z3", 18)):
        U = units_of_matrix_bias(n, group(name))
        M = U.matrices
        counted = sum(1 for x in range(M.size) if M.dom(x) == M.one and M.ran(x) == M.one)
        W = wreath_product(group(name), n)
        mult = all(M.m(U.iso[a], U.iso[b]) == U.iso[W.m(a, b)] for a in range(W.order) for b in range(W.order))
        orders[(n, name)] = counted
        ok &= counted == W.order == want and mult and len(set(U.iso.tolist())) == want
    report(4, ok, f"unit orders {orders}")


def test_criterion_05_congruence_transfer():
    ok = True
    counts = {}
    for n, name in ((1, "Z2"), (2, "Z2"), (1, "S3"), (2, "triv")):
        S, M = gz(name), mat(n, name)
        con_s, con_m = list(congruence_lattice(S)), congruence_lattice(M)
        lifted = [lift_congruence(a, M) for a in con_s]
        bijective = len(set(lifted)) == len(con_s) and set(lifted) == set(con_m)
        monotone = all(a.refines(b) == la.refines(lb)
                       for (a, la), (b, lb) in itertools.product(zip(con_s, lifted), repeat=2))
        nsub = len(normal_subgroups(group(name))) + 1
        counts[(n, name)] = (len(con_m), nsub)
        ok &= len(con_m) == nsub and bijective and monotone
    report(5, ok, f"(|Con M|, |NSub G|+1) {counts}")


def test_criterion_06_decomposition():
    rng = np.random.default_rng(20261015)
    sizes = {(n, g): mat(n, g).size for n in (1, 2, 3) for g in ("triv", "Z2", "Z3")}
    cases, failures = 0, []
    while cases < 12:
        k = int(rng.integers(1, 4))
        shape = [(int(rng.integers(1, 4)), str(rng.choice(["triv", "Z2", "Z3"]))) for _ in range(k)]
        if math.prod(sizes[f] for f in shape) > 300:
            continue
        factors = [(n, group(g)) for n, g in shape]
        P = boolean_closure(FiniteInverseSemigroup(*_product_tables([mat(n, g) for n, g in shape])))
        perm = rng.permutation(P.size)
        S = relabel(P, perm)
        dec = decompose(S)
        Q = dec.product
        round_trip = np.array_equal(dec.inverse[dec.iso], np.arange(S.size))
        mult = np.array_equal(Q.mul[dec.iso[:, None], dec.iso[None, :]], dec.iso[S.mul])
        if not (same_factors(dec, factors) and round_trip and mult):
            failures.append(shape)
        cases += 1
    report(6, cases >= 10 and not failures, f"{cases} relabelled products, failures {failures}")


def _product_tables(parts):
    sizes = [p.size for p in parts]
    # row-major tuples, so the code of a tuple is its position
    idx = np.array(list(itertools.product(*(range(s) for s in sizes))), dtype=np.int64).reshape(-1, len(parts))
    N = len(idx)
    mul = np.zeros((N, N), dtype=np.int64)
    inv = np.zeros(N, dtype=np.int64)
    for c, p in enumerate(parts):
        col = idx[:, c]
        mul = mul * p.size + p.mul[col[:, None], col[None, :]]
        inv = inv * p.size + p.inv[col]
    return mul, inv


def test_criterion_07_embedding_criterion():
    start = time.perf_counter()
    names = ("triv", "Z2", "Z3")
    disagreements = []
    for m, g, n, h in itertools.product((1, 2, 3), names, (1, 2, 3), names):
        verdict = matrix_bias_embeds(m, group(g), n, group(h)).embeds
        searched = find_bias_embedding(mat(m, g), mat(n, h)) is not None
        if verdict != searched:
            disagreements.append((m, g, n, h, verdict, searched))
    elapsed = time.perf_counter() - start
    report(7, not disagreements and elapsed < 600, f"81 pairs, disagreements {disagreements}, {elapsed:.1f}s")


EQUAL_PAIRS = [("x + 0", "x"), ("0 + x", "x"), ("x ~ 0", "x"), ("x ~ x", "0"), ("x + x", "x"),
               ("x * x' * x", "x"), ("x''", "x"), ("(x * y)'", "y' * x'"), ("d(x) * d(y)", "d(y) * d(x)"),
               ("x ~ y + y", "x + y"), ("(x ~ y) * d(y)", "0"), ("x * d(y) + x", "x"), ("x' * x * x'", "x'"),
               ("r(x) * x", "x")]
UNEQUAL_PAIRS = [("x * y", "y * x"), ("x + y", "y + x"), ("x", "x'"), ("d(x)", "r(x)"), ("x * x", "x"),
                 ("x ~ y", "x ~ (y + x)"), ("x * (y + z)", "x * y + x * z")]


def test_criterion_08_word_problem():
    pairs = EQUAL_PAIRS + UNEQUAL_PAIRS
    problems = []
    verdicts = {p: decide_equal(*p) for p in pairs}
    for p in EQUAL_PAIRS:
        if not verdicts[p]:
            problems.append(("law not proved", p))
    for p in UNEQUAL_PAIRS:
        sep = falsify(*p, n_max=2)
        if sep is None or verdicts[p]:
            problems.append(("unequal pair not separated at N <= 2", p))
    for p in EQUAL_PAIRS:
        if falsify(*p, n_max=4) is not None:
            problems.append(("falsifier contradicts decision", p))
    # equivalence and congruence on the corpus terms
    terms = sorted({parse(t) for p in pairs for t in p if "z" not in t}, key=repr)
    eq = {(s, t): decide_equal(s, t, ["x", "y"]) for s in terms for t in terms}
    for s, t, u in itertools.product(terms, repeat=3):
        if eq[s, t] and eq[t, u] and not eq[s, u]:
            problems.append(("not transitive", (s, t, u)))
    for s, t in itertools.product(terms, repeat=2):
        if eq[s, t] != eq[t, s] or not eq[s, s]:
            problems.append(("not symmetric or reflexive", (s, t)))
        if eq[s, t] and s != t:
            y = Var("y")
            for ctx in (lambda u: Mul(u, y), lambda u: Inv(u), lambda u: SkewDiff(y, u), lambda u: SkewAdd(u, y)):
                if not decide_equal(ctx(s), ctx(t), ["x", "y"]):
                    problems.append(("not a congruence", (s, t)))
    report(8, len(pairs) >= 20 and not problems, f"{len(pairs)} pairs, problems {problems[:3]}")


def test_criterion_09_sdi_vs_primeness():
    flagged, bad = [], []
    for name, S in acceptance_library().items():
        lat = congruence_lattice(S, cap=256)
        if lat.finitely_subdirectly_irreducible:
            flagged.append(name)
            if type_monoid(S).k != 1:
                bad.append(name)
    report(9, not bad, f"f.s.i. {flagged}, exceptions {bad}")


def test_criterion_10_radical_chain():
    varieties = {"Var(I2)": symmetric_variety(2), "Var(I3)": symmetric_variety(3),
                 "Var(M1(Z2^0))": VarietySpec(((1, cyclic_group(2)),)),
                 "Var(M2(Z2^0))": VarietySpec(((2, cyclic_group(2)),))}
    results = {k: check_radical_chain(V) for k, V in varieties.items()}
    bad = {k: (r.failed, r.inconclusive) for k, r in results.items() if not r.passed}
    report(10, not bad, f"checks {({k: len(r.checks) for k, r in results.items()})}, not passed {bad}")


def _unit_relations(S, b) -> bool:
    n = len(b)
    return all(S.m(b[i, j], b[k, l]) == (b[i, l] if j == k else S.zero)
               for i, j, k, l in itertools.product(range(n), repeat=4))


def test_criterion_11_projectivity():
    problems = []
    # lift_matrix_units: identity on I_2, the entrywise collapse M_2(Z2^0) -> I_2, and n = 1
    M, I, elems, f = rook_to_symmetric(2)
    row = symmetric_unit_row(2, elems)
    Z2M = mat(2, "Z2")
    collapse = f[lift_hom(np.array([0, 1, 1]), gz("Z2"), gz("triv"), Z2M, M)]
    I1, elems1, _ = sym(1)
    for label, phi, S, T, r in (("id on I2", np.arange(I.size), I, I, row),
                                ("M2(Z2^0) -> I2", collapse, Z2M, I, row),
                                ("Z3^0 -> I1", np.array([0, 1, 1, 1]), gz("Z3"), I1,
                                 symmetric_unit_row(1, elems1))):
        L = lift_matrix_units(phi, S, T, r)
        n = len(r)
        images = all(phi[L.units[i, j]] == T.m(T.i(r[i]), r[j]) for i in range(n) for j in range(n))
        section = np.array_equal(phi[L.psi], np.arange(T.size))
        additive = hom_defect(T, S, L.psi) is None
        if not (_unit_relations(S, L.units) and images and section and additive):
            problems.append(label)
    # lift_group_matrix: identity, M_2(Z4^0) -> M_2(Z2^0), and Z2^0 -> M_1(triv^0)
    z4_to_z2 = lift_hom(np.array([0, 1, 2, 1, 2]), gz("Z4"), gz("Z2"), mat(2, "Z4"), Z2M)
    for label, phi, S, T, G, want in (("id on M2(Z2^0)", np.arange(Z2M.size), Z2M, Z2M, group("Z2"), group("Z2")),
                                      ("M2(Z4^0) -> M2(Z2^0)", z4_to_z2, mat(2, "Z4"), Z2M, group("Z2"),
                                       group("Z4")),
                                      ("Z2^0 -> triv^0", np.array([0, 1, 1]), gz("Z2"), mat(1, "triv"),
                                       group("triv"), group("Z2"))):
        R = lift_group_matrix(phi, S, T, G)
        psi0 = np.concatenate([[0], R.psi + 1])
        triangle = np.array_equal(T.lookup(psi0[R.matrices.entries]), phi[R.eta])
        onto = sorted(set(R.psi.tolist())) == list(range(G.order))
        injective = len(set(R.eta.tolist())) == R.matrices.size and hom_defect(R.matrices, S, R.eta) is None
        if not (triangle and onto and injective and is_isomorphic(R.lifted_group, want)
                and _unit_relations(S, R.units)):
            problems.append(label)
    report(11, not problems, f"6 surjections, problems {problems}")
