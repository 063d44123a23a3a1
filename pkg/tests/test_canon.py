import random
from itertools import product

import pytest

import oracles as O
from conftest import random_scheme, to_mat
from mms.canon import (
    Limits,
    brute_force_normal_form,
    equivalent,
    group_order,
    is_normal_form,
    minimize_row,
    normal_form,
    row_stabilizer,
)
from mms.field import Field
from mms.fixtures import laderman, naive, strassen
from mms.matrix import CapExceeded, Mat, minimal_biequivalent, minimize_columns
from mms.scheme import Row, Scheme, maximal_pattern, parse, rank_pattern
from mms.symmetry import SymmetryElement, apply, random_element


def row_of(rows, p):
    return Row(*(to_mat(m, p) for m in rows))


def _check_minimize_row(rows, p):
    n = len(rows[0])
    best, hits = O.orbit_minimum_row(rows, n, p)
    got, wit = minimize_row(row_of(rows, p))
    assert tuple(O.colex_key(m.rows) for m in (got.a, got.b, got.c)) == best
    want = {tuple(to_mat(m, p).code for m, _ in t) for t in hits}
    assert {(t.u.code, t.v.code, t.w.code) for t in wit} == want


def test_minimize_row_identity():
    i2 = Mat.identity(2, 2)
    got, wit = minimize_row(Row(i2, i2, i2))
    assert got == Row(i2, i2, i2)
    assert len(wit) == 6 and all(t.u == t.v == t.w for t in wit)


def test_minimize_row_strassen_row2():
    rows = strassen(2).to_lists()[1]
    got, _ = minimize_row(row_of(rows, 2))
    assert got.a.rows == [[0, 0], [1, 0]]
    _check_minimize_row(rows, 2)


@pytest.mark.parametrize("p", [2, 3])
def test_minimize_row_exhaustive_n1(p):
    for a, b, c in product(range(p), repeat=3):
        _check_minimize_row((((a,),), ((b,),), ((c,),)), p)


def test_minimize_row_vs_brute_n2p2():
    rng = random.Random(5)
    mats = list(O.all_mats(2, 2))
    rows = [tuple(rng.choice(mats) for _ in range(3)) for _ in range(150)]
    # make sure every rank combination of a and b shows up
    by_rank = {}
    for m in mats:
        by_rank.setdefault(O.rank(m, 2), m)
    rows += [(by_rank[i], by_rank[j], rng.choice(mats)) for i in range(3) for j in range(3)]
    for r in rows:
        _check_minimize_row(r, 2)


def test_minimize_row_vs_brute_n2p3():
    rng = random.Random(6)
    mats = list(O.all_mats(2, 3))
    ranked = {k: [m for m in mats if O.rank(m, 3) == k] for k in range(3)}
    for i, j in [(2, 2), (2, 1), (1, 2), (1, 1), (1, 0), (0, 1)]:
        _check_minimize_row((rng.choice(ranked[i]), rng.choice(ranked[j]), rng.choice(mats)), 3)


def test_row_stabilizer():
    i2, z2 = Mat.identity(2, 2), Mat.zero(2, 2)
    got, wit = minimize_row(Row(i2, i2, i2))
    assert len(row_stabilizer(got, wit)) == 6
    got, wit = minimize_row(Row(z2, z2, z2))
    assert len(row_stabilizer(got, wit)) == 216
    g = O.gl_with_inverse(2, 2)
    rng = random.Random(8)
    mats = list(O.all_mats(2, 2))
    for _ in range(40):
        rows = tuple(rng.choice(mats) for _ in range(3))
        got, wit = minimize_row(row_of(rows, 2))
        stab = {(t.u.code, t.v.code, t.w.code) for t in row_stabilizer(got, wit)}
        target = tuple(tuple(map(tuple, m.rows)) for m in (got.a, got.b, got.c))
        want = {
            tuple(to_mat(m, 2).code for m, _ in t)
            for t in product(g, g, g)
            if O.sandwich(t, target, 2) == target
        }
        assert stab == want


def test_row_stabilizer_cap():
    i2 = Mat.identity(2, 2)
    got, wit = minimize_row(Row(i2, i2, i2))
    with pytest.raises(CapExceeded):
        row_stabilizer(got, wit, Limits(max_stabilizer=5))
    with pytest.raises(ValueError):
        row_stabilizer(got, [])


def test_trivial_normal_forms():
    s = parse("scheme 1 1 2\n1 1 1\n")[0]
    assert normal_form(s).nf == s
    z = Scheme(2, 3, ((0, 0, 0),) * 2)
    assert is_normal_form(z)
    with pytest.raises(ValueError):
        Scheme(2, 2, ())


def _prop2(nf):
    sp = nf.space
    a, b, _ = nf.rows[0]
    assert a == minimal_biequivalent(nf.n, sp.rank(a), Field(nf.p)).code
    assert minimize_columns(Mat(nf.n, nf.p, b))[0].code == b


def _check(s, nf=None, limits=Limits()):
    res = normal_form(s, limits)
    assert apply(res.witness, s) == res.nf
    if nf is not None:
        assert res.nf == nf
    pat = rank_pattern(res.nf)
    assert pat == tuple(sorted(pat, reverse=True)) == maximal_pattern(s)[0]
    _prop2(res.nf)
    return res.nf


def test_strassen_against_brute_force():
    s = strassen(2)
    bf = brute_force_normal_form(s)
    _check(s, bf)
    assert brute_force_normal_form(bf) == bf
    assert normal_form(s).nf.rows[0] == (s.space.identity,) * 3


@pytest.mark.parametrize("n,p,r", [(1, 2, 1), (1, 2, 2), (1, 2, 3), (1, 3, 2), (2, 2, 2), (2, 2, 3)])
def test_against_literal_full_group(n, p, r):
    # sigma, pi and GL^3 all enumerated explicitly, nothing shared with mms
    rng = random.Random(n * 100 + p * 10 + r)
    for _ in range(4 if n == 2 else 10):
        s = random_scheme(rng, n, r, p)
        want = O.full_normal_form(s.to_lists(), n, p)
        nf = _check(s)
        got = [tuple(tuple(map(tuple, m)) for m in row) for row in nf.to_lists()]
        assert got == [tuple(m for m in row) for row in want]


def test_brute_force_n1_exhaustive():
    for a, b, c in product(range(2), repeat=3):
        if (a, b, c) == (0, 0, 0):
            continue
        s = parse(f"scheme 1 1 2\n{a} {b} {c}\n")[0]
        assert normal_form(s).nf == brute_force_normal_form(s)


def test_brute_force_cap():
    assert group_order(2, 7, 2) == 5040 * 6 * 216
    with pytest.raises(CapExceeded):
        brute_force_normal_form(laderman(2))


@pytest.mark.parametrize("make", [lambda: strassen(2), lambda: strassen(3), lambda: naive(2, 2), lambda: naive(2, 3)])
def test_orbit_invariance(make):
    s = make()
    nf = _check(s)
    for k in range(30):
        t = apply(random_element(s.n, s.r, s.p, k), s)
        _check(t, nf)
    assert normal_form(nf).nf == nf


def test_random_2x2_vs_brute(rng):
    for _ in range(5):
        s = random_scheme(rng, 2, 5, 2)
        assert _check(s) == brute_force_normal_form(s)


def test_minimality_sampled():
    s = strassen(2)
    nf = normal_form(s).nf
    target = rank_pattern(nf)
    seen = 0
    for k in range(1000):
        t = apply(random_element(2, 7, 2, ("min", k)), s)
        if rank_pattern(t) == target:
            seen += 1
            assert nf <= t
    assert seen > 0


def test_is_normal_form():
    s = strassen(2)
    nf = normal_form(s).nf
    assert is_normal_form(nf)
    assert not is_normal_form(s)
    bigger = [apply(random_element(2, 7, 2, k), nf) for k in range(20)]
    assert any(not is_normal_form(b) for b in bigger if b != nf)


def test_equivalent():
    s = strassen(2)
    g = random_element(2, 7, 2, 99)
    t = apply(g, s)
    w = equivalent(s, t)
    assert w is not None and apply(w, s) == t
    w = equivalent(s, s)
    assert w is not None and apply(w, s) == s
    rows = s.to_lists()
    rows[0][0] = [[0, 0], [0, 0]]
    other = Scheme.from_matrices(rows, 2)
    assert maximal_pattern(other)[0] != maximal_pattern(s)[0]
    assert equivalent(s, other) is None
    with pytest.raises(ValueError):
        equivalent(s, laderman(2))


def test_same_pattern_different_orbit():
    # both patterns are all (1,1,1) but the rows are not related
    a = parse("scheme 2 2 2\n1 0 0 0 1 0 0 0 1 0 0 0\n1 0 0 0 1 0 0 0 1 0 0 0\n")[0]
    b = parse("scheme 2 2 2\n1 0 0 0 1 0 0 0 1 0 0 0\n0 1 0 0 0 1 0 0 0 1 0 0\n")[0]
    assert maximal_pattern(a)[0] == maximal_pattern(b)[0]
    assert equivalent(a, b) is None
    assert brute_force_normal_form(a) != brute_force_normal_form(b)


def test_laderman_invariance_small():
    s = laderman(2)
    nf = _check(s)
    for k in range(3):
        _check(apply(random_element(3, 23, 2, k), s), nf)


def test_stabilizer_cap_propagates():
    with pytest.raises(CapExceeded):
        normal_form(strassen(2), Limits(max_stabilizer=5))


def test_witness_is_group_element():
    res = normal_form(laderman(2))
    assert isinstance(res.witness, SymmetryElement)
    assert sorted(res.witness.sigma) == list(range(23))
