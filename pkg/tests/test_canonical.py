import random

import pytest

from wittram.canonical import (CanonicalForm, cartier, dlog_teich, form_mul, format_form, from_canonical,
                               in_z1, level, mul_pi_power, op_d, op_F, op_R, op_V, parse_form, residue,
                               scalar_mul, to_canonical)
from wittram.errors import NotInDomain
from wittram.fields import SeriesRing, TruncSeries, get_field
from wittram.formexpr import D, DV, DlogPi, Prod, Sum, Teich, normalize_form
from wittram.galois_ring import get_galois_ring
from wittram.oracles import e_op, witt_op
from wittram.sampling import random_form
from wittram.witt import teichmuller

CONFIGS = [(p, e, m) for p in (2, 3) for e in (1, 2) for m in (1, 2, 3)]


def series(p, terms, prec=None, e=1):
    return TruncSeries.from_dict(get_field(p, e), terms, prec)


def ring(p, e=1):
    return SeriesRing(get_field(p, e))


@pytest.mark.parametrize("n,p,m,expected", [(4, 2, 3, 3), (3, 2, 3, 1), (0, 3, 2, 2), (6, 3, 2, 2), (5, 3, 2, 1), (-9, 3, 3, 3)])
def test_level(n, p, m, expected):
    assert level(n, p, m) == expected


def test_to_canonical_examples():
    x = to_canonical(teichmuller(series(2, {-1: 1}), 1, ring(2)), hi=4)
    assert x.support() == [-1] and x.get(-1) == get_galois_ring(2, 1).one(1)
    v = to_canonical(teichmuller(series(2, {1: 1}), 1, ring(2)).verschiebung(), hi=6)
    assert v.support() == [1] and v.get(1) == get_galois_ring(2, 1).one(1)


def test_teichmuller_one_plus_pi_round_trip():
    w = teichmuller(series(2, {0: 1, 1: 1}, 12), 2, ring(2))
    c = to_canonical(w)
    assert c.support()[:3] == [0, 1, 2]
    back = from_canonical(c)
    assert all(a.agrees_with(b) for a, b in zip(back.coords, w.coords))


def test_from_canonical_basics():
    assert from_canonical(CanonicalForm.zero(2, 1, 2, 0)).is_zero()
    gr = get_galois_ring(3, 1)
    f = CanonicalForm.single(3, 1, 2, 0, 6, gr.teichmuller(2, 2))
    w = from_canonical(f)
    assert w.coords[0].terms() == {2: 2} and w.coords[1].is_zero()


def test_normalize_examples():
    pi2 = series(2, {1: 1})
    f = normalize_form(Prod(Teich(pi2, 2), DlogPi(2, 1, 2)), hi=8)
    assert f.q == 1 and f.support() == [2] and f.get(2) == get_galois_ring(2, 1).one(2)
    pi3j = series(3, {2: 1})
    g = normalize_form(D(Teich(pi3j, 2)), hi=12)
    gr = get_galois_ring(3, 1)
    assert g.support() == [6] and g.get(6) == gr.from_int(2, 2)
    h = normalize_form(Sum((DV(1, Teich(pi2, 1)), DV(1, Teich(pi2, 1)))), hi=8)
    assert h.is_zero()


def test_op_r_examples():
    gr = get_galois_ring(2, 1)
    c = gr.from_witt([1, 1])
    f = CanonicalForm.single(2, 1, 2, 0, 2, c)
    r = op_R(f)
    assert r.m == 1 and r.support() == [1] and r.get(1) == c.reduce(1)
    assert op_R(CanonicalForm.single(2, 1, 2, 0, 1, 1)).is_zero()


@pytest.mark.parametrize("p,m,i", [(2, 2, 3), (3, 2, -2), (2, 3, 1)])
def test_op_d_on_a_slot(p, m, i):
    gr = get_galois_ring(p, 1)
    n = p ** (m - 1) * i
    c = gr.from_int(m, 1 + p)
    df = op_d(CanonicalForm.single(p, 1, m, 0, n, c))
    assert df.q == 1 and df.support() == [n] and df.get(n) == c.mul_int(i)


def test_mul_pi_power():
    gr = get_galois_ring(2, 1)
    f = CanonicalForm.single(2, 1, 2, 0, 2, gr.from_witt([1, 1]))
    assert mul_pi_power(f, 0) == f
    g = mul_pi_power(f, 3)
    assert g.support() == [8] and g.get(8) == f.get(2)
    rng = random.Random(3)
    for _ in range(20):
        h = random_form(rng, 2, 1, 3, rng.randrange(2), -6, 10)
        assert mul_pi_power(mul_pi_power(h, 3), -3) == h


def test_scalar_mul_by_teichmuller():
    rng = random.Random(4)
    R = ring(3)
    for _ in range(10):
        f = random_form(rng, 3, 1, 2, rng.randrange(2), -4, 8)
        assert scalar_mul(teichmuller(R.one(), 2, R), f, hi=8).agrees_with(f)
        pij = teichmuller(series(3, {2: 1}), 2, R)
        assert scalar_mul(pij, f, hi=20).agrees_with(mul_pi_power(f, 2))


def test_dlog_teich():
    d = dlog_teich(series(2, {1: 1}), 2, 8)
    assert d.support() == [0] and d.get(0) == get_galois_ring(2, 1).one(2)
    assert dlog_teich(TruncSeries.constant(get_field(2, 2), 3), 2, 8).is_zero()
    # dlog(1 + pi) = pi/(1 + pi) dlog(pi), expanded independently as a series
    u = series(2, {0: 1, 1: 1}, 6)
    quotient = series(2, {1: 1}, 6) * u.invert()
    expected = {k: c for k, c in quotient.terms().items()}
    d = dlog_teich(u, 1, 6)
    gr = get_galois_ring(2, 1)
    assert {n: gr.residue(c) for n, c in d} == expected


def test_cartier_examples():
    dl = CanonicalForm.dlog_pi(2, 1, 2)
    assert cartier(dl) == dl
    for p in (2, 3):
        gr = get_galois_ring(p, 1)
        f = CanonicalForm.single(p, 1, 1, 1, p, gr.one(1))  # pi^p dlog pi
        assert cartier(f) == CanonicalForm.single(p, 1, 1, 1, 1, gr.one(1))
    assert cartier(CanonicalForm.single(2, 1, 1, 1, 1, 1)).is_zero()  # pi dlog pi = d pi
    with pytest.raises(NotInDomain):
        cartier(CanonicalForm.single(2, 1, 1, 0, 1, 1))  # pi is not a p-th power


@pytest.mark.parametrize("p,e,m", CONFIGS)
def test_cartier_of_f_is_r(p, e, m):
    rng = random.Random(p * 100 + e * 10 + m)
    for _ in range(10):
        y = random_form(rng, p, e, m + 1, rng.randrange(2), -6, 10)
        fy = op_F(y)
        assert in_z1(fy)
        assert cartier(fy).agrees_with(op_R(y))


def test_residue():
    gr = get_galois_ring(2, 1)
    assert residue(CanonicalForm.dlog_pi(2, 1, 2)) == gr.one(2)
    d = normalize_form(D(Teich(series(2, {3: 1}), 2)), hi=20)
    assert residue(d).is_zero()
    assert residue(CanonicalForm.zero(2, 1, 2, 1)).is_zero()


@pytest.mark.parametrize("p,e,m", CONFIGS)
def test_operators_against_e_model(p, e, m):
    rng = random.Random(7 * p + 11 * e + m)
    for _ in range(15):
        q = rng.randrange(2)
        f = random_form(rng, p, e, m, q, -5, 9)
        assert op_F(f) == e_op("F", f)
        assert op_V(f) == e_op("V", f)
        if m > 1:
            assert op_R(f) == e_op("R", f)
        if q == 0:
            assert op_d(f) == e_op("d", f)
            g = random_form(rng, p, e, m, rng.randrange(2), -3, 6)
            assert form_mul(f, g) == e_op("mul", f, g)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2)])
def test_q0_operators_against_witt_coordinates(p, m):
    rng = random.Random(p + 100 * m)
    hi = 8
    for _ in range(8):
        f = random_form(rng, p, 1, m, 0, -4, 6)
        assert op_F(f).agrees_with(witt_op("F", f, hi))
        assert op_V(f).agrees_with(witt_op("V", f, hi))
        assert op_R(f).agrees_with(witt_op("R", f, hi))
        g = random_form(rng, p, 1, m, 0, 0, 4)
        assert form_mul(f, g).agrees_with(witt_op("mul", f, hi, g))


@pytest.mark.parametrize("p,e,m", [(2, 1, 3), (3, 2, 2)])
def test_laws_and_supports(p, e, m):
    rng = random.Random(m)
    for _ in range(20):
        f = random_form(rng, p, e, m, 0, -6, 10)
        g = random_form(rng, p, e, m + 1, 0, -6, 10)
        assert op_F(op_V(f)) == p * f
        assert op_V(op_F(g)) == p * g
        assert op_F(op_d(op_V(f))) == op_d(f)
        assert op_d(op_F(g)) == p * op_F(op_d(g))
        assert p * op_d(op_V(f)) == op_V(op_d(f))
        assert op_R(op_d(g)) == op_d(op_R(g))
        assert op_R(op_V(g)) == op_V(op_R(g))
        assert op_R(op_F(g)) == op_F(op_R(g))
        assert set(op_F(g).support()) <= set(g.support())
        assert set(op_R(g).support()) <= {n // p for n in g.support() if n % p == 0}


def test_text_roundtrip():
    rng = random.Random(9)
    for _ in range(20):
        f = random_form(rng, 3, 2, 3, rng.randrange(2), -5, 8, prec=8)
        assert parse_form(format_form(f)) == f


@pytest.mark.parametrize("p,e,m", [(2, 1, 2), (3, 1, 2), (2, 2, 3)])
def test_leibniz(p, e, m):
    rng = random.Random(17 * m + p)
    for _ in range(10):
        a = random_form(rng, p, e, m, 0, -3, 6)
        b = random_form(rng, p, e, m, 0, -3, 6)
        lhs = op_d(form_mul(a, b))
        rhs = form_mul(op_d(a), b) + form_mul(a, op_d(b))
        assert lhs.agrees_with(rhs)


def test_leibniz_with_witt_scalar():
    R = ring(2)
    w = teichmuller(series(2, {-1: 1, 0: 1}, 10), 2, R)
    f = CanonicalForm.single(2, 1, 2, 0, 2, 1)
    lhs = op_d(scalar_mul(w, f, hi=8))
    dw = normalize_form(D(Teich(series(2, {-1: 1, 0: 1}, 10), 2)), hi=8)
    rhs = form_mul(dw, f) + scalar_mul(w, op_d(f), hi=8)
    assert lhs.agrees_with(rhs)
