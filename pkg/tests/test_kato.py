import random

import pytest

from wittram.canonical import CanonicalForm, op_F
from wittram.errors import CapError
from wittram.fields import SeriesRing, TruncSeries, get_field
from wittram.filtration import INCONCLUSIVE, VERIFIED
from wittram.kato import (AswClass, asw_conductor, asw_conductor_oracle, kato_level, kato_level_oracle,
                          predicted_t_length, t_space, t_space_oracle, verify_cartier_detection,
                          verify_graded_kato, verify_vr2_triangle)
from wittram.sampling import random_form, random_witt
from wittram.witt import WittVector, teichmuller


def teich(p, terms, m, e=1, prec=None):
    fq = get_field(p, e)
    return teichmuller(TruncSeries.from_dict(fq, terms, prec), m, SeriesRing(fq))


def test_t_space_examples():
    assert t_space(2, 1, 1, 0, 0).length == 1
    assert t_space(2, 1, 1, 0, 2).length == t_space(2, 1, 1, 0, 1).length
    with pytest.raises(CapError):
        t_space(2, 1, 1, 2, 0)


@pytest.mark.parametrize("p,m,q", [(2, 1, 0), (2, 2, 0), (3, 2, 0), (2, 1, 1), (3, 1, 1), (2, 3, 1)])
def test_t_space_chain(p, m, q):
    prev = None
    for n in range(0, 7):
        ts = t_space(p, 1, m, q, n)
        assert ts.stable and ts.injective and ts.status == VERIFIED
        assert ts.length == predicted_t_length(p, 1, m, q, n)
        if prev is not None:
            assert ts.length >= prev
            if q == 0 and n % p:
                assert ts.length > prev
        prev = ts.length


@pytest.mark.parametrize("p,m,q", [(2, 2, 0), (3, 1, 0), (2, 1, 1), (3, 1, 1)])
def test_t_space_oracle(p, m, q):
    for n in range(0, 6):
        assert t_space(p, 1, m, q, n).length == t_space_oracle(p, 1, m, q, n)


def test_t_space_split_cross_check():
    for n in (0, 3, 4):
        a = t_space(2, 1, 2, 0, n, split=True)
        b = t_space(2, 1, 2, 0, n, split=False)
        assert (a.length, a.length_2x) == (b.length, b.length_2x)


def test_conductor_examples():
    assert asw_conductor(teich(2, {-1: 1}, 1)) == 1
    assert asw_conductor(teich(2, {-2: 1}, 1)) == 1
    assert asw_conductor(teich(2, {-1: 1}, 2)) == 2
    assert asw_conductor(teich(2, {0: 1, 3: 1}, 2)) == 0
    a = WittVector(SeriesRing(get_field(2)), [TruncSeries.from_dict(get_field(2), {-3: 1}),
                                              TruncSeries.constant(get_field(2), 1)])
    assert AswClass(a).conductor() == 6
    assert asw_conductor_oracle(a) == 6
    with pytest.raises(ValueError):
        asw_conductor(a, method="nope")


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)])
def test_conductor_family(p, m):
    fq = get_field(p, 2)
    for j in range(1, 6):
        if j % p == 0:
            continue
        for u in (1, fq.q - 1):
            a = teich(p, {-j: u}, m, e=2)
            assert asw_conductor(a) == p ** (m - 1) * j
            assert asw_conductor(a, "canonical") == p ** (m - 1) * j


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (3, 1)])
def test_conductor_translation_invariance(p, m):
    rng = random.Random(10 * p + m)
    for _ in range(5):
        a = random_witt(rng, p, 1, m, 4, prec=16)
        n = asw_conductor(a)
        assert asw_conductor_oracle(a) == n
        for _ in range(10):
            b = random_witt(rng, p, 1, m, 3, prec=16)
            shifted = a + b.frobenius_endo() - b
            assert asw_conductor(shifted) == n
            assert asw_conductor(shifted, "canonical") == n


def test_conductor_under_v():
    rng = random.Random(21)
    for _ in range(10):
        a = random_witt(rng, 2, 1, 1, 5, prec=16)
        assert asw_conductor(a.verschiebung()) == asw_conductor(a)


def test_kato_level_examples():
    assert kato_level(CanonicalForm.dlog_pi(2, 1, 1)) == 0
    f = CanonicalForm.single(2, 1, 1, 1, -1, 1)
    assert kato_level(f) == kato_level_oracle(f) == 1
    assert kato_level(f, prec=24) == 1
    rng = random.Random(1)
    for _ in range(5):
        w = op_F(random_form(rng, 2, 1, 3, 1, 0, 7))
        assert kato_level(w) == 0


@pytest.mark.parametrize("p,m,q", [(2, 2, 1), (3, 1, 1), (2, 2, 0), (3, 2, 0)])
def test_kato_level_matches_oracle(p, m, q):
    rng = random.Random(p + m + q)
    for _ in range(8):
        w = op_F(random_form(rng, p, 1, m + 1, q, -6, 4))
        assert kato_level(w) == kato_level_oracle(w)


@pytest.mark.parametrize("p,m,q,n", [(2, 2, 1, 3), (2, 1, 0, 2), (3, 2, 0, 4), (2, 3, 1, 5)])
def test_cartier_detection(p, m, q, n):
    rep = verify_cartier_detection(p, 1, m, q, n, samples=40, seed=3)
    assert rep.status == VERIFIED, rep.witness
    assert rep.dims["inside"] > 0 and rep.dims["outside"] > 0


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_graded_kato(m, n):
    rep = verify_graded_kato(2, 1, m, n)
    assert rep.status == VERIFIED, rep.witness


def test_graded_kato_v_surjectivity_pattern():
    one = verify_graded_kato(2, 1, 1, 2).dims
    two = verify_graded_kato(2, 1, 2, 2).dims
    assert one["T~^1"] == 0
    assert two["T~^2"] == 1 and two["M~^2"] == 1
    four = verify_graded_kato(2, 1, 3, 4).dims
    assert four["M~^3"] == 1 and four["T~^3"] == 1


def test_graded_kato_q1():
    for n in (1, 2, 4):
        rep = verify_graded_kato(2, 1, 2, n, q=1)
        assert rep.status == VERIFIED
        assert all(v == 0 for k, v in rep.dims.items() if not k.startswith("predicted"))


@pytest.mark.parametrize("p,m,q,n", [(2, 2, 0, 1), (2, 3, 1, 3), (3, 2, 1, 3), (2, 1, 0, 2), (3, 3, 0, 4)])
def test_vr2_triangle(p, m, q, n):
    rep = verify_vr2_triangle(p, 1, m, q, n)
    assert rep.status == VERIFIED, rep.witness
    if m > 1:
        a = verify_vr2_triangle(p, 1, m, q, n, split=False)
        assert a.status == VERIFIED
