import math
import random

import pytest

from wittram.canonical import CanonicalForm, form_mul, mul_pi_power, op_d, op_F, op_R, op_V, to_canonical
from wittram.errors import PrecisionError
from wittram.fields import SeriesRing, TruncSeries, get_field
from wittram.filtration import (FALSIFIED, INCONCLUSIVE, VERIFIED, VerifierReport, f_kernel_test,
                                fil_membership_form, fil_membership_witt, graded_basis, one_minus_c, pbar_test,
                                verify_fbar_cbar, verify_fil_decomposition, verify_kernel_identities,
                                verify_pbar, verify_vr_sequence, Window, z1_fil_membership)
from wittram.canonical import in_z1
from wittram.oracles import brute_fil_index
from wittram.sampling import random_form, random_witt
from wittram.witt import WittVector, teichmuller


def series(p, terms, prec=None):
    return TruncSeries.from_dict(get_field(p, 1), terms, prec)


def test_witt_membership_examples():
    R = SeriesRing(get_field(3))
    w = teichmuller(series(3, {-1: 1}), 2, R)
    assert fil_membership_witt(w, 3) and not fil_membership_witt(w, 2)
    R2 = SeriesRing(get_field(2))
    v = teichmuller(series(2, {-1: 1}), 1, R2).verschiebung()
    assert fil_membership_witt(v, 1) and not fil_membership_witt(v, 0)
    a = WittVector(R2, [series(2, {0: 1, 3: 1}), series(2, {2: 1})])
    assert fil_membership_witt(a, 0)


def test_witt_membership_needs_precision():
    R = SeriesRing(get_field(2))
    w = WittVector(R, [TruncSeries.zero(get_field(2), -3), series(2, {0: 1})])
    with pytest.raises(PrecisionError):
        fil_membership_witt(w, 2)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2)])
def test_witt_and_canonical_membership_agree(p, m):
    rng = random.Random(p * m)
    for _ in range(20):
        w = random_witt(rng, p, 1, m, 3, prec=12)
        f = to_canonical(w)
        idx = brute_fil_index(w)
        for n in range(0, p ** (m - 1) * 3 + 1):
            assert fil_membership_witt(w, n) == (idx + n >= 0) == fil_membership_form(f, n)


def test_form_membership_examples():
    dl = CanonicalForm.dlog_pi(2, 1, 2)
    assert fil_membership_form(dl, 0)
    assert not fil_membership_form(CanonicalForm.single(2, 1, 1, 0, -2, 1), 1)
    R = SeriesRing(get_field(3))
    f = to_canonical(teichmuller(series(3, {-1: 1}), 2, R), hi=6)
    g = form_mul(f, CanonicalForm.dlog_pi(3, 1, 2, hi=6))
    assert fil_membership_form(g, 3) and not fil_membership_form(g, 2)


def test_z1_examples():
    assert z1_fil_membership(CanonicalForm.dlog_pi(2, 1, 2), 0)
    for n in range(4):
        assert z1_fil_membership(CanonicalForm.zero(2, 1, 2, 1), n)
    # [pi]^(-1) V(1) level shapes: the B-slot at n = -1 for p = 2, m = 2 is not F-closed
    f = CanonicalForm.single(2, 1, 2, 0, -1, 1)
    assert fil_membership_form(f, 1)
    assert not z1_fil_membership(f, 1)


@pytest.mark.parametrize("p,m,q", [(2, 2, 0), (2, 2, 1), (3, 2, 0), (2, 3, 1)])
def test_z1_descriptions_agree(p, m, q):
    rng = random.Random(13 * p + m + q)
    for _ in range(30):
        f = random_form(rng, p, 1, m, q, -6, 8, density=0.3)
        assert in_z1(f) == f_kernel_test(f)


def test_one_minus_c():
    dl = CanonicalForm.dlog_pi(2, 1, 2)
    assert one_minus_c(dl).is_zero()
    rng = random.Random(2)
    for _ in range(10):
        y = random_form(rng, 2, 1, 3, 1, -3, 6)
        fy = op_F(y)
        assert one_minus_c(fy) == fy - op_R(y)
        assert fil_membership_form(one_minus_c(fy, 3), 3)


@pytest.mark.parametrize("p,m,n,expected", [(2, 2, 1, 1), (2, 2, 2, 2), (2, 2, 0, 2), (3, 3, 9, 3), (3, 3, 6, 2)])
def test_graded_dims(p, m, n, expected):
    assert graded_basis(p, 1, m, 0, n).dim == expected


def test_graded_dims_scale_with_e():
    assert graded_basis(2, 2, 2, 1, 2).dim == 4
    assert graded_basis(2, 3, 2, 0, 3).dim == 3


def test_pbar_examples():
    omega = CanonicalForm.single(2, 1, 1, 0, -1, 1)
    assert pbar_test(omega, 2)
    assert not pbar_test(omega, 1)
    assert pbar_test(CanonicalForm.zero(2, 1, 1, 0), 0)
    rng = random.Random(6)
    for _ in range(10):
        a = random_form(rng, 2, 1, 1, 0, 0, 6)
        assert pbar_test(a, 0)


def test_monotone_and_translate():
    win = Window.interval(2, 1, 2, 0, -12, 8, 2)
    subs = [win.fil(n) for n in range(0, 12)]
    for a, b in zip(subs, subs[1:]):
        assert b.contains_subgroup(a)
    # fil_(p^(m-1) n) is the [pi]^(-n)-translate of fil_0
    rng = random.Random(8)
    for p, m in [(2, 2), (3, 2), (2, 3)]:
        w = p ** (m - 1)
        for _ in range(30):
            f = random_form(rng, p, 1, m, rng.randrange(2), -3 * w, 6, density=0.3)
            for n in range(4):
                assert fil_membership_form(f, w * n) == fil_membership_form(mul_pi_power(f, n), 0)


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3)])
def test_operators_preserve_filtration(p, m):
    rng = random.Random(100 + p + m)
    for _ in range(20):
        n = rng.randrange(0, 7)
        q = rng.randrange(2)
        f = random_form(rng, p, 1, m, q, -n, 8)
        assert fil_membership_form(op_F(f), n)
        assert fil_membership_form(op_V(f), n)
        if q == 0:
            assert fil_membership_form(op_d(f), n)
        assert fil_membership_form(op_R(f), n // p)
        g = random_form(rng, p, 1, m, 0, -2, 6)
        assert fil_membership_form(form_mul(f, g), n + 2)


def test_r_is_onto_fil_floor():
    p, m = 2, 2
    for n in range(0, 7):
        src = Window.interval(p, 1, m + 1, 0, -n, 2 * 8, m + 1)
        dst = Window.interval(p, 1, m, 0, -(n // p), 8, m + 1)
        image = dst.span([op_R(b).truncate(8) for b in src.basis(lambda k: k >= -n)])
        assert image == dst.fil(n // p)


CASES = [(p, m, q, n) for p in (2, 3) for m in (1, 2, 3) for q in (0, 1) for n in (0, 1, 3, 4)]


@pytest.mark.parametrize("p,m,q,n", CASES)
def test_structure_verifiers(p, m, q, n):
    for fn in (verify_vr_sequence, verify_fbar_cbar, verify_kernel_identities, verify_pbar):
        rep = fn(p, 1, m, q, n)
        assert rep.status == VERIFIED, (fn.__name__, rep.witness)


@pytest.mark.parametrize("fn", [verify_vr_sequence, verify_fbar_cbar, verify_kernel_identities, verify_pbar])
@pytest.mark.parametrize("p,m,q,n", [(2, 2, 0, 1), (2, 2, 1, 3), (3, 2, 0, 4), (2, 3, 1, 2)])
def test_split_and_unsplit_agree(fn, p, m, q, n):
    a = fn(p, 1, m, q, n, split=True)
    b = fn(p, 1, m, q, n, split=False)
    assert a.status == b.status == VERIFIED
    assert a.dims == b.dims


@pytest.mark.parametrize("k", [0, 1, 2])
def test_fbar_source_depends_on_floor(k):
    win = Window.interval(2, 1, 2, 0, -8, 8, 2)
    assert win.fil((2 * k) // 2) == win.fil((2 * k + 1) // 2)
    assert verify_fbar_cbar(2, 1, 2, 0, 2 * k).status == verify_fbar_cbar(2, 1, 2, 0, 2 * k + 1).status == VERIFIED


def test_fil_decomposition():
    for p, m, n in [(2, 2, 3), (2, 3, 4), (3, 2, 5)]:
        assert verify_fil_decomposition(p, 1, m, n).status == VERIFIED


def test_report_round_trip():
    rep = verify_vr_sequence(2, 1, 2, 0, 1)
    again = VerifierReport.from_dict(rep.to_dict())
    assert again == rep
    import json
    assert json.loads(rep.to_json())["status"] == VERIFIED
    assert {VERIFIED, FALSIFIED, INCONCLUSIVE} == {"verified", "falsified", "inconclusive-precision"}
