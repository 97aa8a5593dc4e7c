import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wittram.errors import CapError, PrecisionError
from wittram.fields import SeriesRing, TruncSeries, format_series, get_field, parse_series
from wittram.filtration import Window
from wittram.galois_ring import get_galois_ring
from wittram.linalg import Ambient, LinearMap, Subgroup


@pytest.mark.parametrize("p,e", [(2, 1), (2, 3), (3, 2), (5, 1), (7, 2)])
def test_field_axioms(p, e):
    fq = get_field(p, e)
    els = list(fq.elements())
    assert len(els) == p**e
    assert sorted(fq.frobenius(a) for a in els) == els
    for a in els:
        assert fq.pow(a, fq.q) == a
        assert fq.frobenius_inv(fq.frobenius(a)) == a
        if a:
            assert fq.mul(a, fq.inv(a)) == 1
        assert fq.add(a, fq.neg(a)) == 0


@pytest.mark.parametrize("p,e", [(2, 2), (2, 4), (3, 2), (5, 3), (13, 4)])
def test_convolve_matches_schoolbook(p, e):
    fq = get_field(p, e)
    rng = np.random.default_rng(p * 100 + e)
    for length in (1, 3, 12):
        u = [int(x) for x in rng.integers(0, fq.q, length)]
        v = [int(x) for x in rng.integers(0, fq.q, length + 2)]
        naive = [0] * (len(u) + len(v) - 1)
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                naive[i + j] = fq.add(naive[i + j], fq.mul(a, b))
        assert fq.convolve(u, v) == naive


def test_field_caps():
    with pytest.raises(CapError, match="p must be prime"):
        get_field(4, 1)
    with pytest.raises(CapError):
        get_field(2, 9)


def test_series_examples(f2):
    one_plus = TruncSeries.from_dict(f2, {0: 1, 1: 1}, 5)
    f3 = get_field(3, 1)
    a = TruncSeries.from_dict(f3, {0: 1, 1: 1}, 5)
    b = TruncSeries.from_dict(f3, {0: 1, 1: 2}, 5)
    assert (a * b).terms() == {0: 1, 2: 2}
    assert (a * b).prec == 5
    u = TruncSeries.from_dict(f3, {1: 2, 2: 1}, 6)
    inv = u.invert()
    assert inv.valuation == -1
    assert (inv * u).agrees_with(TruncSeries.constant(f3, 1))
    s = TruncSeries.from_dict(f2, {-1: 1, 2: 1}, 6)
    assert s.pth_power().terms() == {-2: 1, 4: 1}
    assert s.pth_power().pth_root().agrees_with(s)
    assert one_plus.pth_power().terms() == {0: 1, 2: 1}


def test_precision_is_a_contract(f2):
    s = TruncSeries.from_dict(f2, {0: 1}, 4)
    with pytest.raises(PrecisionError):
        s.coefficient(4)
    with pytest.raises(PrecisionError):
        TruncSeries.zero(f2, 3).invert()
    with pytest.raises(PrecisionError):
        s.with_prec(None)
    assert (s + TruncSeries.from_dict(f2, {1: 1})).prec == 4


@given(st.dictionaries(st.integers(-3, 5), st.integers(0, 3), max_size=5), st.integers(3, 9))
def test_higher_precision_does_not_change_known_digits(terms, prec):
    fq = get_field(2, 2)
    lo = TruncSeries.from_dict(fq, terms, prec)
    hi = TruncSeries.from_dict(fq, terms, prec + 4)
    x = TruncSeries.from_dict(fq, {0: 1, 1: 2, 3: 3}, prec + 4)
    assert (lo * x).agrees_with(hi * x)
    assert (lo * x).prec <= (hi * x).prec


@pytest.mark.parametrize("text", ["pi^-3 + 1", "2*pi^-1 + pi^4 + O(pi^7)", "0", "[1,2]*pi^2"])
def test_series_text_roundtrip(text):
    fq = get_field(3, 2)
    s = parse_series(text, fq)
    assert parse_series(format_series(s), fq) == s


def test_series_ring_frobenius(f2):
    ring = SeriesRing(f2)
    x = TruncSeries.from_dict(f2, {-1: 1, 0: 1}, 5)
    assert ring.frobenius(x) == x.pth_power()


def test_galois_ring_witt_conversion():
    gr = get_galois_ring(2, 2)
    fq = get_field(2, 2)
    for digits in itertools.product(fq.elements(), repeat=2):
        a = gr.from_witt(list(digits))
        assert list(gr.to_witt(a)) == list(digits)


def test_window_dims(f2):
    win = Window.interval(2, 1, 1, 0, -2, 3, 1)
    assert win.full().length() == 5
    from wittram.canonical import CanonicalForm
    gr = get_galois_ring(2, 1)
    f = CanonicalForm.build(2, 1, 1, 0, [(-1, gr.one(1)), (1, gr.one(1))])
    g = CanonicalForm.single(2, 1, 1, 0, 1, 1)
    assert win.span([f, g]).length() == 2
    assert win.span([f, g, f + g]).length() == 2


def brute_image_size(A, p):
    rows = [np.array(v) for v in itertools.product(range(p), repeat=A.shape[0])]
    return len({tuple((v @ A) % p) for v in rows})


@given(st.integers(0, 2**30), st.integers(1, 4), st.integers(1, 4))
def test_rank_nullity_against_enumeration(seed, rows, cols):
    rng = np.random.default_rng(seed)
    p = 3
    A = rng.integers(0, p, size=(rows, cols))
    src, dst = Ambient(p, (1,) * rows, 1), Ambient(p, (1,) * cols, 1)
    f = LinearMap(src, dst, A)
    im, ker = f.image().length(), f.kernel().length()
    assert im + ker == rows
    assert p**im == brute_image_size(A, p)


def test_subgroup_lengths_mixed_levels():
    amb = Ambient(2, (2, 1), 2)
    g = Subgroup.from_coords(amb, [[2, 0]])
    assert g.length() == 1
    assert amb.full().length() == 3
    h = Subgroup.from_coords(amb, [[1, 1]])
    assert h.length() == 2
    # 2 * (1, 1) = (2, 0), so g sits inside h
    assert (g + h).length() == 2
    assert g.intersect(h).length() == 1
    k = Subgroup.from_coords(amb, [[0, 1]])
    assert (h + k).length() == 3
    assert h.intersect(k).length() == 0
