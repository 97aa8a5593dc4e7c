import random

import pytest
from hypothesis import given, strategies as st

from wittram.errors import CapError, ParamsMismatch
from wittram.fields import SeriesRing, TruncSeries, get_field
from wittram.witt import (IntTruncPolyRing, StructureTable, WittParams, WittVector, coords_from_ghost,
                          generate_structure_polys, get_table, ghost_components, load_table, teichmuller)


def fp_vec(p, coords):
    return WittVector(get_field(p, 1), coords, p)


def same(a, b):
    """Equal on every digit known in both."""
    return a.m == b.m and all(x.agrees_with(y) for x, y in zip(a.coords, b.coords))


def poly_set(poly):
    return {(c, e) for c, e in poly}


def test_add_table_p2_m2():
    t = generate_structure_polys(WittParams(2, 2), "add")
    assert poly_set(t.polys[0]) == {(1, (1, 0, 0, 0)), (1, (0, 0, 1, 0))}
    # X_1 + Y_1 + X_0 Y_0 once reduced mod 2
    assert poly_set(t.polys[1]) == {(1, (0, 1, 0, 0)), (1, (0, 0, 0, 1)), (1, (1, 0, 1, 0))}


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_add_table_length_one_is_addition(p):
    t = generate_structure_polys(WittParams(p, 1), "add")
    assert poly_set(t.polys[0]) == {(1, (1, 0)), (1, (0, 1))}


def test_mul_table_p3_m2_ghost_of_teichmuller_product():
    t = generate_structure_polys(WittParams(3, 2), "mul")
    assert poly_set(t.polys[0]) == {(1, (1, 0, 1, 0))}
    Z = IntTruncPolyRing(1, 3)
    two = [Z.from_int(2), Z.zero()]
    prod = [Z.mul(a, b) for a, b in zip(ghost_components(two, 3, Z), ghost_components(two, 3, Z))]
    assert [g[0] for g in prod] == [4, 64]
    assert [c[0] % 3 for c in coords_from_ghost(prod, 3, Z)] == [1, 0]
    assert fp_vec(3, [2, 0]) * fp_vec(3, [2, 0]) == fp_vec(3, [1, 0])


def test_small_examples_over_f2():
    one = fp_vec(2, [1, 0])
    assert one + one == fp_vec(2, [0, 1])
    assert fp_vec(2, [1]).verschiebung() == fp_vec(2, [0, 1])
    assert one + WittVector.zero(get_field(2), 2) == one
    assert fp_vec(2, [1, 1]).restriction() == fp_vec(2, [1])


def test_teichmuller_basics():
    fq = get_field(3, 1)
    ring = SeriesRing(fq)
    x = TruncSeries.monomial(fq, 1, -1)
    assert teichmuller(x, 2, ring).coords == (x, ring.zero())
    assert teichmuller(ring.zero(), 3, ring).is_zero()
    one = teichmuller(ring.one(), 3, ring)
    y = teichmuller(TruncSeries.from_dict(fq, {-2: 1, 1: 2}), 3, ring)
    assert one * y == y


def test_teichmuller_is_multiplicative():
    fq = get_field(2, 2)
    for a in fq.elements():
        for b in fq.elements():
            assert teichmuller(a, 3, fq) * teichmuller(b, 3, fq) == teichmuller(fq.mul(a, b), 3, fq)


def test_frobenius_of_teichmuller():
    fq = get_field(2, 1)
    ring = SeriesRing(fq)
    x = TruncSeries.from_dict(fq, {-1: 1, 2: 1})
    assert teichmuller(x, 2, ring).frobenius_down() == teichmuller(x.pth_power(), 1, ring)


def test_ghost_examples():
    Z = IntTruncPolyRing(1, 2)
    g = ghost_components([Z.from_int(1), Z.from_int(1)], 2, Z)
    assert [c[0] for c in g] == [1, 3]
    Z3 = IntTruncPolyRing(1, 3)
    a = [Z3.from_int(2), Z3.from_int(5)]
    ga = ghost_components(a, 3, Z3)
    gv = ghost_components([Z3.zero()] + a, 3, Z3)
    assert [c[0] for c in gv] == [0] + [3 * c[0] for c in ga]


def test_ghost_roundtrip():
    Z = IntTruncPolyRing(4, 3)
    rng = random.Random(1)
    coords = [tuple(rng.randrange(-9, 9) for _ in range(4)) for _ in range(3)]
    back = coords_from_ghost(ghost_components(coords, 3, Z), 3, Z)
    assert [tuple(c) for c in back] == coords


def vecs(p, m, N=6):
    fq = get_field(p, 1)
    ser = st.dictionaries(st.integers(0, N - 1), st.integers(1, p - 1), max_size=4)
    return st.lists(ser, min_size=m, max_size=m).map(
        lambda cs: WittVector(SeriesRing(fq), [TruncSeries.from_dict(fq, c, N) for c in cs], p))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2)])
@given(data=st.data())
def test_ring_axioms(p, m, data):
    a, b, c = (data.draw(vecs(p, m)) for _ in range(3))
    assert same(a + b, b + a)
    assert same(a * b, b * a)
    assert same((a + b) + c, a + (b + c))
    assert same((a * b) * c, a * (b * c))
    assert same(a * (b + c), a * b + a * c)
    assert same(a - a, WittVector.zero(a.ring, m))


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2)])
@given(data=st.data())
def test_operator_identities(p, m, data):
    a = data.draw(vecs(p, m))
    up = data.draw(vecs(p, m + 1))
    assert same(a.verschiebung().frobenius_down(), a.int_mul(p))
    assert same(up.frobenius_down().verschiebung(), up.int_mul(p))
    assert same(up.frobenius_down().restriction(), up.restriction().frobenius_down())
    assert same(a.verschiebung().restriction(), a.restriction().verschiebung())
    assert same(up.frobenius_down(), up.frobenius_down_table())


def test_vf_is_multiplication_by_p():
    fq = get_field(2, 1)
    ring = SeriesRing(fq)
    rng = random.Random(5)
    for _ in range(20):
        coords = [TruncSeries.from_dict(fq, {k: 1 for k in range(6) if rng.random() < 0.5}, 6)
                  for _ in range(3)]
        x = WittVector(ring, coords, 2)
        assert same(x.frobenius_down().verschiebung(), x.int_mul(2))


def test_mismatch_and_caps():
    with pytest.raises(ParamsMismatch):
        fp_vec(2, [1, 0]) + fp_vec(2, [1])
    with pytest.raises(CapError):
        WittParams(4, 2)
    with pytest.raises(CapError):
        WittParams(2, 9)


def test_table_cache_roundtrip(tmp_path):
    t1, hit1 = load_table(WittParams(2, 3), "add", tmp_path)
    t2, hit2 = load_table(WittParams(2, 3), "add", tmp_path)
    assert (hit1, hit2) == (False, True)
    assert t1.polys == t2.polys
    assert StructureTable.from_text(t1.to_text()).polys == t1.polys
    assert get_table(2, 3, "add").polys == t1.polys
