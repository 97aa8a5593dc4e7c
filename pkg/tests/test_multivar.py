import itertools

import pytest
from hypothesis import given, strategies as st

from wittram.errors import CapError, NotInDomain, WindowOverflow
from wittram.filtration import FALSIFIED, VERIFIED
from wittram.multivar import (MultiForm, SncdRing, cech_one_minus_c_injectivity, dlog_unit, m_cartier,
                              m_cartier_inverse, m_d, m_fil_membership, m_is_closed, m_wedge,
                              rel_log_generators, verify_rel_log_sequence, verify_zi_bi_ladder)

R22 = SncdRing(2, d=2, r=2, B=6)
R21 = SncdRing(2, d=2, r=1, B=6)
R31 = SncdRing(3, d=2, r=1, B=6)


def mono(ring, c, a, J=(), K=()):
    return MultiForm.monomial(ring, c, a, J, K)


def forms(ring, q, lo=-2, hi=3, max_terms=3):
    """Random q-forms with small exponents, built from monomials."""
    d, r = ring.d, ring.r
    subsets = list(itertools.combinations(range(1, d + 1), q))

    def build(items):
        f = MultiForm.zero(ring, q)
        for c, a, S in items:
            J = [i for i in S if i <= r]
            K = [i for i in S if i > r]
            a = [max(x, 0) if i >= r else x for i, x in enumerate(a)]
            f = f + mono(ring, c, a, J, K)
        return f

    term = st.tuples(st.integers(1, ring.p - 1), st.lists(st.integers(lo, hi), min_size=d, max_size=d),
                     st.sampled_from(subsets))
    return st.lists(term, max_size=max_terms).map(build)


def test_caps():
    with pytest.raises(CapError):
        SncdRing(2, d=4, r=1)
    with pytest.raises(CapError):
        SncdRing(2, d=2, r=3)
    with pytest.raises(CapError):
        SncdRing(2, B=9)
    with pytest.raises(CapError, match="p must be prime"):
        SncdRing(6)


def test_window_overflow():
    with pytest.raises(WindowOverflow):
        mono(R22, 1, [6, 0])
    assert MultiForm(R22, 0, {((6, 0), ()): 1}, truncate=True).is_zero()
    with pytest.raises(WindowOverflow):
        mono(R22, 1, [-7, 0])


def test_d_examples():
    x1 = MultiForm.coordinate(R22, 1)
    assert m_d(x1) == mono(R22, 1, [1, 0], J=[1])
    x2 = MultiForm.coordinate(R21, 2)
    assert m_d(x2) == mono(R21, 1, [0, 0], K=[2])
    assert str(m_d(x2)) == "dx2"
    for i in (1, 2):
        assert m_is_closed(MultiForm.dlog(R22, i))
    assert m_is_closed(m_wedge(MultiForm.dlog(R22, 1), MultiForm.dlog(R22, 2)))
    assert m_d(mono(R22, 1, [0, 0])).is_zero()


def test_fil_examples():
    f = mono(R22, 1, [-2, 0], J=[1])
    assert str(f) == "x1^-2*dlog(x1)"
    assert m_fil_membership(f, (2, 0))
    assert not m_fil_membership(f, (1, 0))


def test_cartier_examples():
    for ring in (R21, R31):
        p = ring.p
        dx2 = mono(ring, 1, [0, 0], K=[2])
        assert m_cartier_inverse(dx2) == mono(ring, 1, [0, p - 1], K=[2])
        assert m_cartier(m_cartier_inverse(dx2)) == dx2
    f = mono(R22, 1, [2, 2], J=[1])
    assert m_cartier(f) == mono(R22, 1, [1, 1], J=[1])
    with pytest.raises(NotInDomain):
        m_cartier(mono(R22, 1, [1, 0]))


@given(forms(R22, 0), forms(R22, 1))
def test_cartier_kills_exact_forms(f, g):
    assert m_cartier(m_d(f)).is_zero()
    if R22.d > 1:
        assert m_cartier(m_d(g)).is_zero()


@pytest.mark.parametrize("ring", [R22, R21, R31])
@given(data=st.data())
def test_d_squared_and_leibniz(ring, data):
    f = data.draw(forms(ring, 0))
    g = data.draw(forms(ring, 0, lo=0, hi=2))
    w = data.draw(forms(ring, 1, lo=0, hi=2))
    assert m_d(m_d(f)).is_zero()
    fg = m_wedge(f, g, truncate=True)
    lhs = m_d(fg)
    rhs = m_wedge(m_d(f), g, truncate=True) + m_wedge(f, m_d(g), truncate=True)
    assert lhs == rhs
    # d(f w) = df w + f dw for a 1-form w
    lhs1 = m_d(m_wedge(f, w, truncate=True))
    rhs1 = m_wedge(m_d(f), w, truncate=True) + m_wedge(f, m_d(w), truncate=True)
    assert lhs1 == rhs1


@pytest.mark.parametrize("ring", [R22, R31])
@given(data=st.data())
def test_graded_commutativity(ring, data):
    a = data.draw(forms(ring, 1, lo=0, hi=2))
    b = data.draw(forms(ring, 1, lo=0, hi=2))
    f = data.draw(forms(ring, 0, lo=0, hi=2))
    assert m_wedge(a, b, truncate=True) == -m_wedge(b, a, truncate=True)
    assert m_wedge(a, f, truncate=True) == m_wedge(f, a, truncate=True)


@pytest.mark.parametrize("ring", [R22, R21])
@given(data=st.data())
def test_cartier_inverse_and_cartier(ring, data):
    f = data.draw(forms(ring, 1, lo=-1, hi=1))  # C^-1 doubles weights, keep them inside the box
    g = m_cartier_inverse(f)
    assert m_is_closed(g)
    assert m_cartier(g) == f


def test_d_matches_generators():
    """The weight formula for d agrees with Leibniz from d(x_i) = x_i dlog x_i."""
    x1, x2 = MultiForm.coordinate(R22, 1), MultiForm.coordinate(R22, 2)
    f = m_wedge(m_wedge(x1, x1), x2)  # x1^2 x2
    expected = m_wedge(m_wedge(m_d(x1), x1), x2) + m_wedge(m_wedge(x1, m_d(x1)), x2) + \
        m_wedge(m_wedge(x1, x1), m_d(x2))
    assert m_d(f) == expected
    assert m_d(f) == mono(R22, 1, [2, 1], J=[2])


def test_dlog_unit():
    u = dlog_unit(R22, 1, (1, 0))
    assert m_is_closed(u)
    # dlog(1 + x1) = x1 dlog x1 - x1^2 dlog x1 + ... at p = 2 all signs are 1
    assert u == sum((mono(R22, 1, [k, 0], J=[1]) for k in range(2, 6)), mono(R22, 1, [1, 0], J=[1]))


def test_rel_log_generators_are_closed():
    for q in (1, 2):
        gens = rel_log_generators(R22, (1, 1), q)
        assert gens and all(m_is_closed(g) for g in gens)
    assert rel_log_generators(R22, (1, 1), 0) == []


@pytest.mark.parametrize("args", [(2, 1, 1, 1, (2,), 1), (2, 1, 2, 2, (1, 1), 1), (2, 1, 2, 1, (1,), 0),
                                  (2, 1, 2, 2, (2, 1), 2), (3, 1, 1, 1, (2,), 1)])
def test_rel_log_sequence(args):
    rep = verify_rel_log_sequence(*args)
    assert rep.status == VERIFIED, rep.witness
    again = verify_rel_log_sequence(*args, split=False)
    assert again.status == VERIFIED and again.dims == rep.dims


@pytest.mark.parametrize("i", [1, 2])
@pytest.mark.parametrize("q", [0, 1, 2])
def test_zi_bi_ladder(i, q):
    rep = verify_zi_bi_ladder(2, 1, 2, 2, i, q, (1, 1))
    assert rep.status == VERIFIED, rep.witness


def test_ladder_split_cross_check():
    a = verify_zi_bi_ladder(2, 1, 2, 1, 1, 1, (1,), split=True)
    b = verify_zi_bi_ladder(2, 1, 2, 1, 1, 1, (1,), split=False)
    assert a.status == b.status == VERIFIED and a.dims == b.dims


@pytest.mark.parametrize("n,m2,q", [(1, 1, 1), (0, 0, 1), (1, 1, 0), (2, 1, 2)])
def test_cech_injectivity(n, m2, q):
    rep = cech_one_minus_c_injectivity(2, 1, n, m2, q)
    assert rep.status == VERIFIED, rep.witness


def test_broken_cartier_is_detected(monkeypatch):
    import wittram.multivar as mv

    def bad(f):
        return f.scale(0)

    monkeypatch.setattr(mv, "_cartier_part", bad)
    rep = mv.verify_rel_log_sequence(2, 1, 2, 2, (1, 1), 1)
    assert rep.status == FALSIFIED and rep.witness
