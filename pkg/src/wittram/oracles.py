"""Independent reference routes used to check the closed-form operator tables.

* The fractional-exponent model: W_m Omega^*_{F_q[pi^(+-1)]} sits inside the
  complex of finite sums ``b_k T^k`` and ``b_k T^k dlog T`` with ``k`` in
  Z[1/p] and ``b_k`` in W(F_q), where F(bT^k) = sigma(b) T^(pk),
  V(bT^k) = p sigma^(-1)(b) T^(k/p), d(bT^k) = k b T^k dlog T and R is the
  quotient map.  Level m keeps exponents with denominator below p^m.
* The Witt-coordinate route for q = 0: leave canonical coordinates, apply the
  operator to Witt coordinates over K, and peel back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .canonical import CanonicalForm, from_canonical, to_canonical
from .galois_ring import WElem, get_galois_ring


def _den_exp(k: Fraction, p: int) -> int:
    d, s = k.denominator, 0
    while d % p == 0:
        d //= p
        s += 1
    if d != 1:
        raise ValueError("exponent is not in Z[1/p]")
    return s


@dataclass(frozen=True)
class EElem:
    p: int
    e: int
    m: int
    q: int
    terms: tuple  # sorted (Fraction, WElem)

    @classmethod
    def make(cls, p: int, e: int, m: int, q: int, terms) -> "EElem":
        acc: dict[Fraction, WElem] = {}
        for k, b in terms:
            s = _den_exp(k, p)
            if q == 0:
                if s >= m:
                    continue
                b = b.reduce(m) if b.r >= m else b.raise_level(m)
                if b.valuation() < s and not b.is_zero():
                    raise ValueError(f"coefficient at T^{k} is not integral")
            else:
                r = m - s
                if r <= 0:
                    continue
                b = b.reduce(r) if b.r >= r else b.raise_level(r)
            acc[k] = acc[k] + b if k in acc else b
        return cls(p, e, m, q, tuple(sorted((k, b) for k, b in acc.items() if not b.is_zero())))

    def __add__(self, other: "EElem") -> "EElem":
        return EElem.make(self.p, self.e, self.m, self.q, list(self.terms) + list(other.terms))

    def F(self) -> "EElem":
        if self.m <= 1:
            return EElem(self.p, self.e, 0, self.q, ())
        L = self.m + 1
        return EElem.make(self.p, self.e, self.m - 1, self.q,
                          [(k * self.p, b.raise_level(L).sigma(1)) for k, b in self.terms])

    def V(self) -> "EElem":
        L = self.m + 1
        return EElem.make(self.p, self.e, self.m + 1, self.q,
                          [(k / self.p, b.raise_level(L).sigma(-1).mul_int(self.p)) for k, b in self.terms])

    def R(self) -> "EElem":
        if self.m <= 1:
            return EElem(self.p, self.e, 0, self.q, ())
        return EElem.make(self.p, self.e, self.m - 1, self.q, list(self.terms))

    def d(self) -> "EElem":
        if self.q == 1:
            return EElem(self.p, self.e, self.m, 1, ())
        out = []
        for k, b in self.terms:
            s = _den_exp(k, self.p)
            # k b = numerator * (b / p^s): integral because p^s | b
            out.append((k, b.div_p(s).raise_level(self.m).mul_int(k.numerator)))
        return EElem.make(self.p, self.e, self.m, 1, out)

    def mul(self, other: "EElem") -> "EElem":
        q = self.q + other.q
        if q >= 2:
            return EElem(self.p, self.e, self.m, 1, ())
        L = self.m
        out = [(k1 + k2, b1.raise_level(L) * b2.raise_level(L))
               for k1, b1 in self.terms for k2, b2 in other.terms]
        return EElem.make(self.p, self.e, self.m, q, out)

    def cartier(self) -> "EElem":
        L = self.m + 1
        out = []
        for k, b in self.terms:
            k2 = k / self.p
            b2 = b.raise_level(L).sigma(-1)
            if self.q == 0 and b2.reduce(self.m).valuation() < min(_den_exp(k2, self.p), self.m) and not b2.reduce(self.m).is_zero():
                raise ValueError("not in the image of F")
            out.append((k2, b2))
        return EElem.make(self.p, self.e, self.m, self.q, out)


def to_e(f: CanonicalForm) -> EElem:
    p, m = f.p, f.m
    out = []
    for n, c in f.comps:
        k = Fraction(n, p ** (m - 1))
        s = _den_exp(k, p)
        L = m if f.q == 0 else m - s
        b = c.raise_level(max(L, c.r)).sigma(-s)
        if f.q == 0:
            b = b.raise_level(m).mul_int(p**s)
        elif s > 0:
            b = b.mul_int(k.numerator)
        out.append((k, b))
    return EElem.make(p, f.e, m, f.q, out)


def from_e(x: EElem, hi: int | None = None) -> CanonicalForm:
    p, m = x.p, x.m
    gr = get_galois_ring(p, x.e)
    out = []
    for k, b in x.terms:
        s = _den_exp(k, p)
        n = int(k * p ** (m - 1))
        if x.q == 0:
            c = b.div_p(s)
        elif s > 0:
            c = b.mul_int(pow(k.numerator, -1, p ** b.r))
        else:
            c = b
        out.append((n, c.sigma(s).reduce(m - s)))
    del gr
    return CanonicalForm.build(p, x.e, m, x.q, out, hi)


# -- E-model versions of the canonical operators ----------------------------


def e_op(name: str, f: CanonicalForm, g: CanonicalForm | None = None) -> CanonicalForm:
    x = to_e(f)
    if name == "F":
        return from_e(x.F(), f.hi)
    if name == "V":
        return from_e(x.V(), f.hi)
    if name == "R":
        hi = None if f.hi is None else -(-f.hi // f.p)
        return from_e(x.R(), hi)
    if name == "d":
        return from_e(x.d(), f.hi)
    if name == "C":
        hi = None if f.hi is None else -(-f.hi // f.p)
        return from_e(x.cartier(), hi)
    if name == "mul":
        assert g is not None
        from .canonical import _product_hi

        return from_e(x.mul(to_e(g)), _product_hi(f, g))
    if name.startswith("pi^"):
        l = int(name[3:])
        gr = get_galois_ring(f.p, f.e)
        t = EElem.make(f.p, f.e, f.m, 0, [(Fraction(l), gr.one(f.m))])
        hi = None if f.hi is None else f.hi + f.p ** (f.m - 1) * l
        return from_e(t.mul(x), hi)
    raise ValueError(f"unknown operator {name!r}")


# -- Witt-coordinate route (q = 0) --------------------------------------------


def witt_op(name: str, f: CanonicalForm, hi: int, g: CanonicalForm | None = None) -> CanonicalForm:
    """Apply F, V, R or the product through Witt coordinates over K."""
    if f.q != 0:
        raise ValueError("the Witt-coordinate route only covers q = 0")
    w = from_canonical(f)
    if name == "F":
        return to_canonical(w.frobenius_down(), hi=hi)
    if name == "V":
        return to_canonical(w.verschiebung(), hi=hi)
    if name == "R":
        return to_canonical(w.restriction(), hi=hi) if w.m > 1 else CanonicalForm.zero(f.p, f.e, 0, 0, hi)
    if name == "mul":
        assert g is not None
        return to_canonical(w * from_canonical(g), hi=hi)
    raise ValueError(f"unknown operator {name!r}")


def brute_fil_index(w) -> float:
    """min_t p^(m-1-t) v(x_t): the filtration index read off Witt coordinates."""
    p, m = w.p, w.m
    best = float("inf")
    for t, x in enumerate(w.coords):
        if x.coeffs:
            best = min(best, p ** (m - 1 - t) * x.start)
    return best
