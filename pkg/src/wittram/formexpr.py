"""Expression trees over the generators of W_m Omega^*_K and their normal forms."""

from __future__ import annotations

from dataclasses import dataclass

from .canonical import (
    CanonicalForm,
    component_witt,
    form_mul,
    op_d,
    op_F,
    op_R,
    op_V,
    slot_case,
    to_canonical,
)
from .errors import CapError
from .fields import SeriesRing, TruncSeries
from .witt import WittVector, teichmuller


class FormExpr:
    """Base node; ``m`` is the Witt level and ``q`` the form degree."""

    m: int
    q: int

    def __add__(self, other: "FormExpr") -> "FormExpr":
        return Sum((self, other))

    def __mul__(self, other: "FormExpr") -> "FormExpr":
        return Prod(self, other)


@dataclass(frozen=True)
class Witt(FormExpr):
    w: WittVector

    @property
    def m(self) -> int:
        return self.w.m

    q = 0


@dataclass(frozen=True)
class Teich(FormExpr):
    f: TruncSeries
    m: int
    q = 0


@dataclass(frozen=True)
class DlogPi(FormExpr):
    p: int
    e: int
    m: int
    q = 1


@dataclass(frozen=True)
class Canon(FormExpr):
    form: CanonicalForm

    @property
    def m(self) -> int:
        return self.form.m

    @property
    def q(self) -> int:
        return self.form.q


@dataclass(frozen=True)
class V(FormExpr):
    s: int
    x: FormExpr

    @property
    def m(self) -> int:
        return self.x.m + self.s

    @property
    def q(self) -> int:
        return self.x.q


@dataclass(frozen=True)
class F(FormExpr):
    x: FormExpr

    @property
    def m(self) -> int:
        return self.x.m - 1

    @property
    def q(self) -> int:
        return self.x.q


@dataclass(frozen=True)
class R(FormExpr):
    x: FormExpr

    @property
    def m(self) -> int:
        return self.x.m - 1

    @property
    def q(self) -> int:
        return self.x.q


@dataclass(frozen=True)
class D(FormExpr):
    x: FormExpr

    @property
    def m(self) -> int:
        return self.x.m

    @property
    def q(self) -> int:
        return self.x.q + 1


def DV(s: int, x: FormExpr) -> FormExpr:
    return D(V(s, x))


@dataclass(frozen=True)
class Sum(FormExpr):
    terms: tuple

    @property
    def m(self) -> int:
        return self.terms[0].m

    @property
    def q(self) -> int:
        return self.terms[0].q


@dataclass(frozen=True)
class Prod(FormExpr):
    a: FormExpr
    b: FormExpr

    @property
    def m(self) -> int:
        return self.a.m

    @property
    def q(self) -> int:
        return self.a.q + self.b.q


def normalize_form(x: FormExpr, hi: int | None = None, p: int | None = None, e: int | None = None) -> CanonicalForm:
    """Evaluate an expression to its canonical form, known below index ``hi``.

    Leaves made of exact Witt vectors need ``hi``; division of windows by
    R is accounted for by widening the window of the argument.
    """
    if x.q > 1:
        raise CapError("forms of degree above 1 are not supported")
    if isinstance(x, Canon):
        return x.form.truncate(hi)
    if isinstance(x, Witt):
        return to_canonical(x.w, hi=hi)
    if isinstance(x, Teich):
        ring = SeriesRing(x.f.field)
        return to_canonical(teichmuller(x.f, x.m, ring), hi=hi)
    if isinstance(x, DlogPi):
        return CanonicalForm.dlog_pi(x.p, x.e, x.m, hi)
    if isinstance(x, V):
        out = normalize_form(x.x, hi)
        for _ in range(x.s):
            out = op_V(out)
        return out
    if isinstance(x, F):
        return op_F(normalize_form(x.x, hi))
    if isinstance(x, R):
        inner_hi = None if hi is None else hi * _p_of(x)
        return op_R(normalize_form(x.x, inner_hi)).truncate(hi)
    if isinstance(x, D):
        return op_d(normalize_form(x.x, hi))
    if isinstance(x, Sum):
        out = normalize_form(x.terms[0], hi)
        for t in x.terms[1:]:
            out = out + normalize_form(t, hi)
        return out
    if isinstance(x, Prod):
        a = normalize_form(x.a, hi)
        b = normalize_form(x.b, hi)
        if a.comps and b.comps and hi is not None:
            # widen each factor so the product is known on the full window
            a = normalize_form(x.a, hi - int(b.lo))
            b = normalize_form(x.b, hi - int(a.lo))
        return form_mul(a, b).truncate(hi)
    raise TypeError(f"unknown expression node {type(x).__name__}")


def _p_of(x: FormExpr) -> int:
    node = x
    while True:
        if isinstance(node, Witt):
            return node.w.p
        if isinstance(node, Teich):
            return node.f.field.p
        if isinstance(node, DlogPi):
            return node.p
        if isinstance(node, Canon):
            return node.form.p
        if isinstance(node, (V, F, R, D)):
            node = node.x
        elif isinstance(node, Sum):
            node = node.terms[0]
        elif isinstance(node, Prod):
            node = node.a
        else:
            raise TypeError("cannot determine the prime of an expression")


def from_canonical_expr(f: CanonicalForm) -> FormExpr:
    """theta for 1-forms: sum of c[pi]^i dlog[pi] and dV^s(c[pi]^i) terms."""
    if f.q != 1:
        raise ValueError("expected a 1-form")
    p, e, m = f.p, f.e, f.m
    terms: list[FormExpr] = []
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        if s == 0:
            terms.append(Prod(Witt(component_witt(p, e, m, n, c)), DlogPi(p, e, m)))
        else:
            r = m - s
            inner = component_witt(p, e, r, p ** (r - 1) * i, c)
            terms.append(DV(s, Witt(inner)))
    if f.hi is not None:
        terms.append(Canon(CanonicalForm.zero(p, e, m, 1, f.hi)))
    if not terms:
        return Canon(CanonicalForm.zero(p, e, m, 1))
    return Sum(tuple(terms))
