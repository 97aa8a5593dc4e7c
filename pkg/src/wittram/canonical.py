"""W_m Omega^q of K = F_q((pi)) in canonical coordinates, q in {0, 1}.

Every element is a convergent sum over integer indices n of one component per
index.  Writing ``n = p^(m-1-s) i`` with ``p`` not dividing ``i`` (or ``s = 0``
and ``i = n / p^(m-1)`` when ``p^(m-1) | n``), the component is a coefficient
``c`` in ``W_{m-s}(F_q)`` and stands for

* q = 0: ``c [pi]^i`` when s = 0, ``V^s(c [pi]^i)`` when s > 0;
* q = 1: ``c [pi]^i dlog[pi]`` when s = 0, ``dV^s(c [pi]^i)`` when s > 0.

A form knows its components for indices below ``hi``; components at
``n >= hi`` are unknown (``hi is None`` means an exact finite sum).

The operators d, F, V, R, the product, multiplication by [pi]^l and the
Cartier operator are closed-form componentwise tables.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import CapError, NotInDomain, ParamsMismatch, PrecisionError
from .fields import FqField, SeriesRing, TruncSeries, get_field
from .galois_ring import GaloisRing, WElem, get_galois_ring
from .witt import MAX_M, WittVector, teichmuller

MAX_FORM_M = MAX_M + 1  # V may raise the length once past the Witt-table cap


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def level(n: int, p: int, m: int) -> int:
    """phi(n): m when p^(m-1) divides n, otherwise m - s with s minimal such that p^(m-1-s) | n."""
    if m <= 0:
        return 0
    if n == 0:
        return m
    return min(m, 1 + vp(n, p))


def slot_case(n: int, p: int, m: int) -> tuple[int, int]:
    """``(s, i)`` with ``n = p^(m-1-s) i``; s = 0 is the A-case."""
    s = m - level(n, p, m)
    return s, n // p ** (m - 1 - s)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# the form type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    p: int
    e: int
    m: int
    q: int
    comps: tuple  # sorted tuple of (n, WElem), all nonzero and below hi
    hi: int | None = None

    def __post_init__(self) -> None:
        if self.q not in (0, 1):
            raise CapError(f"degree q must be 0 or 1, got {self.q}")
        if not 0 <= self.m <= MAX_FORM_M:
            raise CapError(f"form level m must be in [0, {MAX_FORM_M}], got {self.m}")

    # -- construction --------------------------------------------------------
    @classmethod
    def build(cls, p: int, e: int, m: int, q: int, comps, hi: int | None = None) -> "CanonicalForm":
        """Normalize a dict or iterable of (n, WElem) pairs; levels are reduced as needed."""
        items = comps.items() if isinstance(comps, dict) else comps
        acc: dict[int, WElem] = {}
        for n, c in items:
            if hi is not None and n >= hi:
                continue
            r = level(n, p, m)
            if r == 0:
                continue
            c = c.reduce(r) if c.r >= r else c.raise_level(r)
            if n in acc:
                c = acc[n] + c
            acc[n] = c
        comps_t = tuple(sorted((n, c) for n, c in acc.items() if not c.is_zero()))
        return cls(p, e, m, q, comps_t, hi)

    @classmethod
    def zero(cls, p: int, e: int, m: int, q: int, hi: int | None = None) -> "CanonicalForm":
        return cls(p, e, m, q, (), hi)

    @classmethod
    def single(cls, p: int, e: int, m: int, q: int, n: int, coeffs, hi: int | None = None) -> "CanonicalForm":
        """One component at index n; ``coeffs`` is a WElem, an int or a power-basis list."""
        gr = get_galois_ring(p, e)
        r = level(n, p, m)
        if isinstance(coeffs, WElem):
            c = coeffs
        elif isinstance(coeffs, int):
            c = gr.from_int(r, coeffs)
        else:
            c = gr.elem(r, coeffs)
        return cls.build(p, e, m, q, [(n, c)], hi)

    @classmethod
    def dlog_pi(cls, p: int, e: int, m: int, hi: int | None = None) -> "CanonicalForm":
        return cls.single(p, e, m, 1, 0, 1, hi)

    # -- queries -------------------------------------------------------------
    @property
    def gr(self) -> GaloisRing:
        return get_galois_ring(self.p, self.e)

    @property
    def field(self) -> FqField:
        return get_field(self.p, self.e)

    def get(self, n: int) -> WElem:
        if self.hi is not None and n >= self.hi:
            raise PrecisionError(f"component at index {n} is beyond precision O(idx {self.hi})")
        for k, c in self.comps:
            if k == n:
                return c
        return self.gr.zero(level(n, self.p, self.m))

    def support(self) -> list[int]:
        return [n for n, _ in self.comps]

    @property
    def lo(self) -> int | float:
        """Least index carrying a known nonzero component (hi, or inf, when none)."""
        if self.comps:
            return self.comps[0][0]
        return math.inf if self.hi is None else self.hi

    def is_zero(self) -> bool:
        return not self.comps

    def __iter__(self) -> Iterator[tuple[int, WElem]]:
        return iter(self.comps)

    def _compatible(self, other: "CanonicalForm") -> None:
        if (self.p, self.e, self.m, self.q) != (other.p, other.e, other.m, other.q):
            raise ParamsMismatch(
                f"forms live in different groups: {(self.p, self.e, self.m, self.q)} vs "
                f"{(other.p, other.e, other.m, other.q)}")

    def truncate(self, hi: int | None) -> "CanonicalForm":
        hi = _min_prec(self.hi, hi)
        return CanonicalForm(self.p, self.e, self.m, self.q,
                             tuple((n, c) for n, c in self.comps if hi is None or n < hi), hi)

    def agrees_with(self, other: "CanonicalForm") -> bool:
        """Equal on every index known in both."""
        self._compatible(other)
        hi = _min_prec(self.hi, other.hi)
        return self.truncate(hi).comps == other.truncate(hi).comps

    # -- additive structure -----------------------------------------------------
    def __add__(self, other: "CanonicalForm") -> "CanonicalForm":
        self._compatible(other)
        return CanonicalForm.build(self.p, self.e, self.m, self.q,
                                   list(self.comps) + list(other.comps), _min_prec(self.hi, other.hi))

    def __neg__(self) -> "CanonicalForm":
        return CanonicalForm(self.p, self.e, self.m, self.q, tuple((n, -c) for n, c in self.comps), self.hi)

    def __sub__(self, other: "CanonicalForm") -> "CanonicalForm":
        return self + (-other)

    def int_mul(self, k: int) -> "CanonicalForm":
        return CanonicalForm.build(self.p, self.e, self.m, self.q,
                                   [(n, c.mul_int(k)) for n, c in self.comps], self.hi)

    def __rmul__(self, k):
        if isinstance(k, int):
            return self.int_mul(k)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.int_mul(other)
        if isinstance(other, CanonicalForm):
            return form_mul(self, other)
        return NotImplemented

    def __repr__(self) -> str:
        return format_form(self)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def _inv_mod(a: int, p: int, r: int) -> int:
    return pow(a, -1, p**r) if r > 0 else 0


def op_d(f: CanonicalForm) -> CanonicalForm:
    """d: W_m Omega^0 -> W_m Omega^1; d of a 1-form is 0 (Omega^2_K vanishes here)."""
    if f.q == 1:
        return CanonicalForm.zero(f.p, f.e, f.m, 1, f.hi)
    p, m = f.p, f.m
    out = []
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        # A-case: d(c[pi]^i) = i c [pi]^i dlog[pi]; B-case: the dV^s slot keeps c
        out.append((n, c.mul_int(i) if s == 0 else c))
    return CanonicalForm.build(p, f.e, m, 1, out, f.hi)


def op_F(f: CanonicalForm) -> CanonicalForm:
    """F: W_m -> W_{m-1}, index preserving."""
    p, m = f.p, f.m
    if m <= 1:
        return CanonicalForm.zero(p, f.e, 0, f.q, f.hi)
    out = []
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        if s == 0:
            out.append((n, c.sigma(1).reduce(m - 1)))
        elif f.q == 0:
            out.append((n, c.mul_int(p)))
        elif s >= 2:
            out.append((n, c))
        else:
            out.append((n, c.mul_int(i)))
    return CanonicalForm.build(p, f.e, m - 1, f.q, out, f.hi)


def op_V(f: CanonicalForm) -> CanonicalForm:
    """V: W_m -> W_{m+1}, index preserving."""
    p, m = f.p, f.m
    if m == 0:
        return CanonicalForm.zero(p, f.e, 1, f.q, f.hi)
    out = []
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        if s == 0:
            if i % p == 0:
                out.append((n, c.raise_level(m + 1).sigma(-1).mul_int(p)))
            elif f.q == 0:
                out.append((n, c))
            else:
                out.append((n, c.mul_int(p * _inv_mod(i, p, m))))
        elif f.q == 0:
            out.append((n, c))
        else:
            out.append((n, c.mul_int(p)))
    return CanonicalForm.build(p, f.e, m + 1, f.q, out, f.hi)


def op_R(f: CanonicalForm) -> CanonicalForm:
    """R: W_m -> W_{m-1}, sending index n to n/p and killing p-prime indices."""
    p, m = f.p, f.m
    hi = None if f.hi is None else ceil_div(f.hi, p)
    if m <= 1:
        return CanonicalForm.zero(p, f.e, 0, f.q, hi)
    out = [(n // p, c) for n, c in f.comps if n % p == 0]
    return CanonicalForm.build(p, f.e, m - 1, f.q, out, hi)


def mul_pi_power(f: CanonicalForm, l: int) -> CanonicalForm:
    """Multiplication by [pi]^l: index shift n -> n + p^(m-1) l."""
    p, m = f.p, f.m
    if m == 0:
        return f
    shift = p ** (m - 1) * l
    out = []
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        if f.q == 1 and s > 0:
            i2 = i + p**s * l
            c = c.mul_int(i * _inv_mod(i2, p, c.r))
        out.append((n + shift, c))
    return CanonicalForm.build(p, f.e, m, f.q, out, None if f.hi is None else f.hi + shift)


def _unit_factor(n: int, p: int, m: int, q: int) -> int:
    s, i = slot_case(n, p, m)
    return i if (q == 1 and s > 0) else 1


def form_mul(a: CanonicalForm, b: CanonicalForm) -> CanonicalForm:
    """Product W_m Omega^qa x W_m Omega^qb -> W_m Omega^(qa+qb) (zero in degree 2)."""
    if a.q > b.q:
        a, b = b, a
    if (a.p, a.e, a.m) != (b.p, b.e, b.m):
        raise ParamsMismatch("product of forms over different rings")
    p, m, q = a.p, a.m, a.q + b.q
    hi = _product_hi(a, b)
    if q >= 2 or m == 0:
        return CanonicalForm.zero(p, a.e, m, 1, hi)
    gr = a.gr
    acc: dict[int, WElem] = {}
    for n1, c1 in a.comps:
        s1, _ = slot_case(n1, p, m)
        x1 = c1.raise_level(m)
        for n2, c2 in b.comps:
            n = n1 + n2
            if hi is not None and n >= hi:
                continue
            r = level(n, p, m)
            s2, _ = slot_case(n2, p, m)
            s3 = m - r
            x = x1.sigma(s3 - s1) * c2.raise_level(m).sigma(s3 - s2)
            if q == 0:
                x = x.mul_int(p ** (s1 + s2 - s3))
            else:
                u2 = _unit_factor(n2, p, m, 1)
                u3 = _unit_factor(n, p, m, 1)
                x = x.mul_int(p**s1 * u2 * _inv_mod(u3, p, m))
            x = x.reduce(r)
            acc[n] = acc[n] + x if n in acc else x
    return CanonicalForm.build(p, a.e, m, q, acc, hi)


def _product_hi(a: CanonicalForm, b: CanonicalForm) -> int | None:
    bounds = []
    if a.hi is not None and b.lo != math.inf:
        bounds.append(a.hi + b.lo)
    if b.hi is not None and a.lo != math.inf:
        bounds.append(b.hi + a.lo)
    if not bounds:
        if a.hi is None and b.hi is None:
            return None
        # one factor is an exact zero
        return None
    return int(min(bounds))


def cartier(f: CanonicalForm) -> CanonicalForm:
    """C = R o F^(-1) on Z_1 W_m Omega^q, sending index n to n/p.

    Raises NotInDomain when f has no F-preimage at level m + 1.
    """
    p, m = f.p, f.m
    hi = None if f.hi is None else ceil_div(f.hi, p)
    if f.q == 0:
        bad = z1_obstruction(f)
        if bad is not None:
            raise NotInDomain(f"form is not in Z_1: component at n={bad} has no F-preimage")
    out = []
    for n, c in f.comps:
        if n % p:
            continue  # only dV^(m-1)-type slots, killed by C
        s, i = slot_case(n, p, m)
        if s == 0 and i % p == 0:
            out.append((n // p, c.sigma(-1)))
        elif f.q == 0:
            if s + 1 < m:
                out.append((n // p, c.div_p(1)))
        elif s == 0:
            out.append((n // p, c.mul_int(_inv_mod(i, p, m))))
        else:
            out.append((n // p, c))
    return CanonicalForm.build(p, f.e, m, f.q, out, hi)


def z1_obstruction(f: CanonicalForm) -> int | None:
    """First index whose component blocks an F-preimage, or None when f is in Z_1."""
    if f.q == 1:
        return None
    p, m = f.p, f.m
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        if s == 0 and i % p == 0:
            continue
        if c.valuation() < 1:
            return n
    return None


def in_z1(f: CanonicalForm) -> bool:
    return z1_obstruction(f) is None


def f_preimage(f: CanonicalForm) -> CanonicalForm:
    """A canonical y at level m + 1 with F(y) = f (f must lie in Z_1)."""
    p, m = f.p, f.m
    bad = z1_obstruction(f)
    if bad is not None:
        raise NotInDomain(f"form is not in Z_1: component at n={bad} has no F-preimage")
    out = []
    for n, c in f.comps:
        s, i = slot_case(n, p, m)
        if s == 0 and i % p == 0:
            # still an A-slot at level m+1, where F acts by sigma
            out.append((n, c.raise_level(m + 1).sigma(-1)))
        elif s == 0:
            # a B(1)-slot of level m at level m+1
            out.append((n, c.div_p(1).raise_level(m) if f.q == 0 else c.mul_int(_inv_mod(i, p, m))))
        else:
            # a B(s+1)-slot of level m-s at level m+1
            out.append((n, c.div_p(1).raise_level(m - s) if f.q == 0 else c))
    y = CanonicalForm.build(p, f.e, m + 1, f.q, out, f.hi)
    return y


def residue(f: CanonicalForm) -> WElem:
    """The coefficient of dlog[pi] in the index-0 slot."""
    if f.q != 1:
        raise ValueError("residue is defined on 1-forms")
    return f.get(0)


# ---------------------------------------------------------------------------
# Witt vectors over K <-> canonical coordinates (q = 0)
# ---------------------------------------------------------------------------


def component_witt(p: int, e: int, m: int, n: int, c: WElem) -> WittVector:
    """The Witt vector V^s(c [pi]^i): coordinate s + j is c_j pi^(p^j i)."""
    fq = get_field(p, e)
    ring = SeriesRing(fq)
    s, i = slot_case(n, p, m)
    digits = get_galois_ring(p, e).to_witt(c)
    coords = [TruncSeries.zero(fq)] * m
    for j, dj in enumerate(digits):
        if dj:
            coords[s + j] = TruncSeries.monomial(fq, dj, p**j * i)
    return WittVector(ring, coords, p)


def from_canonical(f: CanonicalForm):
    """theta: the Witt vector (q = 0) or a FormExpr (q = 1) realizing ``f``.

    For q = 0 the unknown tail at indices >= hi is added as a vector of
    zero-to-precision coordinates, so the result carries sound precision.
    """
    if f.q == 1:
        from .formexpr import from_canonical_expr

        return from_canonical_expr(f)
    p, e, m = f.p, f.e, f.m
    fq = get_field(p, e)
    ring = SeriesRing(fq)
    acc = WittVector.zero(ring, m)
    for n, c in f.comps:
        acc = acc + component_witt(p, e, m, n, c)
    if f.hi is not None:
        tail = WittVector(ring, [TruncSeries.zero(fq, ceil_div(f.hi, p ** (m - 1 - t))) for t in range(m)], p)
        acc = acc + tail
    return acc


def witt_index_bound(w: WittVector) -> int | None:
    """An index H below which the canonical components of ``w`` are determined.

    Changing coordinate x_i by something of valuation >= N_i changes the
    difference's coordinate k by isobaric monomials of weight p^k containing a
    weight-p^i perturbation factor, so its valuation is at least
    N_i + (p^k - p^i) * lam, lam being the least valuation per unit weight.
    """
    p, m = w.p, w.m
    precs = [x.prec for x in w.coords]
    if all(N is None for N in precs):
        return None
    lam = math.inf
    for j, x in enumerate(w.coords):
        v = x.valuation
        lam = min(lam, v / p**j)
    lam = min(lam, 0)
    H = math.inf
    for k in range(m):
        bound = math.inf
        for i in range(k + 1):
            if precs[i] is not None:
                bound = min(bound, precs[i] + (p**k - p**i) * lam)
        if bound != math.inf:
            H = min(H, p ** (m - 1 - k) * bound)
    return math.floor(H)


def _index_of(w: WittVector) -> tuple[int | float, list[int | float]]:
    p, m = w.p, w.m
    idx = []
    for t, x in enumerate(w.coords):
        idx.append(x.start * p ** (m - 1 - t) if x.coeffs else math.inf)
    return min(idx), idx


def to_canonical(w: WittVector, hi: int | None = None, e: int | None = None) -> CanonicalForm:
    """Greedy graded peeling: repeatedly extract the least-index component.

    ``hi`` caps the index window; it is required when every coordinate is exact.
    """
    p, m = w.p, w.m
    fq: FqField = w.ring.field
    e = fq.e
    gr = get_galois_ring(p, e)
    H = witt_index_bound(w)
    target = _min_prec(H, hi)
    if target is None:
        raise PrecisionError("an exact Witt vector needs an explicit index bound hi")
    # exact working copy; digits beyond the bound do not influence indices < target
    lam = min([0.0] + [x.valuation / p**j for j, x in enumerate(w.coords) if x.coeffs])
    pad = p ** (m - 1) * math.ceil(-lam) + 1
    work_prec = max(ceil_div(target, p ** (m - 1 - t)) for t in range(m)) + pad
    ring = SeriesRing(fq)
    x = WittVector(ring, [TruncSeries(fq, c.start, c.coeffs, work_prec) for c in w.coords], p)
    out: list[tuple[int, WElem]] = []
    guard = 0
    while True:
        n, idx = _index_of(x)
        known = min(ceil_div(x.coords[t].prec, 1) * p ** (m - 1 - t) for t in range(m))
        if n >= target:
            break
        if known < target:
            raise PrecisionError("working precision exhausted during canonical peeling")
        s, i = slot_case(n, p, m)
        digits = []
        for t in range(s, m):
            ex = n // p ** (m - 1 - t)
            digits.append(x.coords[t].coefficient(ex))
        c = gr.from_witt(digits)
        out.append((n, c))
        x = x - component_witt(p, e, m, n, c)
        guard += 1
        if guard > 100000:
            raise RuntimeError("canonical peeling did not terminate")
    final_known = min(x.coords[t].prec * p ** (m - 1 - t) for t in range(m))
    if final_known < target:
        raise PrecisionError("working precision exhausted during canonical peeling")
    return CanonicalForm.build(p, e, m, 0, out, int(target))


def scalar_mul(w: WittVector, f: CanonicalForm, hi: int | None = None) -> CanonicalForm:
    """w . f for w in W_m(K) via the canonical coordinates of w."""
    if hi is None and f.hi is not None and f.lo != math.inf:
        # components of w at index >= f.hi - f.lo cannot reach the known window
        hi = int(f.hi - f.lo) if f.comps else f.hi
    wc = to_canonical(w, hi=hi)
    return form_mul(wc, f)


def dlog_teich(f: TruncSeries, m: int, hi: int) -> CanonicalForm:
    """dlog[f]_m = [f]^(-1) d[f]_m for a unit f of K, known below index ``hi``."""
    fq = f.field
    p = fq.p
    if f.is_zero():
        raise PrecisionError("dlog of a series that is zero to its precision")
    v = f.start
    u0 = f.coeffs[0]
    unit = f.shift(-v).scale(fq.inv(u0))  # 1 + pi g
    ring = SeriesRing(fq)
    out = CanonicalForm.dlog_pi(p, fq.e, m).int_mul(v).truncate(hi)
    if unit.prec is None and len(unit.coeffs) == 1:
        return out
    N = max(1, ceil_div(hi, p ** (m - 1)) + 1)
    inv = unit.invert(prec=unit.prec if unit.prec is not None else N + 1)
    if unit.prec is None:
        unit = unit.truncate_to(max(N + 1, unit.degree() + 1))
        unit = TruncSeries(fq, unit.start, unit.coeffs, None)
        inv = inv.with_prec(None) if inv.prec is None else inv
    X = to_canonical(teichmuller(unit, m, ring), hi=hi)
    Y = to_canonical(teichmuller(inv, m, ring), hi=hi)
    return (out + form_mul(Y, op_d(X))).truncate(hi)


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------


def format_form(f: CanonicalForm) -> str:
    fq = f.field
    parts = []
    for n, c in f.comps:
        s, _ = slot_case(n, f.p, f.m)
        digits = f.gr.to_witt(c)
        body = "[" + ",".join(fq.format(d) for d in digits) + "]"
        if s == 0:
            token = f"A[ {body} ]" + ("*dlogpi" if f.q == 1 else "")
        else:
            token = f"V^{s}[ {body} ]"
        parts.append(f"n={n}: {token}")
    inner = "{ " + ", ".join(parts) + " }" if parts else "{ }"
    text = f"q={f.q} m={f.m} p={f.p} e={f.e} {inner}"
    if f.hi is not None:
        text += f" + O(idx {f.hi})"
    return text


_HEADER = re.compile(r"^\s*q=(\d+)\s+m=(\d+)\s+p=(\d+)\s+e=(\d+)\s*\{(.*)\}\s*(?:\+\s*O\(\s*idx\s+(-?\d+)\s*\))?\s*$", re.S)
_COMP = re.compile(r"^n=(-?\d+):\s*(A|d?V\^(\d+))\[\s*(\[.*\])\s*\](\*dlogpi)?$", re.S)


def parse_form(text: str) -> CanonicalForm:
    m_ = _HEADER.match(text)
    if not m_:
        raise ValueError(f"cannot parse canonical form {text!r}")
    q, m, p, e = (int(m_.group(k)) for k in range(1, 5))
    hi = int(m_.group(6)) if m_.group(6) is not None else None
    fq = get_field(p, e)
    gr = get_galois_ring(p, e)
    comps = []
    for raw in _split_top(m_.group(5)):
        raw = raw.strip()
        if not raw:
            continue
        cm = _COMP.match(raw)
        if not cm:
            raise ValueError(f"cannot parse component {raw!r}")
        n = int(cm.group(1))
        s_expected, _ = slot_case(n, p, m)
        s = 0 if cm.group(2) == "A" else int(cm.group(3))
        if s != s_expected:
            raise ValueError(f"component at n={n} must use slot shape s={s_expected}")
        if (cm.group(5) is not None) != (q == 1 and s == 0):
            raise ValueError(f"dlogpi marker misplaced at n={n}")
        digits = [fq.parse(t) for t in _split_top(cm.group(4).strip()[1:-1]) if t.strip()]
        if len(digits) != level(n, p, m):
            raise ValueError(f"component at n={n} needs {level(n, p, m)} Witt coordinates")
        comps.append((n, gr.from_witt(digits)))
    return CanonicalForm.build(p, e, m, q, comps, hi)


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def e_exponent(n: int, p: int, m: int) -> Fraction:
    """The fractional exponent n / p^(m-1) attached to index n."""
    return Fraction(n, p ** (m - 1))
