"""Finite fields F_q and truncated Laurent series over them.

Elements of F_q = F_p[a]/(f) are encoded as integers ``sum c_i p^i`` where
``c_i`` is the coefficient of ``a^i`` in the power basis.  ``f`` is taken from a
fixed table of Conway polynomials so that encodings are stable across runs.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapError, PrecisionError

# Conway polynomials, coefficients listed from the constant term upward.
CONWAY: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1), (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1), (3, 2): (2, 2, 1), (3, 3): (1, 2, 0, 1), (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1), (5, 2): (2, 4, 1), (5, 3): (3, 3, 0, 1), (5, 4): (2, 4, 4, 0, 1),
    (7, 1): (4, 1), (7, 2): (3, 6, 1), (7, 3): (4, 0, 6, 1), (7, 4): (3, 4, 5, 0, 1),
    (11, 1): (9, 1), (11, 2): (2, 7, 1), (11, 3): (9, 2, 0, 1), (11, 4): (2, 10, 8, 0, 1),
    (13, 1): (11, 1), (13, 2): (2, 12, 1), (13, 3): (11, 2, 0, 1), (13, 4): (2, 12, 3, 0, 1),
}

MAX_P = 13
MAX_E = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def check_prime(p: int) -> None:
    if not is_prime(p):
        raise CapError(f"p must be prime, got {p}")
    if p > MAX_P:
        raise CapError(f"p must be at most {MAX_P}, got {p}")


class FqField:
    """The finite field with q = p^e elements, elements encoded as ints in [0, q)."""

    def __init__(self, p: int, e: int = 1):
        check_prime(p)
        if not 1 <= e <= MAX_E:
            raise CapError(f"extension degree e must be in [1, {MAX_E}], got {e}")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = CONWAY[(p, e)]
        self._digits = [self._to_digits(a) for a in range(self.q)]
        self._exp, self._log = self._build_tables()
        self._add = None
        if self.e > 1 and self.p != 2 and self.q <= 729:
            self._add = [[self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)]

    def __repr__(self) -> str:
        return f"FqField(p={self.p}, e={self.e})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FqField) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash(("FqField", self.p, self.e))

    def __reduce__(self):
        return (get_field, (self.p, self.e))

    # -- encoding -----------------------------------------------------------
    def _to_digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits: Sequence[int]) -> int:
        if len(digits) > self.e:
            raise ValueError(f"too many coordinates for F_{self.q}: {list(digits)}")
        out = 0
        for c in reversed(list(digits)):
            out = out * self.p + (c % self.p)
        return out

    def digits(self, a: int) -> tuple[int, ...]:
        return self._digits[a]

    def _poly_mul_mod(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        p, e, f = self.p, self.e, self.modulus
        prod = [0] * (2 * e - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    prod[i + j] = (prod[i + j] + ui * vj) % p
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for t in range(e + 1):
                    prod[k - e + t] = (prod[k - e + t] - c * f[t]) % p
        return prod[:e]

    def _build_tables(self) -> tuple[list[int], list[int]]:
        q = self.q
        gen = self.from_digits([0, 1]) if self.e > 1 else (-self.modulus[0]) % self.p
        exp = [0] * (q - 1)
        log = [-1] * q
        cur = [1] + [0] * (self.e - 1)
        gdig = list(self._to_digits(gen))
        for k in range(q - 1):
            a = self.from_digits(cur)
            if log[a] != -1:
                raise CapError(f"defining polynomial for ({self.p},{self.e}) is not primitive")
            exp[k] = a
            log[a] = k
            cur = self._poly_mul_mod(cur, gdig)
        return exp, log

    # -- arithmetic ----------------------------------------------------------
    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_zero(self, a: int) -> bool:
        return a == 0

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a][b]
        return self._add_digits(a, b)

    def _add_digits(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        return self.from_digits([(x + y) for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits([-x for x in self._digits[a]])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return (a * b) % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def convolve(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        """Coefficients of the product of two polynomials over F_q, via digit convolutions."""
        e, p = self.e, self.p
        if self._add is not None and len(u) * len(v) <= 64:
            return self._convolve_small(u, v)
        A = np.array([self._digits[a] for a in u], dtype=np.int64).reshape(len(u), e)
        B = np.array([self._digits[b] for b in v], dtype=np.int64).reshape(len(v), e)
        n = len(u) + len(v) - 1
        C = np.zeros((n, 2 * e - 1), dtype=np.int64)
        for s_ in range(e):
            for t in range(e):
                C[:, s_ + t] += np.convolve(A[:, s_], B[:, t])
        C %= p
        f = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = C[:, k].copy()
            for t in range(e + 1):
                C[:, k - e + t] -= c * f[t]
            C %= p
        weights = p ** np.arange(e, dtype=np.int64)
        return (C[:, :e] @ weights).tolist()

    def _convolve_small(self, u: Sequence[int], v: Sequence[int]) -> list[int]:
        # schoolbook product through the log and addition tables, cheaper than numpy for short inputs
        out = [0] * (len(u) + len(v) - 1)
        log, exp, add, r = self._log, self._exp, self._add, self.q - 1
        for i, a in enumerate(u):
            if a:
                la = log[a]
                for j, b in enumerate(v):
                    if b:
                        out[i + j] = add[out[i + j]][exp[(la + log[b]) % r]]
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        """a -> a^p."""
        return self.pow(a, self.p)

    def frobenius_inv(self, a: int) -> int:
        """The unique b with b^p = a (F_q is perfect)."""
        return self.pow(a, self.p ** (self.e - 1))

    def elements(self) -> range:
        return range(self.q)

    # -- text ----------------------------------------------------------------
    def format(self, a: int) -> str:
        if self.e == 1:
            return str(a)
        return "[" + ",".join(str(c) for c in self._digits[a]) + "]"

    def parse(self, text: str) -> int:
        text = text.strip()
        if text.startswith("["):
            if not text.endswith("]"):
                raise ValueError(f"bad field element {text!r}")
            body = text[1:-1].strip()
            parts = [int(t) for t in body.split(",")] if body else []
            return self.from_digits(parts)
        return self.from_int(int(text))


@lru_cache(maxsize=None)
def get_field(p: int, e: int = 1) -> FqField:
    return FqField(p, e)


# ---------------------------------------------------------------------------
# Truncated Laurent series
# ---------------------------------------------------------------------------


class TruncSeries:
    """A Laurent series sum c_i pi^i over F_q, known modulo O(pi^prec).

    ``prec`` is ``None`` for an exact Laurent polynomial.  Coefficients are
    stored densely starting at ``start``; the stored list never reaches the
    precision bound and never starts with a zero.
    """

    __slots__ = ("field", "start", "coeffs", "prec")

    def __init__(self, field: FqField, start: int, coeffs: Iterable[int], prec: int | None):
        cs = list(coeffs)
        if prec is not None:
            cs = cs[: max(0, prec - start)]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        start += lead
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            start = 0
        self.field = field
        self.start = start
        self.coeffs = tuple(cs)
        self.prec = prec

    # -- constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, field: FqField, prec: int | None = None) -> "TruncSeries":
        return cls(field, 0, (), prec)

    @classmethod
    def constant(cls, field: FqField, c: int, prec: int | None = None) -> "TruncSeries":
        return cls(field, 0, (c,), prec)

    @classmethod
    def monomial(cls, field: FqField, c: int, k: int, prec: int | None = None) -> "TruncSeries":
        return cls(field, k, (c,), prec)

    @classmethod
    def from_dict(cls, field: FqField, terms: dict[int, int], prec: int | None = None) -> "TruncSeries":
        terms = {k: v for k, v in terms.items() if v and (prec is None or k < prec)}
        if not terms:
            return cls.zero(field, prec)
        lo, hi = min(terms), max(terms)
        return cls(field, lo, [terms.get(k, 0) for k in range(lo, hi + 1)], prec)

    # -- basic queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        """True when no nonzero digit is known (zero to the stated precision)."""
        return not self.coeffs

    @property
    def valuation(self) -> float:
        if self.coeffs:
            return self.start
        return math.inf if self.prec is None else self.prec

    def coefficient(self, i: int) -> int:
        if self.prec is not None and i >= self.prec:
            raise PrecisionError(f"coefficient of pi^{i} is beyond precision O(pi^{self.prec})")
        j = i - self.start
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0

    def terms(self) -> dict[int, int]:
        return {self.start + j: c for j, c in enumerate(self.coeffs) if c}

    def degree(self) -> int:
        """Largest exponent carrying a nonzero stored coefficient."""
        if not self.coeffs:
            raise ValueError("zero series has no degree")
        return self.start + len(self.coeffs) - 1

    def polar_part(self) -> "TruncSeries":
        return TruncSeries.from_dict(self.field, {k: c for k, c in self.terms().items() if k < 0}, None)

    def truncate_to(self, n: int) -> "TruncSeries":
        new = n if self.prec is None else min(n, self.prec)
        return TruncSeries(self.field, self.start, self.coeffs, new)

    def with_prec(self, prec: int | None) -> "TruncSeries":
        """Reinterpret with a weaker precision (never a stronger one)."""
        if prec is None:
            if self.prec is not None:
                raise PrecisionError("cannot promote a truncated series to exact")
            return self
        return self.truncate_to(prec)

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other: "TruncSeries") -> None:
        if self.field != other.field:
            raise ValueError("series over different fields")

    def _coerce(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        if isinstance(other, int):
            return TruncSeries.constant(self.field, self.field.from_int(other), None)
        return NotImplemented

    def __add__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        prec = _min_prec(self.prec, other.prec)
        if not self.coeffs:
            return other.truncate_to(prec) if prec is not None else other
        if not other.coeffs:
            return self.truncate_to(prec) if prec is not None else self
        lo = min(self.start, other.start)
        hi = max(self.start + len(self.coeffs), other.start + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        if f.e == 1:
            out = [0] * max(0, hi - lo)
            for j, c in enumerate(self.coeffs):
                k = self.start + j - lo
                if k < len(out):
                    out[k] = c
            for j, c in enumerate(other.coeffs):
                k = other.start + j - lo
                if k < len(out):
                    out[k] = (out[k] + c) % f.p
        else:
            out = [0] * max(0, hi - lo)
            for j, c in enumerate(self.coeffs):
                k = self.start + j - lo
                if k < len(out):
                    out[k] = c
            for j, c in enumerate(other.coeffs):
                k = other.start + j - lo
                if k < len(out):
                    out[k] = f.add(out[k], c)
        return TruncSeries(f, lo, out, prec)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        f = self.field
        return TruncSeries(f, self.start, [f.neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "TruncSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncSeries":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        # precision: min(v1 + N2, v2 + N1); exact inputs contribute no bound
        bound = min(_prec_term(self.valuation, other.prec), _prec_term(other.valuation, self.prec))
        prec = None if bound == math.inf else int(bound)
        if not self.coeffs or not other.coeffs:
            return TruncSeries.zero(f, prec)
        start = self.start + other.start
        if f.e == 1:
            length = len(self.coeffs) + len(other.coeffs) - 1
            if prec is not None:
                length = min(length, prec - start)
            if length <= 0:
                return TruncSeries.zero(f, prec)
            a = np.array(self.coeffs[:length], dtype=np.int64)
            b = np.array(other.coeffs[:length], dtype=np.int64)
            out = (np.convolve(a, b)[:length] % f.p).tolist()
        else:
            length = len(self.coeffs) + len(other.coeffs) - 1
            if prec is not None:
                length = min(length, prec - start)
            if length <= 0:
                return TruncSeries.zero(f, prec)
            out = f.convolve(self.coeffs[:length], other.coeffs[:length])[:length]
        return TruncSeries(f, start, out, prec)

    __rmul__ = __mul__

    def scale(self, c: int) -> "TruncSeries":
        f = self.field
        return TruncSeries(f, self.start, [f.mul(c, x) for x in self.coeffs], self.prec)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by pi^k."""
        prec = None if self.prec is None else self.prec + k
        return TruncSeries(self.field, self.start + k, self.coeffs, prec)

    def pth_power(self) -> "TruncSeries":
        """Frobenius: sum c_i pi^i -> sum c_i^p pi^{pi}."""
        f = self.field
        p = f.p
        terms = {p * k: f.frobenius(c) for k, c in self.terms().items()}
        prec = None if self.prec is None else p * self.prec
        return TruncSeries.from_dict(f, terms, prec)

    def pth_root(self) -> "TruncSeries":
        """Inverse Frobenius on series whose exponents are all divisible by p."""
        f = self.field
        p = f.p
        terms = {}
        for k, c in self.terms().items():
            if k % p:
                raise ValueError("series is not a p-th power")
            terms[k // p] = f.frobenius_inv(c)
        prec = None if self.prec is None else -(-self.prec // p)
        return TruncSeries.from_dict(f, terms, prec)

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            return self.invert() ** (-k)
        result = TruncSeries.constant(self.field, 1, None)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def invert(self, prec: int | None = None) -> "TruncSeries":
        """Inverse of a unit of K.

        For an exact input a target precision must be supplied; for a series
        with valuation v known to O(pi^N) the inverse is known to O(pi^(N - 2v)).
        """
        f = self.field
        if not self.coeffs:
            raise PrecisionError("cannot invert a series that is zero to its precision")
        v = self.start
        if self.prec is not None:
            target = self.prec - 2 * v
            if prec is not None:
                target = min(target, prec)
        else:
            if prec is None:
                raise PrecisionError("inverting an exact series needs a target precision")
            target = prec
        n = target + v  # number of coefficients needed for u^{-1}, u = self / pi^v
        if n <= 0:
            return TruncSeries.zero(f, target)
        u = list(self.coeffs) + [0] * max(0, n - len(self.coeffs))
        inv0 = f.inv(u[0])
        out = [0] * n
        out[0] = inv0
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                if u[j]:
                    acc = f.add(acc, f.mul(u[j], out[k - j]))
            out[k] = f.neg(f.mul(acc, inv0))
        return TruncSeries(f, -v, out, target)

    # -- comparison ----------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            if isinstance(other, int):
                return self == TruncSeries.constant(self.field, self.field.from_int(other), self.prec)
            return NotImplemented
        return (self.field, self.start, self.coeffs, self.prec) == (
            other.field, other.start, other.coeffs, other.prec)

    def __hash__(self) -> int:
        return hash((self.field, self.start, self.coeffs, self.prec))

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Equality of all digits known in both series."""
        prec = _min_prec(self.prec, other.prec)
        a = self if prec is None else self.truncate_to(prec)
        b = other if prec is None else other.truncate_to(prec)
        return a.start == b.start and a.coeffs == b.coeffs

    # -- text ----------------------------------------------------------------
    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        return f"TruncSeries({format_series(self)!r})"


def _prec_term(v: float, n: int | None) -> float:
    if n is None or v == math.inf:
        return math.inf
    return v + n


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def format_series(s: TruncSeries) -> str:
    f = s.field
    parts = []
    for k, c in sorted(s.terms().items()):
        mono = f"pi^{k}"
        if k == 0:
            parts.append(f.format(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{f.format(c)}*{mono}")
    if s.prec is not None:
        parts.append(f"O(pi^{s.prec})")
    return " + ".join(parts) if parts else "0"


_TERM = re.compile(r"^(?:(?P<c>\[[^\]]*\]|\d+)\s*\*\s*)?pi\^(?P<k>-?\d+)$|^(?P<const>\[[^\]]*\]|\d+)$")
_BIGO = re.compile(r"^O\(\s*pi\^(?P<k>-?\d+)\s*\)$")


def parse_series(text: str, field: FqField, default_prec: int | None = None) -> TruncSeries:
    """Parse the text syntax ``2*pi^-3 + pi^0 + O(pi^7)``.

    A bare integer or ``[c0,c1,...]`` is a constant term.  Without an O-term the
    series is exact unless ``default_prec`` is given.
    """
    pieces = _split_plus(text)
    terms: dict[int, int] = {}
    prec = default_prec
    for raw in pieces:
        tok = raw.replace(" ", "")
        if not tok:
            raise ValueError(f"empty term in series {text!r}")
        m = _BIGO.match(tok)
        if m:
            prec = int(m.group("k"))
            continue
        m = _TERM.match(tok)
        if not m:
            raise ValueError(f"cannot parse series term {raw!r}")
        if m.group("const") is not None:
            k, c = 0, field.parse(m.group("const"))
        else:
            k = int(m.group("k"))
            c = field.parse(m.group("c")) if m.group("c") else 1
        terms[k] = field.add(terms.get(k, 0), c)
    return TruncSeries.from_dict(field, terms, prec)


def _split_plus(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "+" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [t.strip() for t in out]


class SeriesRing:
    """Coefficient-ring adapter so Witt vectors can live over TruncSeries.

    Constants are exact; precision is carried by the series themselves.
    """

    def __init__(self, field: FqField):
        self.field = field
        self.p = field.p

    def __repr__(self) -> str:
        return f"SeriesRing({self.field!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SeriesRing) and self.field == other.field

    def __hash__(self) -> int:
        return hash(("SeriesRing", self.field))

    def zero(self) -> TruncSeries:
        return TruncSeries.zero(self.field)

    def one(self) -> TruncSeries:
        return TruncSeries.constant(self.field, 1)

    def from_int(self, n: int) -> TruncSeries:
        return TruncSeries.constant(self.field, self.field.from_int(n))

    def is_zero(self, a: TruncSeries) -> bool:
        return a.is_zero()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def frobenius(self, a: TruncSeries) -> TruncSeries:
        return a.pth_power()

    def format(self, a: TruncSeries) -> str:
        return format_series(a)
