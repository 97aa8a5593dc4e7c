"""W_r(F_q) realized as the Galois ring Z/p^r[xi]/(f~).

``f~`` is the naive integer lift of the Conway polynomial of F_q.  The Witt
Frobenius is the automorphism sigma sending xi to the Hensel root of ``f~``
that is congruent to xi^p.  Elements are coefficient tuples in the power basis
``1, xi, ..., xi^(e-1)`` reduced modulo p^r, which also gives the additive
identification W_r(F_q) = (Z/p^r)^e used by the linear algebra.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .fields import FqField, get_field

# every level used by the package stays below this bound
MAX_LEVEL = 8


class GaloisRing:
    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.field: FqField = get_field(p, e)
        self.modulus = tuple(self.field.modulus)
        self.N = p**MAX_LEVEL
        self._sigma_powers = self._frobenius_images(self.N)

    def __repr__(self) -> str:
        return f"GaloisRing(p={self.p}, e={self.e})"

    def __reduce__(self):
        return (get_galois_ring, (self.p, self.e))

    # -- raw tuple arithmetic modulo a given power of p ------------------------
    def _mul(self, a: Sequence[int], b: Sequence[int], mod: int) -> tuple[int, ...]:
        e, f = self.e, self.modulus
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for t in range(e + 1):
                    prod[k - e + t] -= c * f[t]
        return tuple(c % mod for c in prod[:e])

    def _eval(self, poly: Sequence[int], x: Sequence[int], mod: int) -> tuple[int, ...]:
        acc = (0,) * self.e
        for c in reversed(poly):
            acc = self._mul(acc, x, mod)
            acc = (acc[0] + c,) + acc[1:]
            acc = tuple(t % mod for t in acc)
        return acc

    def _inv_unit(self, a: Sequence[int], mod: int) -> tuple[int, ...]:
        """Inverse of a unit by Newton iteration from the residue field inverse."""
        fq = self.field
        a0 = fq.from_digits([c % self.p for c in a])
        y = tuple(fq.digits(fq.inv(a0)))
        one = tuple(c % mod for c in (1,) + (0,) * (self.e - 1))
        # each Newton step doubles the p-adic precision of y
        for _ in range(MAX_LEVEL.bit_length() + 1):
            if self._mul(a, y, mod) == one:
                return y
            ay = self._mul(a, y, mod)
            two_minus = tuple(((2 if i == 0 else 0) - c) % mod for i, c in enumerate(ay))
            y = self._mul(y, two_minus, mod)
        if self._mul(a, y, mod) != one:
            raise ArithmeticError("Newton inversion failed to converge")
        return y

    def _frobenius_images(self, mod: int) -> list[tuple[int, ...]]:
        """Powers zeta^t of the Hensel root zeta = xi^p + O(p)."""
        e = self.e
        if e == 1:
            return [(1,)]
        f = self.modulus
        df = [t * f[t] for t in range(1, e + 1)]
        xi = (0, 1) + (0,) * (e - 2)
        zeta = (1,) + (0,) * (e - 1)
        for _ in range(self.p):
            zeta = self._mul(zeta, xi, mod)
        for _ in range(MAX_LEVEL + 2):
            fz = self._eval(f, zeta, mod)
            if not any(fz):
                break
            dfz = self._eval(df, zeta, mod)
            step = self._mul(fz, self._inv_unit(dfz, mod), mod)
            zeta = tuple((z - s) % mod for z, s in zip(zeta, step))
        if any(self._eval(f, zeta, mod)):
            raise ArithmeticError("Hensel lifting of the Frobenius root did not converge")
        powers = [(1,) + (0,) * (e - 1)]
        for _ in range(1, e):
            powers.append(self._mul(powers[-1], zeta, mod))
        return powers

    # -- element constructors -----------------------------------------------------
    def elem(self, r: int, coeffs: Sequence[int]) -> "WElem":
        coeffs = list(coeffs) + [0] * (self.e - len(coeffs))
        mod = self.p**r
        return WElem(self, r, tuple(c % mod for c in coeffs))

    def zero(self, r: int) -> "WElem":
        return WElem(self, r, (0,) * self.e)

    def one(self, r: int) -> "WElem":
        return self.elem(r, [1])

    def from_int(self, r: int, n: int) -> "WElem":
        return self.elem(r, [n])

    def lift(self, r: int, x: int) -> "WElem":
        """The naive lift of an F_q element (digits as integers)."""
        return self.elem(r, self.field.digits(x))

    def teichmuller(self, r: int, x: int) -> "WElem":
        if r == 0 or x == 0:
            return self.zero(r)
        y = self.lift(r, x)
        return y ** (self.field.q ** (r - 1))

    def residue(self, a: "WElem") -> int:
        """Image in F_q = W_1(F_q)."""
        return self.field.from_digits([c % self.p for c in a.c])

    def from_witt(self, coords: Sequence[int]) -> "WElem":
        """Ghost-order Witt coordinates (x_0, ..., x_{r-1}) over F_q to the ring model."""
        r = len(coords)
        fq = self.field
        acc = self.zero(r)
        for j, x in enumerate(coords):
            if x:
                root = x
                for _ in range(j):
                    root = fq.frobenius_inv(root)
                acc = acc + self.teichmuller(r, root).mul_int(self.p**j)
        return acc

    def to_witt(self, a: "WElem") -> list[int]:
        """Inverse of :meth:`from_witt`: peel Teichmueller digits."""
        r = a.r
        fq = self.field
        out = []
        g = a
        for j in range(r):
            d = self.residue(g)
            x = d
            for _ in range(j):
                x = fq.frobenius(x)
            out.append(x)
            g = (g - self.teichmuller(g.r, d)).div_p(1)
        return out


class WElem:
    """An element of W_r(F_q) in the Galois-ring model."""

    __slots__ = ("gr", "r", "c")

    def __init__(self, gr: GaloisRing, r: int, c: tuple[int, ...]):
        self.gr = gr
        self.r = r
        self.c = c

    @property
    def mod(self) -> int:
        return self.gr.p**self.r

    def _same(self, other: "WElem") -> None:
        if self.r != other.r or self.gr is not other.gr:
            raise ValueError(f"level mismatch: W_{self.r} vs W_{other.r}")

    def __add__(self, other: "WElem") -> "WElem":
        self._same(other)
        mod = self.mod
        return WElem(self.gr, self.r, tuple((a + b) % mod for a, b in zip(self.c, other.c)))

    def __sub__(self, other: "WElem") -> "WElem":
        self._same(other)
        mod = self.mod
        return WElem(self.gr, self.r, tuple((a - b) % mod for a, b in zip(self.c, other.c)))

    def __neg__(self) -> "WElem":
        mod = self.mod
        return WElem(self.gr, self.r, tuple((-a) % mod for a in self.c))

    def __mul__(self, other) -> "WElem":
        if isinstance(other, int):
            return self.mul_int(other)
        self._same(other)
        return WElem(self.gr, self.r, self.gr._mul(self.c, other.c, self.mod))

    __rmul__ = __mul__

    def mul_int(self, n: int) -> "WElem":
        mod = self.mod
        return WElem(self.gr, self.r, tuple((a * n) % mod for a in self.c))

    def __pow__(self, k: int) -> "WElem":
        result = self.gr.one(self.r)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WElem):
            return NotImplemented
        return self.r == other.r and self.c == other.c and self.gr.p == other.gr.p and self.gr.e == other.gr.e

    def __hash__(self) -> int:
        return hash((self.r, self.c))

    def __repr__(self) -> str:
        return f"W{self.r}{list(self.c)}"

    def is_zero(self) -> bool:
        return not any(self.c)

    def valuation(self) -> int:
        """p-adic valuation, r for zero."""
        p = self.gr.p
        v = self.r
        for a in self.c:
            if a:
                t = 0
                while a % p == 0:
                    a //= p
                    t += 1
                v = min(v, t)
        return v

    def reduce(self, r: int) -> "WElem":
        """Image under W_self.r -> W_r (requires r <= self.r)."""
        if r > self.r:
            raise ValueError("cannot reduce to a higher level")
        mod = self.gr.p**r
        return WElem(self.gr, r, tuple(a % mod for a in self.c))

    def raise_level(self, r: int) -> "WElem":
        """The canonical integer representative, viewed at a higher level."""
        return WElem(self.gr, r, tuple(a % (self.gr.p**r) for a in self.c))

    def div_p(self, k: int) -> "WElem":
        """Exact division by p^k, landing at level r - k."""
        p = self.gr.p
        pk = p**k
        if any(a % pk for a in self.c):
            raise ValueError("element is not divisible by p^k")
        r = max(self.r - k, 0)
        mod = p**r
        return WElem(self.gr, r, tuple((a // pk) % mod for a in self.c))

    def sigma(self, k: int = 1) -> "WElem":
        """The Witt Frobenius automorphism applied k times (k may be negative)."""
        gr = self.gr
        k %= gr.e
        out = self
        for _ in range(k):
            acc = [0] * gr.e
            for t, a in enumerate(out.c):
                if a:
                    for i, z in enumerate(gr._sigma_powers[t]):
                        acc[i] += a * z
            mod = out.mod
            out = WElem(gr, out.r, tuple(x % mod for x in acc))
        return out

    def inverse(self) -> "WElem":
        if self.valuation() > 0 or self.r == 0:
            raise ZeroDivisionError("not a unit of W_r(F_q)")
        return WElem(self.gr, self.r, self.gr._inv_unit(self.c, self.mod))


@lru_cache(maxsize=None)
def get_galois_ring(p: int, e: int) -> GaloisRing:
    return GaloisRing(p, e)
